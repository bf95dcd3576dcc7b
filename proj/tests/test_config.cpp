#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wlab/config.hpp"
#include "wlab/errors.hpp"

using namespace wlab;

TEST_CASE("minimal evolve config fills the documented defaults") {
  RunConfig cfg = parse_config(
      "command = evolve\n"
      "[grid]\n"
      "N = 256\n"
      "[initial]\n"
      "u = gaussian(1, 1)\n"
      "[evolve]\n"
      "T-final = 1\n"
      "Nt = 100\n");
  CHECK(cfg.command == Command::evolve_run);
  CHECK(cfg.evolve.stage_tol == 1e-12);
  CHECK(cfg.evolve.krasny_threshold == 1e-12);
  CHECK(cfg.evolve.stage_max_iter == 100);
  CHECK(cfg.newton.newton_tol == 1e-12);
  CHECK(cfg.newton.gmres_restart == 30);
  CHECK(!cfg.evolve.stage_solver.has_value());  // family default applies
}

TEST_CASE("the whitham-gauss-eps1 preset reproduces the paper setup") {
  RunConfig cfg = parse_config_file(SOURCE_DIR "/presets/whitham-gauss-eps1.cfg");
  CHECK(cfg.command == Command::evolve_run);
  CHECK(cfg.model.family == ModelFamily::whitham);
  CHECK(cfg.model.eps == 1.0);
  CHECK(cfg.model.scale == TimeScale::tau);
  CHECK(cfg.grid_n == (1 << 14));
  CHECK(cfg.grid_l == 5.0);
  CHECK(cfg.evolve.nt == 10000);
  CHECK(cfg.evolve.t_final == 0.2);
  REQUIRE(cfg.initial_u != nullptr);
  CHECK(cfg.initial_u->kind == InitialExpr::Kind::gaussian);
  CHECK(cfg.initial_u->p0 == 10.0);
  CHECK(cfg.initial_u->p1 == 1.0);
}

TEST_CASE("config errors carry line numbers and reject bad input") {
  CHECK_THROWS_WITH_AS(parse_config("command = evolve\nbogus\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("nonsense = 1\n"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nN = 1000\n"), ConfigError);  // power of 2
  CHECK_THROWS_AS(parse_config("[model]\nepsilon = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nN = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("command = fly-to-the-moon\n"), ConfigError);
  CHECK_THROWS_AS(
      parse_config("[model]\nfamily = boussinesq\ntime-scale = tau\n"),
      ConfigError);
}

TEST_CASE("initial-data expressions parse into the right tree") {
  auto e = parse_initial_expr("sum(soliton(1.2), gaussian(3, 1))");
  CHECK(e->kind == InitialExpr::Kind::sum);
  REQUIRE(e->args.size() == 2);
  CHECK(e->args[0]->kind == InitialExpr::Kind::soliton);
  CHECK(e->args[0]->p0 == 1.2);
  CHECK(e->args[1]->kind == InitialExpr::Kind::gaussian);
  CHECK(e->args[1]->p0 == 3.0);

  auto s = parse_initial_expr("scale(1.01, soliton(1.02))");
  CHECK(s->kind == InitialExpr::Kind::scale);
  CHECK(s->p0 == 1.01);

  auto sh = parse_initial_expr("shift(-4, soliton(1.1))");
  CHECK(sh->kind == InitialExpr::Kind::shift);
  CHECK(sh->p0 == -4.0);

  auto sg = parse_initial_expr("sine-gaussian(1, 10)");
  CHECK(sg->kind == InitialExpr::Kind::sine_gaussian);
  CHECK(sg->p1 == 10.0);

  CHECK(parse_initial_expr("zero")->kind == InitialExpr::Kind::zero);

  CHECK_THROWS_AS(parse_initial_expr("gauss(1,2)"), ConfigError);
  CHECK_THROWS_AS(parse_initial_expr("gaussian(1)"), ConfigError);
  CHECK_THROWS_AS(parse_initial_expr("gaussian(1,2) extra"), ConfigError);
}

TEST_CASE("overrides rewrite single keys") {
  RunConfig cfg = parse_config(
      "command = evolve\n[model]\nepsilon = 1\n[grid]\nN = 256\n"
      "[initial]\nu = gaussian(1,1)\n[evolve]\nT-final = 1\nNt = 10\n");
  apply_override(cfg, "model.epsilon=0.4");
  CHECK(cfg.model.eps == 0.4);
  apply_override(cfg, "evolve.Nt=40");
  CHECK(cfg.evolve.nt == 40);
  CHECK_THROWS_AS(apply_override(cfg, "model.epsilon"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "model.epsilon=-2"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "no.such=1"), ConfigError);
}

TEST_CASE("initial state construction: gaussians and zeros") {
  RunConfig cfg = parse_config(
      "command = evolve\n[model]\nfamily = boussinesq\nepsilon = 1\n"
      "[grid]\nN = 256\nL = 5\n"
      "[initial]\neta = gaussian(10, 1)\nu = zero\n"
      "[evolve]\nT-final = 0.1\nNt = 10\n");
  GridPtr g = Grid::make(cfg.grid_n, cfg.grid_l);
  State s = build_initial_state(cfg, g);
  REQUIRE(s.eta.has_value());
  CHECK(norms(*s.eta, 0).linf == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(norms(s.u, 0).linf == 0.0);
}
