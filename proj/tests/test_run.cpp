#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wlab/io.hpp"
#include "wlab/run.hpp"

using namespace wlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / "wlab-test" / name;
  fs::remove_all(d);
  return d;
}

const char* kSmokeEvolve =
    "command = evolve\n"
    "[model]\nfamily = whitham\nepsilon = 0.1\nc = 1\ntime-scale = tau\n"
    "[grid]\nN = 512\nL = 5\n"
    "[initial]\nu = gaussian(1, 1)\n"
    "[evolve]\nT-final = 0.2\nNt = 100\nrecord-every = 10\n";

}  // namespace

TEST_CASE("evolve run writes the full artifact set") {
  RunConfig cfg = parse_config(kSmokeEvolve);
  fs::path dir = fresh_dir("evolve");
  cfg.output_dir = dir.string();
  const int code = run(cfg);
  CHECK(code == kExitOk);

  CHECK(fs::exists(dir / "run-manifest.txt"));
  CHECK(fs::exists(dir / "diagnostics.csv"));
  CHECK(fs::exists(dir / "final_state.csv"));
  CHECK(fs::exists(dir / "spectrum_final.csv"));
  CHECK(fs::exists(dir / "fits.csv"));
  CHECK(fs::exists(dir / "breakdown.txt"));
  CHECK(fs::exists(dir / "linf.svg"));
  CHECK(fs::exists(dir / "edrift.svg"));

  // every artifact named in the manifest exists; no orphan csv/svg files
  const std::string manifest = slurp(dir / "run-manifest.txt");
  std::size_t artifacts = 0;
  std::stringstream ss(manifest);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("artifact = ", 0) == 0) {
      ++artifacts;
      CHECK(fs::exists(dir / line.substr(11)));
    }
  }
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().filename() != "run-manifest.txt") ++files;
  CHECK(files == artifacts);
  CHECK(manifest.find("stop-cause = completed") != std::string::npos);
}

TEST_CASE("re-running a config reproduces byte-identical CSVs") {
  RunConfig cfg = parse_config(kSmokeEvolve);
  fs::path d1 = fresh_dir("rerun-a");
  fs::path d2 = fresh_dir("rerun-b");
  cfg.output_dir = d1.string();
  REQUIRE(run(cfg) == kExitOk);
  cfg.output_dir = d2.string();
  REQUIRE(run(cfg) == kExitOk);
  for (const auto& entry : fs::directory_iterator(d1)) {
    if (entry.path().extension() != ".csv") continue;
    CHECK(slurp(entry.path()) == slurp(d2 / entry.path().filename()));
  }
}

TEST_CASE("solve-tw writes a profile and reports non-convergence distinctly") {
  RunConfig good = parse_config(
      "command = solve-tw\n"
      "[model]\nfamily = whitham\nepsilon = 0.1\nc = 1.05\n"
      "[grid]\nN = 2048\nL = 5\n");
  fs::path dir = fresh_dir("solve-ok");
  good.output_dir = dir.string();
  CHECK(run(good) == kExitOk);
  CHECK(fs::exists(dir / "profile.csv"));
  CHECK(fs::exists(dir / "spectrum.csv"));
  CHECK(fs::exists(dir / "residual_history.csv"));

  // far beyond the existence range: stagnation, exit 3, history retained
  RunConfig bad = parse_config(
      "command = solve-tw\n"
      "[model]\nfamily = whitham\nepsilon = 0.1\nc = 3.0\n"
      "[grid]\nN = 1024\nL = 5\n"
      "[solve]\nmax-newton = 12\n");
  fs::path bdir = fresh_dir("solve-bad");
  bad.output_dir = bdir.string();
  CHECK(run(bad) == kExitNonConvergence);
  CHECK(fs::exists(bdir / "residual_history.csv"));
  CHECK(fs::exists(bdir / "last_iterate.csv"));
  const std::string manifest = slurp(bdir / "run-manifest.txt");
  CHECK(manifest.find("converged = no") != std::string::npos);
}

TEST_CASE("snapshot and spectrum round-trip through files") {
  GridPtr g = Grid::make(256, 5.0);
  std::vector<double> u(g->size());
  for (int j = 0; j < g->size(); ++j)
    u[j] = std::exp(-g->x()[j] * g->x()[j]) * 1.7;
  State s = State::scalar(transform(u, g));
  fs::path dir = fresh_dir("io");
  fs::create_directories(dir);
  write_snapshot(dir / "snap.csv", s);
  LoadedSnapshot snap = read_snapshot(dir / "snap.csv");
  CHECK(snap.grid->size() == 256);
  CHECK(snap.grid->half_width() == doctest::Approx(5.0).epsilon(1e-12));
  std::vector<double> v = snap.state.u.values();
  for (int j = 0; j < 256; j += 17)
    CHECK(v[j] == doctest::Approx(u[j]).epsilon(1e-12));

  write_spectrum(dir / "spec.csv", s.u);
  std::vector<double> k, a;
  read_spectrum(dir / "spec.csv", k, a);
  CHECK(k.size() == 129);
  CHECK(a[0] == doctest::Approx(std::abs(s.u.coeffs()[0])).epsilon(1e-15));
}

TEST_CASE("fit-spectrum command on a written spectrum") {
  GridPtr g = Grid::make(1 << 12, 5.0);
  std::vector<cplx> c(g->size(), cplx(0.0, 0.0));
  for (int m = 1; m <= g->size() / 2; ++m) {
    const double k = m / 5.0;
    const double a = 2.0 * std::pow(k, -1.5) * std::exp(-0.3 * k);
    c[m] = cplx(a, 0.0);
    c[g->size() - m] = cplx(a, 0.0);
  }
  c[0] = 1.0;
  fs::path dir = fresh_dir("fitcmd");
  fs::create_directories(dir);
  write_spectrum(dir / "input.csv", SpectralField(g, c));

  RunConfig cfg = parse_config("command = fit-spectrum\n[fit]\ninput = " +
                               (dir / "input.csv").string() + "\n");
  cfg.output_dir = (dir / "out").string();
  CHECK(run(cfg) == kExitOk);
  const std::string fit = slurp(dir / "out" / "fit.txt");
  auto value_of = [&](const std::string& key) {
    const auto pos = fit.find(key + " = ");
    REQUIRE(pos != std::string::npos);
    return std::stod(fit.substr(pos + key.size() + 3));
  };
  CHECK(value_of("mu") == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(value_of("delta") == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("sweep-branch command maps a short branch") {
  RunConfig cfg = parse_config(
      "command = sweep-branch\n"
      "[model]\nfamily = whitham\nepsilon = 0.1\n"
      "[grid]\nN = 2048\nL = 5\n"
      "[sweep]\nc-values = 1.05,1.1\n");
  fs::path dir = fresh_dir("branch");
  cfg.output_dir = dir.string();
  CHECK(run(cfg) == kExitOk);
  const std::string table = slurp(dir / "branch.csv");
  CHECK(table.find("# c,maxU,mass,energy,residual,N_modes") != std::string::npos);
  CHECK(fs::exists(dir / "mass_vs_c.svg"));
  CHECK(fs::exists(dir / "profile_0_c1.05.csv"));
  const std::string manifest = slurp(dir / "run-manifest.txt");
  CHECK(manifest.find("complete = yes") != std::string::npos);
}

TEST_CASE("sweep-critical-times command writes the table") {
  RunConfig cfg = parse_config(
      "command = sweep-critical-times\n"
      "[model]\nfamily = whitham\nc = 1\ntime-scale = tau\n"
      "[grid]\nN = 4096\nL = 5\n"
      "[initial]\nu = gaussian(10, 1)\n"
      "[evolve]\nT-final = 0.14\nNt = 2000\nrecord-every = 10\n"
      "[sweep]\neps-values = 1\n");
  fs::path dir = fresh_dir("crit");
  cfg.output_dir = dir.string();
  CHECK(run(cfg) == kExitOk);
  const std::string table = slurp(dir / "critical_times.csv");
  CHECK(table.find("# eps,critical_time,mu,class") != std::string::npos);
  CHECK(fs::exists(dir / "eps1_fits.csv"));
}

TEST_CASE("compare-kdv command writes series and summary") {
  RunConfig cfg = parse_config(
      "command = compare-kdv\n"
      "[model]\nfamily = whitham\n"
      "[grid]\nN = 1024\nL = 5\n"
      "[initial]\nu = gaussian(1, 1)\n"
      "[evolve]\nNt = 200\nrecord-every = 20\n"
      "[compare]\nj = 0\nhorizon-multiple = 0.5\n"
      "[sweep]\neps-values = 0.1\n");
  fs::path dir = fresh_dir("cmp");
  cfg.output_dir = dir.string();
  CHECK(run(cfg) == kExitOk);
  CHECK(fs::exists(dir / "comparison_eps0.10000000000000001.csv"));
  const std::string summary = slurp(dir / "compare_summary.csv");
  CHECK(summary.find("# eps,m_j,complete") != std::string::npos);
  CHECK(summary.find("yes") != std::string::npos);
}

TEST_CASE("stability-map command writes the discriminant table") {
  RunConfig cfg = parse_config(
      "command = stability-map\n"
      "[model]\nfamily = boussinesq\nepsilon = 1\nc = 0.5\n"
      "[grid]\nN = 256\nL = 5\n"
      "[stability]\nkmax = 20\ncount = 100\n");
  fs::path dir = fresh_dir("stab");
  cfg.output_dir = dir.string();
  CHECK(run(cfg) == kExitOk);
  CHECK(fs::exists(dir / "stability.csv"));
  const std::string manifest = slurp(dir / "run-manifest.txt");
  CHECK(manifest.find("x-threshold = 1.915008048") != std::string::npos);
}
