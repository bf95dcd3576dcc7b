#include "wlab/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wlab/analysis.hpp"
#include "wlab/errors.hpp"
#include "wlab/io.hpp"
#include "wlab/kernels.hpp"

namespace wlab {

namespace fs = std::filesystem;

namespace {

// Collects manifest entries and the artifact list as a command runs.
struct Manifest {
  fs::path dir;
  std::vector<std::pair<std::string, std::string>> kv;
  std::vector<std::string> artifacts;

  explicit Manifest(const fs::path& d) : dir(d) { fs::create_directories(d); }

  void add(const std::string& key, const std::string& value) {
    kv.emplace_back(key, value);
  }
  void add(const std::string& key, double value) {
    kv.emplace_back(key, format_double(value));
  }
  fs::path file(const std::string& name) {
    artifacts.push_back(name);
    return dir / name;
  }
  void write() {
    for (const std::string& a : artifacts) kv.emplace_back("artifact", a);
    write_keyvalues(dir / "run-manifest.txt", kv);
  }
};

void describe_common(Manifest& man, const RunConfig& cfg) {
  man.add("command", command_name(cfg.command));
  man.add("model.family", family_name(cfg.model.family));
  man.add("model.epsilon", cfg.model.eps);
  man.add("model.beta", cfg.model.beta);
  man.add("model.c", cfg.model.c);
  man.add("model.time-scale", time_scale_name(cfg.model.scale));
  man.add("grid.N", format_double(cfg.grid_n));
  man.add("grid.L", cfg.grid_l);
  man.add("kernels.backend", kern::backend_name(kern::active()));
}

std::string snapshot_name(std::size_t index, double t) {
  std::ostringstream name;
  name << "snapshot_" << index << "_t" << format_double(t) << ".csv";
  return name.str();
}

void write_trajectory_artifacts(Manifest& man, const RunConfig& cfg,
                                const Trajectory& traj,
                                const std::string& prefix = "") {
  write_diagnostics(man.file(prefix + "diagnostics.csv"), traj.diagnostics);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
    write_snapshot(
        man.file(prefix + snapshot_name(i, traj.snapshots[i].first)),
        traj.snapshots[i].second);
  write_snapshot(man.file(prefix + "final_state.csv"), traj.final_state());
  write_spectrum(man.file(prefix + "spectrum_final.csv"),
                 traj.final_state().u);

  std::vector<double> t;
  for (const auto& r : traj.diagnostics) t.push_back(r.t);
  const char* time_label =
      cfg.model.scale == TimeScale::tau ? "tau" : "t";
  auto plot = [&](const std::string& name, auto getter, bool logy) {
    std::vector<double> y;
    for (const auto& r : traj.diagnostics) y.push_back(getter(r));
    write_svg_plot(man.file(prefix + name + ".svg"), t, y, time_label, name,
                   logy);
  };
  plot("linf", [](const DiagnosticsRow& r) { return r.linf; }, false);
  plot("l2", [](const DiagnosticsRow& r) { return r.l2; }, false);
  plot("dxl2", [](const DiagnosticsRow& r) { return r.dx_l2; }, false);
  plot("mass", [](const DiagnosticsRow& r) { return r.mass; }, false);
  plot("momentum", [](const DiagnosticsRow& r) { return r.momentum; }, false);
  plot("energy", [](const DiagnosticsRow& r) { return r.energy; }, false);
  plot("edrift", [](const DiagnosticsRow& r) { return r.energy_drift; }, true);
  plot("floor", [](const DiagnosticsRow& r) { return r.floor; }, true);

  man.add("stop-cause", stop_cause_name(traj.stop_cause));
  man.add("stop-time", traj.stop_time);
  man.add("steps-taken", format_double(traj.steps_taken));
  if (!traj.stop_detail.empty()) man.add("stop-detail", traj.stop_detail);
}

int breakdown_artifacts(Manifest& man, const RunConfig& cfg,
                        const Trajectory& traj, const std::string& prefix,
                        BreakdownReport* out_report) {
  if (traj.spectra.size() < 3) return kExitOk;
  BreakdownReport rep =
      detect_breakdown(traj, cfg.delta_tol.value_or(0.0),
                       cfg.evolve.krasny_threshold);
  write_fit_series(man.file(prefix + "fits.csv"), rep.fits);
  if (!rep.fits.empty()) {
    std::vector<double> t, d;
    for (const auto& [tt, fit] : rep.fits) {
      t.push_back(tt);
      d.push_back(fit.delta);
    }
    write_svg_plot(man.file(prefix + "delta.svg"), t, d,
                   cfg.model.scale == TimeScale::tau ? "tau" : "t", "delta",
                   false);
  }
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("classification", breakdown_name(rep.classification));
  kv.emplace_back("critical-time", format_double(rep.critical_time));
  kv.emplace_back("mu-at-critical", format_double(rep.mu_at_critical));
  kv.emplace_back("delta-tol", format_double(rep.delta_tol));
  kv.emplace_back("stop-cause", stop_cause_name(traj.stop_cause));
  write_keyvalues(man.file(prefix + "breakdown.txt"), kv);
  man.add(prefix + "breakdown", breakdown_name(rep.classification));
  if (rep.classification != Breakdown::none)
    man.add(prefix + "critical-time", rep.critical_time);
  if (out_report) *out_report = rep;
  return rep.classification == Breakdown::none ? kExitOk : kExitBreakdown;
}

int run_evolve(Manifest& man, const RunConfig& cfg) {
  GridPtr grid = Grid::make(cfg.grid_n, cfg.grid_l);
  State initial = build_initial_state(cfg, grid);
  if (cfg.initial_u) man.add("initial.u", cfg.initial_u->text);
  if (cfg.initial_eta) man.add("initial.eta", cfg.initial_eta->text);
  man.add("evolve.T-final", cfg.evolve.t_final);
  man.add("evolve.Nt", format_double(cfg.evolve.nt));
  man.add("evolve.stage-solver",
          stage_solver_name(
              cfg.evolve.stage_solver.value_or(default_stage_solver(cfg.model))));
  man.add("evolve.stage-tol", cfg.evolve.stage_tol);
  man.add("evolve.krasny-threshold", cfg.evolve.krasny_threshold);
  man.add("evolve.record-every", format_double(cfg.evolve.record_every));

  Trajectory traj = evolve(cfg.model, initial, cfg.evolve);
  write_trajectory_artifacts(man, cfg, traj);
  return breakdown_artifacts(man, cfg, traj, "", nullptr);
}

int run_solve_tw(Manifest& man, const RunConfig& cfg) {
  GridPtr grid = Grid::make(cfg.grid_n, cfg.grid_l);
  const double c = cfg.model.c;
  man.add("solve.newton-tol", cfg.newton.newton_tol);
  man.add("solve.gmres-tol", cfg.newton.gmres_tol);

  SpectralField init = SpectralField::zero(grid);
  if (cfg.initial_u) {
    RunConfig tmp = cfg;
    State s = build_initial_state(tmp, grid);
    init = s.u;
  } else {
    init = kdv_soliton(cfg.model.family, cfg.model.eps, cfg.model.beta,
                       (c - 1.0) / cfg.model.eps, grid)
               .u;
  }
  SolveReport rep = solve_traveling_wave(cfg.model, c, init, cfg.newton);

  {
    std::ofstream out(man.file("residual_history.csv"));
    out << "# iter,residual\n";
    for (std::size_t i = 0; i < rep.residual_history.size(); ++i)
      out << i << ',' << format_double(rep.residual_history[i]) << '\n';
  }
  man.add("converged", rep.converged ? "yes" : "no");
  man.add("residual", rep.residual);
  man.add("newton-iters", format_double(rep.newton_iters));
  if (!rep.message.empty()) man.add("message", rep.message);

  if (!rep.converged) {
    if (rep.last_iterate)
      write_snapshot(man.file("last_iterate.csv"),
                     State::scalar(*rep.last_iterate));
    return kExitNonConvergence;
  }
  const TravelingWave& w = *rep.wave;
  write_snapshot(man.file("profile.csv"), w.as_state());
  write_spectrum(man.file("spectrum.csv"), w.u);
  man.add("c", w.c);
  man.add("max-u", norms(w.u, 0).linf);
  man.add("mass", w.mass);
  man.add("energy", w.energy);
  return kExitOk;
}

int run_sweep_branch(Manifest& man, const RunConfig& cfg) {
  if (cfg.c_values.empty())
    throw ConfigError("sweep-branch needs [sweep] c-values");
  GridPtr grid = Grid::make(cfg.grid_n, cfg.grid_l);
  Branch branch = continuation_sweep(cfg.model, cfg.c_values, grid, cfg.newton);

  {
    std::ofstream out(man.file("branch.csv"));
    out << "# c,maxU,mass,energy,residual,N_modes\n";
    for (const auto& p : branch.table)
      out << format_double(p.c) << ',' << format_double(p.max_u) << ','
          << format_double(p.mass) << ',' << format_double(p.energy) << ','
          << format_double(p.residual) << ',' << p.n_modes << '\n';
  }
  for (std::size_t i = 0; i < branch.waves.size(); ++i) {
    std::ostringstream name;
    name << "profile_" << i << "_c" << format_double(branch.table[i].c)
         << ".csv";
    write_snapshot(man.file(name.str()), branch.waves[i].as_state());
  }
  std::vector<double> c, mass, energy, maxu;
  for (const auto& p : branch.table) {
    c.push_back(p.c);
    mass.push_back(p.mass);
    energy.push_back(p.energy);
    maxu.push_back(p.max_u);
  }
  write_svg_plot(man.file("mass_vs_c.svg"), c, mass, "c", "mass");
  write_svg_plot(man.file("energy_vs_c.svg"), c, energy, "c", "energy");
  write_svg_plot(man.file("maxu_vs_c.svg"), c, maxu, "c", "maxU");
  man.add("complete", branch.complete ? "yes" : "no");
  man.add("edge-c", branch.edge_c);
  if (!branch.edge_message.empty()) man.add("edge-message", branch.edge_message);
  return kExitOk;
}

int run_sweep_critical_times(Manifest& man, const RunConfig& cfg) {
  if (cfg.eps_values.empty())
    throw ConfigError("sweep-critical-times needs [sweep] eps-values");
  GridPtr grid = Grid::make(cfg.grid_n, cfg.grid_l);
  std::ofstream table(man.file("critical_times.csv"));
  table << "# eps,critical_time,mu,class\n";
  for (double eps : cfg.eps_values) {
    RunConfig point = cfg;
    point.model.eps = eps;
    State initial = build_initial_state(point, grid);
    Trajectory traj = evolve(point.model, initial, point.evolve);
    std::ostringstream prefix;
    prefix << "eps" << format_double(eps) << "_";
    write_diagnostics(man.file(prefix.str() + "diagnostics.csv"),
                      traj.diagnostics);
    BreakdownReport rep;
    breakdown_artifacts(man, point, traj, prefix.str(), &rep);
    table << format_double(eps) << ',' << format_double(rep.critical_time)
          << ',' << format_double(rep.mu_at_critical) << ','
          << breakdown_name(rep.classification) << '\n';
  }
  return kExitOk;
}

int run_compare_kdv(Manifest& man, const RunConfig& cfg) {
  GridPtr grid = Grid::make(cfg.grid_n, cfg.grid_l);
  std::vector<double> eps_list =
      cfg.eps_values.empty() ? std::vector<double>{cfg.model.eps}
                             : cfg.eps_values;
  if (!cfg.initial_u)
    throw ConfigError("compare-kdv needs [initial] u = <expression>");

  std::ofstream summary(man.file("compare_summary.csv"));
  summary << "# eps,m_j,complete\n";
  for (double eps : eps_list) {
    RunConfig point = cfg;
    point.model.eps = eps;
    point.model.family = ModelFamily::whitham;
    State s = build_initial_state(point, grid);
    ComparisonResult res =
        compare_whitham_kdv(s.u, eps, cfg.compare_j, cfg.horizon_multiple,
                            cfg.evolve.nt, cfg.evolve.record_every);
    std::ostringstream name;
    name << "comparison_eps" << format_double(eps) << ".csv";
    std::ofstream out(man.file(name.str()));
    out << "# t,hj_diff,bound_eps2_t\n";
    for (const auto& p : res.series)
      out << format_double(p.t) << ',' << format_double(p.hj_diff) << ','
          << format_double(p.bound) << '\n';
    summary << format_double(eps) << ',' << format_double(res.m_j) << ','
            << (res.complete ? "yes" : "no") << '\n';
    if (!res.flag.empty()) man.add("flag-eps" + format_double(eps), res.flag);
  }
  return kExitOk;
}

int run_fit_spectrum(Manifest& man, const RunConfig& cfg) {
  if (cfg.fit_input.empty())
    throw ConfigError("fit-spectrum needs [fit] input = <csv path>");
  std::ifstream probe(cfg.fit_input);
  if (!probe) throw ConfigError("cannot open " + cfg.fit_input);
  std::string header;
  std::getline(probe, header);
  probe.close();

  SingularityFit fit;
  if (header.find("abs_coeff") != std::string::npos) {
    std::vector<double> k, a;
    read_spectrum(cfg.fit_input, k, a);
    fit = fit_spectrum_samples(k, a, cfg.fit_window,
                               cfg.evolve.krasny_threshold);
  } else {
    LoadedSnapshot snap = read_snapshot(cfg.fit_input);
    fit = fit_spectrum(snap.state.u, cfg.fit_window,
                       cfg.evolve.krasny_threshold);
  }
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("delta", format_double(fit.delta));
  kv.emplace_back("mu", format_double(fit.mu));
  kv.emplace_back("amplitude", format_double(fit.amplitude));
  kv.emplace_back("window-kmin", format_double(fit.k_min));
  kv.emplace_back("window-kmax", format_double(fit.k_max));
  kv.emplace_back("rms-residual", format_double(fit.rms_residual));
  kv.emplace_back("n-modes", format_double(fit.n_modes));
  write_keyvalues(man.file("fit.txt"), kv);
  man.add("delta", fit.delta);
  man.add("mu", fit.mu);
  return kExitOk;
}

int run_stability_map(Manifest& man, const RunConfig& cfg) {
  GridPtr grid = Grid::make(cfg.grid_n, cfg.grid_l);
  const double kmax = cfg.stability_kmax > 0.0 ? cfg.stability_kmax : grid->kmax();
  std::vector<double> ks;
  for (int i = 1; i <= cfg.stability_count; ++i)
    ks.push_back(kmax * i / cfg.stability_count);
  StabilityMap map = stability_map(cfg.model.c, cfg.model.eps, cfg.model.beta, ks);

  std::ofstream out(man.file("stability.csv"));
  out << "# k,phase_speed_sq,unstable\n";
  for (std::size_t i = 0; i < map.k.size(); ++i)
    out << format_double(map.k[i]) << ','
        << format_double(map.phase_speed_sq[i]) << ','
        << int(map.unstable[i]) << '\n';
  man.add("all-unstable", map.all_unstable ? "yes" : "no");
  man.add("x-threshold", map.x_threshold);
  if (map.unstable_band) {
    man.add("unstable-band-min", map.unstable_band->first);
    man.add("unstable-band-max", map.unstable_band->second);
  }
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg) {
  Manifest man(cfg.output_dir);
  int code = kExitOk;
  try {
    describe_common(man, cfg);
    switch (cfg.command) {
      case Command::evolve_run: code = run_evolve(man, cfg); break;
      case Command::solve_tw: code = run_solve_tw(man, cfg); break;
      case Command::sweep_branch: code = run_sweep_branch(man, cfg); break;
      case Command::sweep_critical_times:
        code = run_sweep_critical_times(man, cfg);
        break;
      case Command::compare_kdv: code = run_compare_kdv(man, cfg); break;
      case Command::fit_spectrum_cmd: code = run_fit_spectrum(man, cfg); break;
      case Command::stability_map_cmd: code = run_stability_map(man, cfg); break;
    }
  } catch (const NonConvergence& e) {
    man.add("error", e.what());
    man.write();
    return kExitNonConvergence;
  } catch (const fs::filesystem_error& e) {
    man.add("error", e.what());
    man.write();
    return kExitIo;
  }
  man.add("exit-code", format_double(code));
  man.write();
  return code;
}

}  // namespace wlab
