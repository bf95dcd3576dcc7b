// whitham-lab: batch experiment runner.
//
//   whitham-lab <command> --config <file> [--out <dir>] [--set key=value ...]
//
// Exit codes: 0 ok, 1 breakdown detected (evolve; informational),
// 2 config error, 3 non-convergence, 4 I/O failure.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "wlab/errors.hpp"
#include "wlab/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral lab for the Whitham and Boussinesq-Whitham "
               "equations"};
  std::string command, config_path, out_dir;
  std::vector<std::string> overrides;
  app.add_option("command", command,
                 "solve-tw | sweep-branch | evolve | sweep-critical-times | "
                 "compare-kdv | fit-spectrum | stability-map")
      ->required();
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--set", overrides, "override config keys (section.key=value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return wlab::kExitConfig;
  }

  try {
    auto cmd = wlab::command_from_name(command);
    if (!cmd)
      throw wlab::ConfigError("unknown command '" + command + "'");
    wlab::RunConfig cfg = wlab::parse_config_file(config_path);
    if (cfg.command_declared && cfg.command != *cmd)
      throw wlab::ConfigError("config declares command '" +
                              wlab::command_name(cfg.command) +
                              "' but the command line says '" + command + "'");
    cfg.command = *cmd;
    for (const std::string& kv : overrides) wlab::apply_override(cfg, kv);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    return wlab::run(cfg);
  } catch (const wlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return wlab::kExitConfig;
  } catch (const wlab::NonConvergence& e) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return wlab::kExitNonConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return wlab::kExitIo;
  }
}
