#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "config.hpp"
#include "experiments.hpp"
#include "verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadConfig = 2;

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"strav-bench: string-averaging feasibility solver harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::string seeds_override;
  std::size_t jobs = 1;

  auto add_common = [&](CLI::App* cmd, bool with_seeds) {
    cmd->add_option("--config", config_path, "experiment configuration file")
        ->required();
    cmd->add_option("--out", out_override, "output CSV path override");
    if (with_seeds) {
      cmd->add_option("--seeds", seeds_override,
                      "comma separated seed list override");
      cmd->add_option("--jobs", jobs, "parallel worker count");
    }
  };

  CLI::App* grid = app.add_subcommand(
      "grid", "mean iterations over an alpha x lambda grid");
  add_common(grid, true);
  CLI::App* strings = app.add_subcommand(
      "strings", "extrapolated vs plain runs over a string-count sweep");
  add_common(strings, true);
  CLI::App* solve =
      app.add_subcommand("solve", "single run with per-iteration diagnostics");
  add_common(solve, false);
  CLI::App* verify =
      app.add_subcommand("verify", "run the library invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadConfig;
  }

  try {
    if (verify->parsed()) {
      return strav::bench::cmd_verify() == 0 ? kExitOk : kExitFailure;
    }
    const auto cfg = strav::bench::Config::from_file(config_path);
    if (grid->parsed()) {
      return strav::bench::cmd_grid(cfg, out_override, seeds_override, jobs);
    }
    if (strings->parsed()) {
      return strav::bench::cmd_strings(cfg, out_override, seeds_override,
                                       jobs);
    }
    return strav::bench::cmd_solve(cfg, out_override);
  } catch (const strav::bench::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
