#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uadam/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace uadam::cli;

  CLI::App app{"UAdam experiment runner"};
  app.require_subcommand(1);

  RunOptions run;
  std::string run_out;
  std::size_t run_stride = 0;
  auto* run_cmd = app.add_subcommand("run", "Run one configured experiment");
  run_cmd->add_option("--config", run.config_path, "Run file")->required();
  run_cmd->add_option("--out", run_out, "Output directory (overrides [output] directory)");
  run_cmd->add_option("--stride", run_stride, "Write every k-th trace row");

  SweepOptions sweep;
  std::string sweep_out;
  std::size_t sweep_stride = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter over values and seeds");
  sweep_cmd->add_option("--config", sweep.config_path, "Run file")->required();
  sweep_cmd->add_option("--param", sweep.param, "Parameter to sweep, e.g. beta")->required();
  sweep_cmd->add_option("--values", sweep.values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds per value")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--workers", sweep.workers, "Concurrent cells (0: all cores)");
  sweep_cmd->add_option("--out", sweep_out, "Output directory");
  sweep_cmd->add_option("--stride", sweep_stride, "Write every k-th trace row");

  std::string suite = "all";
  std::size_t verify_workers = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run a built-in verification suite");
  verify_cmd->add_option("suite", suite, "equivalence | bounds | lemma1 | conditions | all");
  verify_cmd->add_option("--workers", verify_workers, "Threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*run_cmd) {
    if (!run_out.empty()) run.out_dir = run_out;
    if (run_cmd->count("--stride") > 0) run.stride = run_stride;
    return cmd_run(run, std::cout, std::cerr);
  }
  if (*sweep_cmd) {
    if (!sweep_out.empty()) sweep.out_dir = sweep_out;
    if (sweep_cmd->count("--stride") > 0) sweep.stride = sweep_stride;
    return cmd_sweep(sweep, std::cout, std::cerr);
  }
  return cmd_verify(suite, verify_workers, std::cout, std::cerr);
}
