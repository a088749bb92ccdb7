#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uadam/cli/run_config.hpp"
#include "uadam/driver.hpp"

namespace uadam::cli {

/// Stable process exit codes.
enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitConfig = 2, kExitAbort = 3 };

struct RunOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> stride;
};

struct SweepOptions {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> stride;
  std::string param;
  std::vector<std::string> values;
  std::size_t seeds = 1;
  std::size_t workers = 0;  // 0: OpenMP default
};

/// Runs one configured experiment and writes trace.csv and summary.csv into
/// `dir` (created if needed). Returns the outcome; aborts are not thrown.
RunOutcome execute_run(const RunFile& run, const std::string& dir);

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Cells are <out>/<param>_<value>/seed_<k> for k = 0..seeds-1, run with
/// noise seed base + k so every value of the axis shares the noise stream of
/// a given k.
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string suite;
  std::string name;  // full parameters of the case
  double value = 0.0;
  double tolerance = 0.0;
  std::string verdict;  // "pass", "fail", or a suite-specific verdict such as "infeasible"
  bool passed = false;
};

inline constexpr std::string_view kSuites[] = {"equivalence", "bounds", "lemma1", "conditions"};

/// Built-in grid of one suite. Throws ConfigError for unknown suite names.
std::vector<CheckResult> verify_suite(std::string_view suite);

/// `suite` may be a suite name or "all". Exit 0 iff every case passes.
int cmd_verify(std::string_view suite, std::size_t workers, std::ostream& out,
               std::ostream& err);

}  // namespace uadam::cli
