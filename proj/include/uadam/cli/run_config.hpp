#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "uadam/cli/ini.hpp"
#include "uadam/config.hpp"
#include "uadam/oracle.hpp"

namespace uadam::cli {

/// A parsed run file.
///
///   [problem]   name, dim, diag (comma list), samples, reg, data_seed, radius
///   [noise]     d0, d1, seed
///   [optimizer] eta, beta, lambda (a number or `max` = 1/(1-beta)), rule, T,
///               grad_bound, and the rule's own parameters:
///               beta2, epsilon, clip_lower, clip_upper, theta, weights,
///               weight_ratio
///   [output]    directory, stride
///
/// Unknown sections or keys, and rule parameters the selected rule does not
/// read, are ParseErrors. Missing keys take library defaults.
struct RunFile {
  IniDocument doc;
  std::string problem_name = "quadratic";
  std::size_t dim = 2;
  ProblemParams problem_params;
  NoiseModel noise;
  UAdamConfig config;
  bool lambda_max = false;
  std::string output_dir = "out";
  std::size_t stride = 1;

  Problem make_problem() const;
};

struct ParseOptions {
  /// Accept rule parameters unused by the selected rule (sweeps over `rule`).
  bool allow_unused_rule_params = false;
};

RunFile parse_run_file(std::string_view text, const ParseOptions& options = {});
RunFile load_run_file(const std::string& path, const ParseOptions& options = {});

/// Section owning `key`, or empty when the key is unknown.
std::string_view section_of(std::string_view key) noexcept;

/// Canonical `section.key = value` lines of the effective configuration.
std::vector<std::string> describe(const RunFile& run);

}  // namespace uadam::cli
