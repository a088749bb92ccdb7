#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace uadam {

enum class LrRule { Const, Adam, AmsGrad, AdaFom, AdaBound, Yogi, AdaEma, Adan, SAdam };

inline constexpr LrRule kAllRules[] = {LrRule::Const,    LrRule::Adam, LrRule::AmsGrad,
                                       LrRule::AdaFom,   LrRule::AdaBound,
                                       LrRule::Yogi,     LrRule::AdaEma,
                                       LrRule::Adan,     LrRule::SAdam};

/// Config identifier: const|adam|amsgrad|adafom|adabound|yogi|adaema|adan|sadam.
std::string_view rule_name(LrRule rule) noexcept;
LrRule parse_rule(std::string_view name);

// Per-rule parameter sets. A rule's struct carries exactly the parameters that
// rule needs, so "present iff required" holds by construction.

struct ConstParams {};

struct AdamParams {
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AmsGradParams {
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdaFomParams {
  double epsilon = 1e-8;
};

struct AdaBoundParams {
  double beta2 = 0.999;
  double clip_lower = 0.1;  // c_l
  double clip_upper = 10.0;  // c_u
};

struct YogiParams {
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// AdaEMA weights: uniform (w_i = 1), linear (w_i = i) or geometric
/// (w_i = ratio^i).
enum class WeightScheme { Uniform, Linear, Geometric };

struct AdaEmaParams {
  double epsilon = 1e-8;
  WeightScheme weights = WeightScheme::Uniform;
  double weight_ratio = 1.0;
};

/// The first-moment factor used inside Adan's second moment is the driver's
/// beta; it is passed to the rule state separately.
struct AdanParams {
  double beta2 = 0.01;
  double epsilon = 1e-8;
};

struct SAdamParams {
  double beta2 = 0.999;
  double theta = 10.0;
};

using RuleSpec = std::variant<ConstParams, AdamParams, AmsGradParams, AdaFomParams,
                              AdaBoundParams, YogiParams, AdaEmaParams, AdanParams,
                              SAdamParams>;

LrRule rule_of(const RuleSpec& spec) noexcept;
RuleSpec default_spec(LrRule rule);

/// Throws ConfigError when a rule parameter is outside its admissible range.
void validate(const RuleSpec& spec);

std::string_view weight_scheme_name(WeightScheme scheme) noexcept;
WeightScheme parse_weight_scheme(std::string_view name);

struct UAdamConfig {
  double eta = 1e-3;
  double beta = 0.9;
  double lambda = 0.0;
  RuleSpec rule = AdamParams{};
  /// Gradient bound G used for the rule's bound certificate. When unset the
  /// problem's analytic bound on its region is used.
  std::optional<double> grad_bound;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000;

  /// (1 - beta) * lambda, snapped to exactly 1 when lambda = 1/(1-beta) up to
  /// rounding.
  double lambda_tilde() const noexcept;

  /// Checks eta > 0, beta in [0,1), lambda in [0, 1/(1-beta)] and the rule
  /// parameters. Throws ConfigError.
  void validate() const;
};

}  // namespace uadam
