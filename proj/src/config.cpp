#include "uadam/config.hpp"

#include <cmath>
#include <string>

#include "uadam/errors.hpp"

namespace uadam {

namespace {

constexpr double kLambdaSnap = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void require_beta2(double beta2) {
  require(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
}

void require_epsilon(double epsilon) {
  require(epsilon > 0.0 && std::isfinite(epsilon), "epsilon must be positive");
}

}  // namespace

std::string_view rule_name(LrRule rule) noexcept {
  switch (rule) {
    case LrRule::Const: return "const";
    case LrRule::Adam: return "adam";
    case LrRule::AmsGrad: return "amsgrad";
    case LrRule::AdaFom: return "adafom";
    case LrRule::AdaBound: return "adabound";
    case LrRule::Yogi: return "yogi";
    case LrRule::AdaEma: return "adaema";
    case LrRule::Adan: return "adan";
    case LrRule::SAdam: return "sadam";
  }
  return "?";
}

LrRule parse_rule(std::string_view name) {
  for (LrRule rule : kAllRules) {
    if (rule_name(rule) == name) return rule;
  }
  throw ConfigError("unknown learning-rate rule '" + std::string(name) + "'");
}

LrRule rule_of(const RuleSpec& spec) noexcept {
  return static_cast<LrRule>(spec.index());
}

RuleSpec default_spec(LrRule rule) {
  switch (rule) {
    case LrRule::Const: return ConstParams{};
    case LrRule::Adam: return AdamParams{};
    case LrRule::AmsGrad: return AmsGradParams{};
    case LrRule::AdaFom: return AdaFomParams{};
    case LrRule::AdaBound: return AdaBoundParams{};
    case LrRule::Yogi: return YogiParams{};
    case LrRule::AdaEma: return AdaEmaParams{};
    case LrRule::Adan: return AdanParams{};
    case LrRule::SAdam: return SAdamParams{};
  }
  throw ConfigError("unsupported rule");
}

std::string_view weight_scheme_name(WeightScheme scheme) noexcept {
  switch (scheme) {
    case WeightScheme::Uniform: return "uniform";
    case WeightScheme::Linear: return "linear";
    case WeightScheme::Geometric: return "geometric";
  }
  return "?";
}

WeightScheme parse_weight_scheme(std::string_view name) {
  if (name == "uniform") return WeightScheme::Uniform;
  if (name == "linear") return WeightScheme::Linear;
  if (name == "geometric") return WeightScheme::Geometric;
  throw ConfigError("unknown weight scheme '" + std::string(name) + "'");
}

void validate(const RuleSpec& spec) {
  struct Visitor {
    void operator()(const ConstParams&) const {}
    void operator()(const AdamParams& p) const {
      require_beta2(p.beta2);
      require_epsilon(p.epsilon);
    }
    void operator()(const AmsGradParams& p) const {
      require_beta2(p.beta2);
      require_epsilon(p.epsilon);
    }
    void operator()(const AdaFomParams& p) const { require_epsilon(p.epsilon); }
    void operator()(const AdaBoundParams& p) const {
      require_beta2(p.beta2);
      require(p.clip_lower > 0.0, "clip_lower must be positive");
      require(p.clip_lower < p.clip_upper, "clip bounds need clip_lower < clip_upper");
      require(std::isfinite(p.clip_upper), "clip_upper must be finite");
    }
    void operator()(const YogiParams& p) const {
      require_beta2(p.beta2);
      require_epsilon(p.epsilon);
    }
    void operator()(const AdaEmaParams& p) const {
      require_epsilon(p.epsilon);
      require(p.weight_ratio > 0.0 && std::isfinite(p.weight_ratio),
              "weight_ratio must be positive");
    }
    void operator()(const AdanParams& p) const {
      // Adan's orientation puts beta2 on the new term, so beta2 = 0 would
      // freeze v at zero.
      require(p.beta2 > 0.0 && p.beta2 <= 1.0, "adan beta2 must lie in (0, 1]");
      require_epsilon(p.epsilon);
    }
    void operator()(const SAdamParams& p) const {
      require_beta2(p.beta2);
      require(p.theta > 0.0 && std::isfinite(p.theta), "theta must be positive");
    }
  };
  std::visit(Visitor{}, spec);
}

double UAdamConfig::lambda_tilde() const noexcept {
  const double lt = (1.0 - beta) * lambda;
  if (std::abs(lt - 1.0) <= kLambdaSnap) return 1.0;
  return lt;
}

void UAdamConfig::validate() const {
  require(eta > 0.0 && std::isfinite(eta), "eta must be positive");
  require(beta >= 0.0 && beta < 1.0, "beta must lie in [0, 1)");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be nonnegative");
  require((1.0 - beta) * lambda <= 1.0 + kLambdaSnap,
          "lambda must not exceed 1/(1-beta)");
  if (grad_bound) require(*grad_bound > 0.0, "grad_bound must be positive");
  uadam::validate(rule);
}

}  // namespace uadam
