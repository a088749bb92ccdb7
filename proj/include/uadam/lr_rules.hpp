#pragma once

#include <cstddef>
#include <optional>

#include "uadam/config.hpp"
#include "uadam/param_vector.hpp"

namespace uadam {

/// Analytic bounds eta_l <= eta_{t,i} <= eta_u for a rule, valid while every
/// gradient satisfies ||g||_inf <= grad_precondition (infinite for rules
/// that need no gradient bound).
struct BoundCertificate {
  double eta_l = 0.0;
  double eta_u = 0.0;
  double grad_precondition = 0.0;

  double ratio() const noexcept { return eta_u / eta_l; }
};

/// Certificate for `spec` with base rate eta and gradient bound G:
///   const                        (eta, eta)
///   adam, amsgrad, adafom, adaema (eta/(G+eps), eta/eps)
///   adabound                     (eta c_l, eta c_u), no gradient precondition
///   yogi                         (eta/(sqrt(2) G + eps), eta/eps)
///   adan                         (eta/(G+eps), eta/eps) for ||g||_inf <= G/3
///   sadam                        (eta/softplus(G), eta/softplus(0))
BoundCertificate bound_certificate(const RuleSpec& spec, double eta, double grad_bound);

/// log(1 + exp(theta x)) / theta, overflow-safe.
double softplus(double x, double theta) noexcept;

/// Second-moment accumulator behind eta_t = h_t(g_1, ..., g_t).
class LrRuleState {
 public:
  /// beta1 is the first-moment factor, read only by adan. When grad_bound is
  /// given, gradients exceeding the certificate precondition are counted.
  LrRuleState(RuleSpec spec, std::size_t dim, double beta1 = 0.0,
              std::optional<double> grad_bound = std::nullopt);

  LrRule rule() const noexcept { return rule_of(spec_); }
  const RuleSpec& spec() const noexcept { return spec_; }
  const ParamVector& v() const noexcept { return v_; }
  const ParamVector& v_bar() const noexcept { return v_bar_; }
  const ParamVector& g_prev() const noexcept { return g_prev_; }
  double weight_sum() const noexcept { return weight_sum_; }
  std::size_t step() const noexcept { return step_; }
  std::size_t grad_bound_violations() const noexcept { return violations_; }

 private:
  friend ParamVector lr_update(LrRuleState& state, const ParamVector& g, double eta);

  double next_weight();

  RuleSpec spec_;
  double beta1_;
  std::optional<double> precondition_;
  ParamVector v_;
  ParamVector v_bar_;
  ParamVector g_prev_;
  double weight_sum_ = 0.0;
  double last_weight_ = 0.0;
  double weight_scale_ = 1.0;
  std::size_t step_ = 0;
  std::size_t violations_ = 0;
};

/// Advances the rule by one recurrence and returns the coordinate-wise eta_t.
/// Throws ConfigError on dimension mismatch and std::logic_error if an
/// internal invariant breaks (negative v, nonpositive eta_t).
ParamVector lr_update(LrRuleState& state, const ParamVector& g, double eta);

}  // namespace uadam
