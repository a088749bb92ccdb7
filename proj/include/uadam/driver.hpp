#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "uadam/config.hpp"
#include "uadam/diagnostics.hpp"
#include "uadam/errors.hpp"
#include "uadam/lr_rules.hpp"
#include "uadam/momentum.hpp"
#include "uadam/oracle.hpp"
#include "uadam/param_vector.hpp"
#include "uadam/trace.hpp"

namespace uadam {

/// State of one UAdam run. Each step, in order: sample g_t, update m_t and
/// m_bar_t, compute eta_t from g_1..g_t, set x_{t+1} = x_t - eta_t * m_bar_t.
///
/// The trace records the true-gradient quantities f(x_t), ||grad f(x_t)||^2
/// and ||m_t - grad f(x_t)||^2. These need the analytic oracle and have no
/// counterpart in real training.
class OptimizerRun {
 public:
  /// Validates the config. x1 defaults to problem.start.
  OptimizerRun(UAdamConfig config, const Problem& problem,
               std::optional<ParamVector> x1 = std::nullopt);

  /// One iteration. The noise stream is keyed by config().seed, not
  /// noise.seed. Throws NumericAbort (with the step index) on non-finite
  /// values or sub-module numeric failures; std::logic_error once
  /// max_steps is reached.
  const TraceRecord& step(const Problem& problem, const NoiseModel& noise);

  const UAdamConfig& config() const noexcept { return config_; }
  std::size_t t() const noexcept { return trace_.size(); }
  const ParamVector& x() const noexcept { return x_; }
  const MomentumState& momentum() const noexcept { return momentum_; }
  const LrRuleState& lr_state() const noexcept { return lr_; }
  const RunTrace& trace() const noexcept { return trace_; }
  /// Values from the most recent step.
  const ParamVector& last_gradient() const noexcept { return g_; }
  const ParamVector& last_direction() const noexcept { return m_bar_; }
  const ParamVector& last_eta() const noexcept { return eta_t_; }
  /// Largest ||g_t||_inf seen so far (measured gradient bound).
  double max_grad_inf() const noexcept { return max_grad_inf_; }

 private:
  UAdamConfig config_;
  ParamVector x_;
  MomentumState momentum_;
  LrRuleState lr_;
  RunTrace trace_;
  ParamVector g_;
  ParamVector m_bar_;
  ParamVector eta_t_;
  double max_grad_inf_ = 0.0;
};

struct RunOutcome {
  RunTrace trace;
  /// Unset when the trace is empty (T = 0 or abort at step 1).
  std::optional<ConvergenceSummary> summary;
  /// Set when the run aborted; trace then holds the steps before the abort.
  std::optional<NumericAbort> error;
  ParamVector final_x;
  double final_f = 0.0;
  double max_grad_inf = 0.0;
  std::size_t grad_bound_violations = 0;
};

/// Runs config.max_steps iterations; never stops early.
RunOutcome run_to_completion(const UAdamConfig& config, const Problem& problem,
                             const NoiseModel& noise,
                             std::optional<ParamVector> x1 = std::nullopt);

}  // namespace uadam
