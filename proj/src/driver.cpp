#include "uadam/driver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uadam {

namespace {

const UAdamConfig& validated(const UAdamConfig& config) {
  config.validate();
  return config;
}

}  // namespace

OptimizerRun::OptimizerRun(UAdamConfig config, const Problem& problem,
                           std::optional<ParamVector> x1)
    : config_(validated(config)),
      x_(x1.value_or(problem.start)),
      momentum_(x_.dim(), config_.beta, config_.lambda_tilde()),
      lr_(config_.rule, x_.dim(), config_.beta,
          config_.grad_bound.value_or(problem.grad_inf_bound)) {
  if (x_.dim() != problem.dim) throw ConfigError("x1 dimension does not match problem");
  if (!x_.all_finite()) throw ConfigError("x1 must be finite");
}

const TraceRecord& OptimizerRun::step(const Problem& problem, const NoiseModel& noise) {
  if (t() >= config_.max_steps) throw std::logic_error("run already reached max_steps");
  const std::size_t t_now = t() + 1;

  NoiseModel keyed = noise;
  keyed.seed = config_.seed;

  TraceRecord rec;
  rec.t = t_now;
  ParamVector next(x_.dim());
  try {
    const ParamVector true_grad = problem.grad(x_);
    g_ = sample_gradient_from(true_grad, keyed, t_now);
    if (!g_.all_finite()) throw NumericAbort("non-finite stochastic gradient", t_now);
    max_grad_inf_ = std::max(max_grad_inf_, norm_inf(g_));

    m_bar_ = sum_update(momentum_, g_);
    eta_t_ = lr_update(lr_, g_, config_.eta);

    for (std::size_t i = 0; i < x_.dim(); ++i) next[i] = x_[i] - eta_t_[i] * m_bar_[i];

    rec.f_val = problem.f(x_);
    rec.grad_norm_sq = norm_sq(true_grad);
    rec.delta_t = distance_sq(momentum_.m(), true_grad);
    const auto [lo, hi] = std::minmax_element(eta_t_.begin(), eta_t_.end());
    rec.eta_min = *lo;
    rec.eta_max = *hi;
    rec.step_norm = std::sqrt(distance_sq(next, x_));
  } catch (const NumericDomainError& e) {
    throw NumericAbort(e.what(), t_now);
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e) != nullptr) throw;
    throw NumericAbort(e.what(), t_now);
  }

  if (!next.all_finite()) throw NumericAbort("non-finite iterate", t_now);
  x_ = std::move(next);
  trace_.append(rec);
  return trace_.records().back();
}

RunOutcome run_to_completion(const UAdamConfig& config, const Problem& problem,
                             const NoiseModel& noise, std::optional<ParamVector> x1) {
  OptimizerRun run(config, problem, std::move(x1));
  RunOutcome out;
  try {
    while (run.t() < config.max_steps) run.step(problem, noise);
  } catch (const NumericAbort& e) {
    out.error = e;
  }
  out.trace = run.trace();
  if (!out.trace.empty()) out.summary = convergence_summary(out.trace);
  out.final_x = run.x();
  out.final_f = problem.f(run.x());
  out.max_grad_inf = run.max_grad_inf();
  out.grad_bound_violations = run.lr_state().grad_bound_violations();
  return out;
}

}  // namespace uadam
