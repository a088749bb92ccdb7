#include "uadam/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uadam/driver.hpp"
#include "uadam/errors.hpp"
#include "uadam/kernels.hpp"

namespace uadam {

ConvergenceSummary convergence_summary(const RunTrace& trace) {
  if (trace.empty()) throw ConfigError("convergence summary of an empty trace");
  const std::size_t T = trace.size();
  const std::size_t tail = std::max<std::size_t>(1, T / 10);

  ConvergenceSummary s;
  s.steps = T;
  s.min_grad_sq = std::numeric_limits<double>::infinity();
  double total = 0.0;
  double tail_total = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const double g2 = trace[i].grad_norm_sq;
    total += g2;
    s.min_grad_sq = std::min(s.min_grad_sq, g2);
    if (i >= T - tail) tail_total += g2;
  }
  s.avg_grad_sq = total / static_cast<double>(T);
  s.plateau = tail_total / static_cast<double>(tail);
  return s;
}

namespace {

void require_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta must lie in [0, 1)");
}

// beta Delta_{t-1} + beta^2/(1-beta) L^2 ||dx||^2, i.e. the rhs without the
// variance term.
double carried_terms(double beta, double L, double delta_prev, double dx_sq, LemmaForm form) {
  if (form == LemmaForm::Remark) {
    const double b = 1.0 - beta;
    return (1.0 - b) * delta_prev + (1.0 - b) * (1.0 - b) / b * L * L * dx_sq;
  }
  return beta * delta_prev + beta * beta / (1.0 - beta) * L * L * dx_sq;
}

}  // namespace

LemmaCheckReport check_lemma1_deterministic(const LemmaTransition& tr, double beta, double L,
                                            const Problem& problem) {
  require_beta(beta);
  const ParamVector grad_prev = problem.grad(tr.x_prev);
  const ParamVector grad = problem.grad(tr.x);

  LemmaCheckReport r;
  r.step = tr.step;
  r.lhs = distance_sq(tr.m, grad);
  r.rhs = carried_terms(beta, L, distance_sq(tr.m_prev, grad_prev), distance_sq(tr.x, tr.x_prev),
                        LemmaForm::Standard);
  r.slack = r.rhs - r.lhs;
  r.passed = r.slack >= -kDeterministicSlack;
  return r;
}

LemmaCheckReport check_lemma1_stochastic(const FrozenState& state, double beta, double L,
                                         const Problem& problem, const NoiseModel& noise,
                                         std::size_t n_samples, LemmaForm form) {
  require_beta(beta);
  if (n_samples < 10000) throw ConfigError("stochastic check needs at least 1e4 samples");
  const ParamVector grad_prev = problem.grad(state.x_prev);
  const ParamVector grad = problem.grad(state.x);

  const double carried = carried_terms(beta, L, distance_sq(state.m_prev, grad_prev),
                                       distance_sq(state.x, state.x_prev), form);
  const kernels::Lemma1Moments mc =
      kernels::omp::lemma1_moments(state.m_prev, grad, beta, noise, n_samples);
  const double fresh = 1.0 - beta;

  LemmaCheckReport r;
  r.step = state.step;
  r.lhs = mc.mean_lhs;
  r.rhs = carried + fresh * fresh * mc.mean_var;
  r.slack = carried - mc.mean_diff;
  r.std_error = mc.diff_std_error();
  r.passed = r.slack >= -3.0 * r.std_error - kDeterministicSlack;
  return r;
}

std::vector<LemmaCheckReport> check_lemma1_along_run(const UAdamConfig& config,
                                                     const Problem& problem) {
  OptimizerRun run(config, problem);
  const NoiseModel noiseless{};
  std::vector<LemmaCheckReport> out;
  out.reserve(config.max_steps);
  ParamVector x_prev = run.x();
  while (run.t() < config.max_steps) {
    LemmaTransition tr;
    tr.x_prev = x_prev;
    tr.x = run.x();
    tr.m_prev = run.momentum().m();
    run.step(problem, noiseless);
    tr.step = run.t();
    tr.m = run.momentum().m();
    out.push_back(check_lemma1_deterministic(tr, config.beta, problem.lipschitz, problem));
    x_prev = tr.x;
  }
  return out;
}

std::vector<FrozenState> frozen_states_along_run(const UAdamConfig& config,
                                                 const Problem& problem,
                                                 const NoiseModel& noise,
                                                 const std::vector<std::size_t>& steps) {
  if (!std::is_sorted(steps.begin(), steps.end()) ||
      std::adjacent_find(steps.begin(), steps.end()) != steps.end()) {
    throw ConfigError("frozen-state steps must be strictly increasing");
  }
  if (!steps.empty() && (steps.front() == 0 || steps.back() > config.max_steps)) {
    throw ConfigError("frozen-state steps must lie in [1, max_steps]");
  }
  OptimizerRun run(config, problem);
  std::vector<FrozenState> out;
  out.reserve(steps.size());
  ParamVector x_prev = run.x();
  for (std::size_t want : steps) {
    while (run.t() + 1 < want) {
      x_prev = run.x();
      run.step(problem, noise);
    }
    out.push_back({want, x_prev, run.x(), run.momentum().m()});
  }
  return out;
}

TheoremConditions TheoremConditions::from(const BoundCertificate& cert, const Problem& problem,
                                          const NoiseModel& noise, const UAdamConfig& config) {
  return {cert.eta_l, cert.eta_u, problem.lipschitz, noise.d0,
          noise.d1,   config.beta, config.lambda};
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Satisfied:
      return "satisfied";
    case Verdict::Violated:
      return "violated";
    case Verdict::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

bool ConditionReport::corollary_satisfied() const noexcept {
  return std::all_of(corollary.begin(), corollary.end(),
                     [](const Constraint& c) { return c.satisfied; });
}

std::vector<Constraint> ConditionReport::binding() const {
  std::vector<Constraint> out;
  for (const auto& c : theorem) {
    if (!c.satisfied) out.push_back(c);
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-12;

bool within(double value, double bound) { return value <= bound * (1.0 + kRelTol); }

Constraint make_constraint(std::string name, double value, double bound) {
  return {std::move(name), value, bound, bound - value, within(value, bound)};
}

double safe_div(double num, double den) { return den == 0.0 ? kInf : num / den; }

}  // namespace

ConditionReport validate_theorem_conditions(const TheoremConditions& tc) {
  if (!(tc.eta_l > 0.0) || !(tc.eta_u >= tc.eta_l)) {
    throw ConfigError("need 0 < eta_l <= eta_u");
  }
  if (!(tc.L > 0.0)) throw ConfigError("L must be positive");
  if (!(tc.d0 >= 0.0) || !(tc.d1 >= 0.0)) throw ConfigError("D0, D1 must be nonnegative");
  require_beta(tc.beta);
  if (!(tc.lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");

  const double s = 1.0 - tc.beta;
  const double L = tc.L;
  const double K = tc.K();
  const double lam = tc.lambda;

  ConditionReport r;
  const double s_wgc = safe_div(tc.eta_l, 2.0 * (2.0 + lam) * tc.d1 * tc.eta_u);
  const double eta_wgc = safe_div(std::cbrt(tc.eta_l), 2.0 * std::cbrt(tc.d1 * L * L));
  const double eta_smooth = std::sqrt(tc.eta_l / (2.0 * L));
  r.theorem = {
      make_constraint("one_minus_beta_range", s, 1.0),
      make_constraint("one_minus_beta_wgc", s, s_wgc),
      make_constraint("lambda_range", lam, 1.0 / s),
      make_constraint("eta_u_wgc", tc.eta_u, eta_wgc),
      make_constraint("eta_u_momentum", tc.eta_u, std::cbrt(s * s * tc.eta_l / (4.0 * L * L))),
      make_constraint("eta_u_smooth", tc.eta_u, eta_smooth),
  };
  r.corollary = {
      make_constraint("k_one_minus_beta_range", s, 1.0),
      make_constraint("k_one_minus_beta_wgc", s, safe_div(1.0, 2.0 * (2.0 + lam) * tc.d1 * K)),
      make_constraint("k_lambda_range", lam, 1.0 / s),
      make_constraint("k_eta_u_wgc", tc.eta_u, safe_div(1.0, 2.0 * L * std::sqrt(2.0 * K * tc.d1))),
      make_constraint("k_eta_u_momentum", tc.eta_u, s / (2.0 * L * std::sqrt(K))),
      make_constraint("k_eta_u_smooth", tc.eta_u, 1.0 / (2.0 * K * L)),
  };

  if (r.binding().empty()) {
    r.verdict = Verdict::Satisfied;
    return r;
  }

  // Search over s = 1 - beta in (0, 1]: the eta_u momentum condition is a
  // lower bound on s, the others upper bounds.
  double s_max = std::min(1.0, s_wgc);
  if (lam > 0.0) s_max = std::min(s_max, 1.0 / lam);
  const double s_min = std::sqrt(4.0 * L * L * tc.eta_u * tc.eta_u * tc.eta_u / tc.eta_l);
  const bool feasible =
      within(s_min, s_max) && within(tc.eta_u, eta_wgc) && within(tc.eta_u, eta_smooth);
  r.verdict = feasible ? Verdict::Violated : Verdict::Infeasible;
  return r;
}

std::optional<double> admissible_eta_u(double L, double d1, double beta, double lambda,
                                       double K) {
  if (!(L > 0.0) || !(d1 >= 0.0) || !(K >= 1.0) || !(lambda >= 0.0)) {
    throw ConfigError("admissible_eta_u needs L > 0, D1 >= 0, K >= 1, lambda >= 0");
  }
  require_beta(beta);
  const double s = 1.0 - beta;
  if (!within(s, safe_div(1.0, 2.0 * (2.0 + lambda) * d1 * K))) return std::nullopt;
  if (!within(lambda, 1.0 / s)) return std::nullopt;
  return std::min({safe_div(1.0, 2.0 * L * std::sqrt(2.0 * K * d1)),
                   s / (2.0 * L * std::sqrt(K)), 1.0 / (2.0 * K * L)});
}

std::size_t check_assumption4(const RunTrace& trace, const BoundCertificate& cert) {
  const double lo = cert.eta_l * (1.0 - kernels::kBoundSlack);
  const double hi = cert.eta_u * (1.0 + kernels::kBoundSlack);
  return static_cast<std::size_t>(std::count_if(trace.begin(), trace.end(), [&](const auto& r) {
    return r.eta_min < lo || r.eta_max > hi;
  }));
}

}  // namespace uadam
