#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uadam/config.hpp"
#include "uadam/lr_rules.hpp"
#include "uadam/oracle.hpp"
#include "uadam/param_vector.hpp"
#include "uadam/trace.hpp"

namespace uadam {

// ---------------------------------------------------------------------------
// Convergence metrics

struct ConvergenceSummary {
  double avg_grad_sq = 0.0;
  double min_grad_sq = 0.0;
  /// Mean of ||grad f||^2 over the final max(1, floor(T/10)) steps.
  double plateau = 0.0;
  std::size_t steps = 0;
};

/// Throws ConfigError on an empty trace.
ConvergenceSummary convergence_summary(const RunTrace& trace);

// ---------------------------------------------------------------------------
// Variance recursion of the first moment
//
//   E_t||m_t - grad f(x_t)||^2 <= beta ||m_{t-1} - grad f(x_{t-1})||^2
//                                 + beta^2/(1-beta) L^2 ||x_t - x_{t-1}||^2
//                                 + (1-beta)^2 E_t||g_t - grad f(x_t)||^2

struct LemmaCheckReport {
  std::size_t step = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double std_error = 0.0;
  bool passed = false;
};

inline constexpr double kDeterministicSlack = 1e-12;

/// One completed transition of a noiseless run.
struct LemmaTransition {
  std::size_t step = 0;
  ParamVector x_prev;
  ParamVector x;
  ParamVector m_prev;
  ParamVector m;
};

/// Pointwise check, g_t = grad f(x_t). passed iff slack >= -1e-12.
/// Throws ConfigError for beta outside [0, 1).
LemmaCheckReport check_lemma1_deterministic(const LemmaTransition& tr, double beta, double L,
                                            const Problem& problem);

/// State held fixed while g_t is redrawn.
struct FrozenState {
  std::size_t step = 0;
  ParamVector x_prev;
  ParamVector x;
  ParamVector m_prev;
};

/// Standard: the inequality above with the first-moment factor beta.
/// Remark: the same bound written for the reparametrization in which the
/// EMA weight b sits on the new gradient (m_t = (1-b) m_{t-1} + b g_t):
///   (1-b) Delta_{t-1} + (1-b)^2/b L^2 ||dx||^2 + b^2 E||g - grad||^2,
/// evaluated at b = 1 - beta.
enum class LemmaForm { Standard, Remark };

/// Monte Carlo over n >= 1e4 draws of g_t from `noise` (stream and seed
/// taken from `noise`). passed iff slack >= -3 std_error - 1e-12, where
/// std_error is the standard error of the per-draw slack.
LemmaCheckReport check_lemma1_stochastic(const FrozenState& state, double beta, double L,
                                         const Problem& problem, const NoiseModel& noise,
                                         std::size_t n_samples,
                                         LemmaForm form = LemmaForm::Standard);

/// Runs `config` noiselessly on `problem` and checks every transition.
std::vector<LemmaCheckReport> check_lemma1_along_run(const UAdamConfig& config,
                                                     const Problem& problem);

/// Runs `config` under `noise` and snapshots the state before each of the
/// requested steps (1-based, increasing, each <= config.max_steps).
std::vector<FrozenState> frozen_states_along_run(const UAdamConfig& config,
                                                 const Problem& problem,
                                                 const NoiseModel& noise,
                                                 const std::vector<std::size_t>& steps);

// ---------------------------------------------------------------------------
// Hyperparameter conditions of the convergence theorem

struct TheoremConditions {
  double eta_l = 0.0;
  double eta_u = 0.0;
  double L = 0.0;
  double d0 = 0.0;
  double d1 = 0.0;
  double beta = 0.0;
  double lambda = 0.0;

  double K() const noexcept { return eta_u / eta_l; }

  static TheoremConditions from(const BoundCertificate& cert, const Problem& problem,
                                const NoiseModel& noise, const UAdamConfig& config);
};

/// value <= bound, compared with relative tolerance 1e-12.
struct Constraint {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - value
  bool satisfied = false;
};

enum class Verdict { Satisfied, Violated, Infeasible };
std::string_view verdict_name(Verdict v) noexcept;

struct ConditionReport {
  /// Satisfied: every theorem constraint holds. Violated: some fail but
  /// another beta in [0, 1) satisfies all. Infeasible: no beta does.
  Verdict verdict = Verdict::Violated;
  std::vector<Constraint> theorem;
  /// The same conditions in terms of K = eta_u / eta_l.
  std::vector<Constraint> corollary;

  bool satisfied() const noexcept { return verdict == Verdict::Satisfied; }
  bool corollary_satisfied() const noexcept;
  /// Violated theorem constraints, in evaluation order.
  std::vector<Constraint> binding() const;
};

/// Theorem constraint names: one_minus_beta_range, one_minus_beta_wgc,
/// lambda_range, eta_u_wgc, eta_u_momentum, eta_u_smooth. Corollary names
/// carry a `k_` prefix. Constraints involving D1 are vacuous when D1 = 0.
/// Throws ConfigError unless 0 < eta_l <= eta_u, L > 0, d0, d1 >= 0,
/// beta in [0, 1) and lambda >= 0.
ConditionReport validate_theorem_conditions(const TheoremConditions& tc);

/// Largest eta_u meeting the K-form conditions, or nullopt when the beta or
/// lambda conditions fail for this K.
std::optional<double> admissible_eta_u(double L, double d1, double beta, double lambda,
                                       double K);

// ---------------------------------------------------------------------------
// Learning-rate bounds

/// Steps whose recorded eta extrema leave [eta_l, eta_u] (relative slack 1e-12).
std::size_t check_assumption4(const RunTrace& trace, const BoundCertificate& cert);

}  // namespace uadam
