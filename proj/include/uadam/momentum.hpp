#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

#include "uadam/oracle.hpp"
#include "uadam/param_vector.hpp"

namespace uadam {

/// First-moment state of the unified momentum update. m starts at zero.
class MomentumState {
 public:
  MomentumState(std::size_t dim, double beta, double lambda_tilde);

  const ParamVector& m() const noexcept { return m_; }
  double beta() const noexcept { return beta_; }
  double lambda_tilde() const noexcept { return lambda_tilde_; }

 private:
  friend ParamVector sum_update(MomentumState& state, const ParamVector& g);

  ParamVector m_;
  double beta_;
  double lambda_tilde_;
};

/// m_t = beta m_{t-1} + (1 - beta) g_t, then returns the search direction
/// m_bar_t = m_t - lambda_tilde (m_t - g_t), evaluated as
/// (1 - lambda_tilde) m_t + lambda_tilde g_t so both endpoints are exact.
ParamVector sum_update(MomentumState& state, const ParamVector& g);

// Historical momentum forms. These exist to cross-check the unified update;
// the driver never calls them.

/// Two-point heavy ball: x_{t+1} = x_t - alpha g + beta (x_t - x_{t-1}).
ParamVector shb_step(const ParamVector& x, const ParamVector& x_prev, const ParamVector& g,
                     double alpha, double beta);

/// Lookahead Nesterov: m_bar_t = beta m_bar_{t-1} - alpha grad(x + beta m_bar_{t-1}),
/// x_{t+1} = x_t + m_bar_t.
struct Snag1State {
  ParamVector m_bar;
};
ParamVector snag1_step(Snag1State& state, const ParamVector& x,
                       const std::function<ParamVector(const ParamVector&)>& grad_fn,
                       double alpha, double beta);

/// EMA Nesterov: m_t = beta m + (1 - beta) g, x_{t+1} = x - eta beta m_t - eta (1 - beta) g.
struct Snag2State {
  ParamVector m;
};
ParamVector snag2_step(Snag2State& state, const ParamVector& x, const ParamVector& g,
                       double eta, double beta);

/// Nesterov momentum estimation: m_bar_t = beta m_bar + (1 - beta)(g + beta (g - g_prev)),
/// x_{t+1} = x - eta m_bar_t. g_prev starts at zero.
struct NmeState {
  ParamVector m_bar;
  ParamVector g_prev;
};
ParamVector nme_step(NmeState& state, const ParamVector& x, const ParamVector& g,
                     double eta, double beta);

/// Velocity-form unified momentum: m_t = mu m - eta_t g,
/// x_{t+1} = x - lambda eta_t g + (1 - (1 - mu) lambda) m_t.
struct Sum2State {
  ParamVector m;
};
ParamVector sum2_step(Sum2State& state, const ParamVector& x, const ParamVector& g,
                      double eta_t, double mu, double lambda);

enum class EquivalencePair {
  Snag1Snag2,  // lookahead Nesterov vs EMA Nesterov, alpha = eta (1 - beta)
  NmeSnag2,    // Nesterov momentum estimation vs EMA Nesterov
  Sum2Sum1,    // velocity form vs EMA form, eta_t = eta (1 - beta), mu = beta
  ShbSum1,     // two-point heavy ball vs unified update at lambda = 0
  Snag2Sum1,   // EMA Nesterov vs unified update at lambda = 1
};

std::string_view pair_name(EquivalencePair pair) noexcept;

struct EquivalenceParams {
  double eta = 0.01;
  double beta = 0.9;
  double lambda = 1.0;  // only read by Sum2Sum1
  /// Optional explicit mapped parameters; when given they must agree with
  /// the mapping implied by (eta, beta) or ConfigError is thrown.
  std::optional<double> alpha;
  std::optional<double> mu;
  std::optional<double> eta_t;
  /// Starting iterate; problem.start when unset.
  std::optional<ParamVector> x1;
};

/// Runs both recurrences of `pair` for `steps` noiseless iterations on
/// `problem` and returns the max over t and coordinates of the iterate
/// difference. The lookahead form is compared through x_t = x_bar_t + beta m_bar_{t-1}.
double check_equivalence(EquivalencePair pair, const Problem& problem, std::size_t steps,
                         const EquivalenceParams& params);

}  // namespace uadam
