#include "uadam/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uadam/errors.hpp"

namespace uadam {

MomentumState::MomentumState(std::size_t dim, double beta, double lambda_tilde)
    : m_(dim), beta_(beta), lambda_tilde_(lambda_tilde) {
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta must lie in [0, 1)");
  if (!(lambda_tilde >= 0.0 && lambda_tilde <= 1.0)) {
    throw ConfigError("lambda_tilde must lie in [0, 1]");
  }
}

ParamVector sum_update(MomentumState& state, const ParamVector& g) {
  require_same_dim(state.m_, g);
  const double b = state.beta_;
  const double lt = state.lambda_tilde_;
  ParamVector m_bar(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) {
    state.m_[i] = b * state.m_[i] + (1.0 - b) * g[i];
    m_bar[i] = (1.0 - lt) * state.m_[i] + lt * g[i];
  }
  return m_bar;
}

namespace {

void zero_if_empty(ParamVector& v, std::size_t dim) {
  if (v.empty()) v = ParamVector(dim);
  if (v.dim() != dim) throw ConfigError("momentum state dimension mismatch");
}

}  // namespace

ParamVector shb_step(const ParamVector& x, const ParamVector& x_prev, const ParamVector& g,
                     double alpha, double beta) {
  require_same_dim(x, x_prev);
  require_same_dim(x, g);
  ParamVector next(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    next[i] = x[i] - alpha * g[i] + beta * (x[i] - x_prev[i]);
  }
  return next;
}

ParamVector snag1_step(Snag1State& state, const ParamVector& x,
                       const std::function<ParamVector(const ParamVector&)>& grad_fn,
                       double alpha, double beta) {
  zero_if_empty(state.m_bar, x.dim());
  ParamVector lookahead(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) lookahead[i] = x[i] + beta * state.m_bar[i];
  const ParamVector g = grad_fn(lookahead);
  require_same_dim(x, g);
  ParamVector next(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    state.m_bar[i] = beta * state.m_bar[i] - alpha * g[i];
    next[i] = x[i] + state.m_bar[i];
  }
  return next;
}

ParamVector snag2_step(Snag2State& state, const ParamVector& x, const ParamVector& g,
                       double eta, double beta) {
  require_same_dim(x, g);
  zero_if_empty(state.m, x.dim());
  ParamVector next(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    state.m[i] = beta * state.m[i] + (1.0 - beta) * g[i];
    next[i] = x[i] - eta * beta * state.m[i] - eta * (1.0 - beta) * g[i];
  }
  return next;
}

ParamVector nme_step(NmeState& state, const ParamVector& x, const ParamVector& g,
                     double eta, double beta) {
  require_same_dim(x, g);
  zero_if_empty(state.m_bar, x.dim());
  zero_if_empty(state.g_prev, x.dim());
  ParamVector next(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    state.m_bar[i] =
        beta * state.m_bar[i] + (1.0 - beta) * (g[i] + beta * (g[i] - state.g_prev[i]));
    next[i] = x[i] - eta * state.m_bar[i];
  }
  state.g_prev = g;
  return next;
}

ParamVector sum2_step(Sum2State& state, const ParamVector& x, const ParamVector& g,
                      double eta_t, double mu, double lambda) {
  require_same_dim(x, g);
  zero_if_empty(state.m, x.dim());
  const double lt = (1.0 - mu) * lambda;
  if (lt < 0.0 || lt > 1.0 + 1e-12) throw ConfigError("(1 - mu) lambda must lie in [0, 1]");
  ParamVector next(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    state.m[i] = mu * state.m[i] - eta_t * g[i];
    next[i] = x[i] - lambda * eta_t * g[i] + (1.0 - lt) * state.m[i];
  }
  return next;
}

std::string_view pair_name(EquivalencePair pair) noexcept {
  switch (pair) {
    case EquivalencePair::Snag1Snag2: return "snag1~snag2";
    case EquivalencePair::NmeSnag2: return "nme~snag2";
    case EquivalencePair::Sum2Sum1: return "sum2~sum1";
    case EquivalencePair::ShbSum1: return "shb~sum1";
    case EquivalencePair::Snag2Sum1: return "snag2~sum1";
  }
  return "?";
}

namespace {

void require_mapped(const std::optional<double>& given, double implied, const char* what) {
  if (!given) return;
  const double tol = 1e-12 * std::max(1.0, std::abs(implied));
  if (std::abs(*given - implied) > tol) {
    throw ConfigError(std::string(what) + " = " + std::to_string(*given) +
                      " is inconsistent with the mapping value " + std::to_string(implied));
  }
}

// Unified update with the constant rate eta: x_{t+1} = x_t - eta m_bar_t.
struct Sum1Runner {
  MomentumState momentum;
  double eta;

  ParamVector step(const ParamVector& x, const ParamVector& g) {
    const ParamVector m_bar = sum_update(momentum, g);
    ParamVector next(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) next[i] = x[i] - eta * m_bar[i];
    return next;
  }
};

}  // namespace

double check_equivalence(EquivalencePair pair, const Problem& problem, std::size_t steps,
                         const EquivalenceParams& params) {
  const double eta = params.eta;
  const double beta = params.beta;
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta must lie in [0, 1)");
  const double mapped_rate = eta * (1.0 - beta);
  require_mapped(params.alpha, mapped_rate, "alpha");
  require_mapped(params.eta_t, mapped_rate, "eta_t");
  require_mapped(params.mu, beta, "mu");

  const ParamVector x1 = params.x1.value_or(problem.start);
  if (x1.dim() != problem.dim) throw ConfigError("x1 dimension does not match problem");
  const auto grad = [&problem](const ParamVector& x) { return problem.grad(x); };

  ParamVector xa = x1;
  ParamVector xb = x1;
  double worst = 0.0;

  switch (pair) {
    case EquivalencePair::Snag1Snag2: {
      Snag1State lookahead{ParamVector(x1.dim())};
      Snag2State ema{ParamVector(x1.dim())};
      for (std::size_t t = 0; t < steps; ++t) {
        // Mapped iterate x_t = x_bar_t + beta m_bar_{t-1}.
        ParamVector mapped = xa;
        for (std::size_t i = 0; i < mapped.dim(); ++i) mapped[i] += beta * lookahead.m_bar[i];
        worst = std::max(worst, max_abs_diff(mapped, xb));
        xa = snag1_step(lookahead, xa, grad, mapped_rate, beta);
        xb = snag2_step(ema, xb, grad(xb), eta, beta);
      }
      ParamVector mapped = xa;
      for (std::size_t i = 0; i < mapped.dim(); ++i) mapped[i] += beta * lookahead.m_bar[i];
      return std::max(worst, max_abs_diff(mapped, xb));
    }
    case EquivalencePair::NmeSnag2: {
      NmeState nme{ParamVector(x1.dim()), ParamVector(x1.dim())};
      Snag2State ema{ParamVector(x1.dim())};
      for (std::size_t t = 0; t < steps; ++t) {
        xa = nme_step(nme, xa, grad(xa), eta, beta);
        xb = snag2_step(ema, xb, grad(xb), eta, beta);
        worst = std::max(worst, max_abs_diff(xa, xb));
      }
      return worst;
    }
    case EquivalencePair::Sum2Sum1: {
      const double lt = (1.0 - beta) * params.lambda;
      if (params.lambda < 0.0 || lt > 1.0 + 1e-12) {
        throw ConfigError("lambda must lie in [0, 1/(1-beta)]");
      }
      Sum2State velocity{ParamVector(x1.dim())};
      Sum1Runner ema{MomentumState(x1.dim(), beta, std::min(lt, 1.0)), eta};
      for (std::size_t t = 0; t < steps; ++t) {
        xa = sum2_step(velocity, xa, grad(xa), mapped_rate, beta, params.lambda);
        xb = ema.step(xb, grad(xb));
        worst = std::max(worst, max_abs_diff(xa, xb));
      }
      return worst;
    }
    case EquivalencePair::ShbSum1: {
      ParamVector x_prev = x1;  // x_0 = x_1
      Sum1Runner ema{MomentumState(x1.dim(), beta, 0.0), eta};
      for (std::size_t t = 0; t < steps; ++t) {
        ParamVector next = shb_step(xa, x_prev, grad(xa), mapped_rate, beta);
        x_prev = std::move(xa);
        xa = std::move(next);
        xb = ema.step(xb, grad(xb));
        worst = std::max(worst, max_abs_diff(xa, xb));
      }
      return worst;
    }
    case EquivalencePair::Snag2Sum1: {
      Snag2State nesterov{ParamVector(x1.dim())};
      Sum1Runner ema{MomentumState(x1.dim(), beta, 1.0 - beta), eta};
      for (std::size_t t = 0; t < steps; ++t) {
        xa = snag2_step(nesterov, xa, grad(xa), eta, beta);
        xb = ema.step(xb, grad(xb));
        worst = std::max(worst, max_abs_diff(xa, xb));
      }
      return worst;
    }
  }
  return worst;
}

}  // namespace uadam
