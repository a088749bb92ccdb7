#include "uadam/lr_rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "uadam/errors.hpp"

namespace uadam {

double softplus(double x, double theta) noexcept {
  const double z = theta * x;
  if (z > 0.0) return x + std::log1p(std::exp(-z)) / theta;
  return std::log1p(std::exp(z)) / theta;
}

BoundCertificate bound_certificate(const RuleSpec& spec, double eta, double grad_bound) {
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (!(grad_bound > 0.0)) throw ConfigError("gradient bound G must be positive");
  validate(spec);
  constexpr double kNoBound = std::numeric_limits<double>::infinity();
  const double G = grad_bound;

  return std::visit(
      [&](const auto& p) -> BoundCertificate {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstParams>) {
          return {eta, eta, kNoBound};
        } else if constexpr (std::is_same_v<T, AdaBoundParams>) {
          return {eta * p.clip_lower, eta * p.clip_upper, kNoBound};
        } else if constexpr (std::is_same_v<T, YogiParams>) {
          return {eta / (std::numbers::sqrt2 * G + p.epsilon), eta / p.epsilon, G};
        } else if constexpr (std::is_same_v<T, AdanParams>) {
          return {eta / (G + p.epsilon), eta / p.epsilon, G / 3.0};
        } else if constexpr (std::is_same_v<T, SAdamParams>) {
          return {eta / softplus(G, p.theta), eta / softplus(0.0, p.theta), G};
        } else {
          // adam, amsgrad, adafom, adaema
          return {eta / (G + p.epsilon), eta / p.epsilon, G};
        }
      },
      spec);
}

LrRuleState::LrRuleState(RuleSpec spec, std::size_t dim, double beta1,
                         std::optional<double> grad_bound)
    : spec_(std::move(spec)), beta1_(beta1), v_(dim), v_bar_(dim), g_prev_(dim) {
  validate(spec_);
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw ConfigError("beta1 must lie in [0, 1)");
  if (grad_bound) {
    precondition_ = bound_certificate(spec_, 1.0, *grad_bound).grad_precondition;
  }
  if (rule() == LrRule::AdaBound) {
    // v_0 = clip(0, 1/c_u^2, 1/c_l^2).
    v_ = ParamVector(dim, 1.0 / (std::get<AdaBoundParams>(spec_).clip_upper *
                                 std::get<AdaBoundParams>(spec_).clip_upper));
  }
}

double LrRuleState::next_weight() {
  const auto& p = std::get<AdaEmaParams>(spec_);
  double w = weight_scale_;
  switch (p.weights) {
    case WeightScheme::Uniform:
      break;
    case WeightScheme::Linear:
      w = weight_scale_ * static_cast<double>(step_);
      break;
    case WeightScheme::Geometric:
      w = (step_ == 1 ? weight_scale_ : last_weight_) * p.weight_ratio;
      break;
  }
  last_weight_ = w;
  return w;
}

namespace {

void emit_adaptive(const ParamVector& v, double eta, double epsilon, ParamVector& out) {
  for (std::size_t i = 0; i < v.dim(); ++i) out[i] = eta / (std::sqrt(v[i]) + epsilon);
}

}  // namespace

ParamVector lr_update(LrRuleState& s, const ParamVector& g, double eta) {
  require_same_dim(s.v_, g);
  ++s.step_;
  if (s.precondition_ && norm_inf(g) > *s.precondition_) ++s.violations_;

  const std::size_t d = g.dim();
  ParamVector eta_t(d);

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstParams>) {
          for (std::size_t i = 0; i < d; ++i) eta_t[i] = eta;
        } else if constexpr (std::is_same_v<T, AdamParams>) {
          for (std::size_t i = 0; i < d; ++i) {
            s.v_[i] = p.beta2 * s.v_[i] + (1.0 - p.beta2) * g[i] * g[i];
          }
          emit_adaptive(s.v_, eta, p.epsilon, eta_t);
        } else if constexpr (std::is_same_v<T, AmsGradParams>) {
          for (std::size_t i = 0; i < d; ++i) {
            s.v_bar_[i] = p.beta2 * s.v_bar_[i] + (1.0 - p.beta2) * g[i] * g[i];
            s.v_[i] = std::max(s.v_[i], s.v_bar_[i]);
          }
          emit_adaptive(s.v_, eta, p.epsilon, eta_t);
        } else if constexpr (std::is_same_v<T, AdaFomParams>) {
          const double t = static_cast<double>(s.step_);
          for (std::size_t i = 0; i < d; ++i) {
            s.v_[i] = ((t - 1.0) * s.v_[i] + g[i] * g[i]) / t;
          }
          emit_adaptive(s.v_, eta, p.epsilon, eta_t);
        } else if constexpr (std::is_same_v<T, AdaBoundParams>) {
          const double lo = 1.0 / (p.clip_upper * p.clip_upper);
          const double hi = 1.0 / (p.clip_lower * p.clip_lower);
          for (std::size_t i = 0; i < d; ++i) {
            s.v_bar_[i] = p.beta2 * s.v_bar_[i] + (1.0 - p.beta2) * g[i] * g[i];
            s.v_[i] = std::clamp(s.v_bar_[i], lo, hi);
            eta_t[i] = eta / std::sqrt(s.v_[i]);
          }
        } else if constexpr (std::is_same_v<T, YogiParams>) {
          for (std::size_t i = 0; i < d; ++i) {
            const double g2 = g[i] * g[i];
            const double diff = s.v_[i] - g2;
            const double sgn = static_cast<double>((diff > 0.0) - (diff < 0.0));
            s.v_[i] = s.v_[i] - (1.0 - p.beta2) * sgn * g2;
            if (s.v_[i] < 0.0) {
              throw std::logic_error("yogi second moment went negative at coordinate " +
                                     std::to_string(i));
            }
          }
          emit_adaptive(s.v_, eta, p.epsilon, eta_t);
        } else if constexpr (std::is_same_v<T, AdaEmaParams>) {
          const double w = s.next_weight();
          const double w_prev = s.weight_sum_;
          s.weight_sum_ += w;
          for (std::size_t i = 0; i < d; ++i) {
            s.v_[i] = (w_prev * s.v_[i] + w * g[i] * g[i]) / s.weight_sum_;
          }
          if (s.weight_sum_ > 1e150) {
            s.last_weight_ /= s.weight_sum_;
            s.weight_scale_ /= s.weight_sum_;
            s.weight_sum_ = 1.0;
          }
          emit_adaptive(s.v_, eta, p.epsilon, eta_t);
        } else if constexpr (std::is_same_v<T, AdanParams>) {
          for (std::size_t i = 0; i < d; ++i) {
            const double n = g[i] + (1.0 - s.beta1_) * (g[i] - s.g_prev_[i]);
            s.v_[i] = (1.0 - p.beta2) * s.v_[i] + p.beta2 * n * n;
          }
          s.g_prev_ = g;
          emit_adaptive(s.v_, eta, p.epsilon, eta_t);
        } else if constexpr (std::is_same_v<T, SAdamParams>) {
          for (std::size_t i = 0; i < d; ++i) {
            s.v_[i] = p.beta2 * s.v_[i] + (1.0 - p.beta2) * g[i] * g[i];
            eta_t[i] = eta / softplus(std::sqrt(s.v_[i]), p.theta);
          }
        }
      },
      s.spec_);

  for (std::size_t i = 0; i < d; ++i) {
    if (!(eta_t[i] > 0.0)) {
      throw std::logic_error("nonpositive learning rate at coordinate " + std::to_string(i));
    }
  }
  return eta_t;
}

}  // namespace uadam
