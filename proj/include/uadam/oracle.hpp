#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uadam/param_vector.hpp"

namespace uadam {

/// Smooth objective with analytic gradient and certified constants.
///
/// `lipschitz` bounds the gradient Lipschitz constant and `grad_inf_bound`
/// bounds ||grad f||_inf on the box |x_i| <= region_radius. For quadratics the
/// Lipschitz constant is global; for Rosenbrock it only holds on the box.
struct Problem {
  std::string name;
  std::size_t dim = 0;
  double lipschitz = 0.0;
  double f_star = 0.0;
  double region_radius = 0.0;
  double grad_inf_bound = 0.0;
  ParamVector start;
  std::function<double(const ParamVector&)> value;
  std::function<ParamVector(const ParamVector&)> gradient;

  double f(const ParamVector& x) const;
  ParamVector grad(const ParamVector& x) const;
  bool in_region(const ParamVector& x) const noexcept;
};

struct ProblemParams {
  /// Quadratic diagonal; empty means all ones.
  std::vector<double> diag;
  /// Logistic regression: sample count, ridge term, data generator seed.
  std::size_t samples = 200;
  double reg = 0.01;
  std::uint64_t data_seed = 7;
  /// Box half-width for the quadratic and logistic certificates.
  double radius = 10.0;
};

/// quadratic: f(x) = 1/2 sum a_i x_i^2, L = max a_i, f_* = 0, start = ones.
/// rosenbrock: chained form sum 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2,
///   start (-1.2, 1, -1.2, ...), L = 7402 from a Gershgorin bound on [-2, 2]^d.
/// logistic: mean logistic loss on seeded synthetic data plus ridge,
///   L = lambda_max(X^T X) / (4 n) + reg, f_* = 0, start = zeros.
/// Throws ConfigError on unknown names or bad dimensions.
Problem make_problem(std::string_view name, std::size_t dim, const ProblemParams& params = {});

/// Weak-growth-condition noise: E||g - grad f(x)||^2 = d0 + d1 ||grad f(x)||^2.
/// `stream` separates independent draw families sharing one seed.
struct NoiseModel {
  double d0 = 0.0;
  double d1 = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;

  bool noiseless() const noexcept { return d0 == 0.0 && d1 == 0.0; }
};

/// Per-coordinate noise standard deviation sqrt((d0 + d1 ||grad||^2) / d).
double noise_sigma(const NoiseModel& noise, double grad_norm_sq, std::size_t dim) noexcept;

/// g = grad f(x) + sigma(x) z_t with z_t isotropic standard normal keyed by
/// (seed, t, coordinate, stream). Bit-identical for identical inputs.
ParamVector sample_gradient(const Problem& problem, const NoiseModel& noise,
                            const ParamVector& x, std::uint64_t t);

/// Same, reusing an already evaluated true gradient.
ParamVector sample_gradient_from(const ParamVector& true_grad, const NoiseModel& noise,
                                 std::uint64_t t);

/// Max over points and coordinates of |fd - analytic| / max(1, |analytic|)
/// where fd is the central difference with step h.
double finite_diff_check(const Problem& problem, std::span<const ParamVector> points,
                         double h);

}  // namespace uadam
