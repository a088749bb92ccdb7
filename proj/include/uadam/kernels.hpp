#pragma once

// Monte Carlo and batch kernels behind the diagnostics. Each kernel exists
// twice: `serial` is the plain single-pass reference kept for tests and
// benchmarks; `omp` splits the work into fixed-size chunks that run under
// OpenMP and are merged in chunk order, so its result does not depend on the
// thread count.

#include <cstddef>
#include <cstdint>

#include "uadam/config.hpp"
#include "uadam/oracle.hpp"
#include "uadam/param_vector.hpp"

namespace uadam::kernels {

inline constexpr std::size_t kChunk = 4096;

/// Draws k = 1..n of g_k = grad + sigma z_k at a frozen state and
/// m_k = keep * m_prev + (1 - keep) g_k. Accumulates
///   lhs_k  = ||m_k - grad||^2
///   var_k  = ||g_k - grad||^2
///   diff_k = lhs_k - (1 - keep)^2 var_k
/// The diff term carries all of the sampling noise in the variance-recursion
/// slack, so its standard error is the test's tolerance unit.
struct Lemma1Moments {
  std::size_t n = 0;
  double mean_lhs = 0.0;
  double mean_var = 0.0;
  double mean_diff = 0.0;
  double m2_diff = 0.0;  // sum of squared deviations of diff_k

  double diff_std_error() const noexcept;
};

/// Per-coordinate mean of g_k and moments of ||g_k - grad||^2, k = 1..n.
struct NoiseMoments {
  std::size_t n = 0;
  ParamVector mean;
  ParamVector m2;
  double mean_sq_norm = 0.0;
  double m2_sq_norm = 0.0;

  double coord_std_error(std::size_t i) const noexcept;
  double sq_norm_std_error() const noexcept;
};

/// Random bounded gradient streams fed through one rule. Entries are uniform
/// on [-P, P] with P the certificate's gradient precondition (G when the rule
/// has none), with occasional exact +-P and 0 entries.
struct BoundSweepResult {
  std::size_t streams = 0;
  std::size_t steps = 0;
  std::size_t violations = 0;  // steps with some eta_{t,i} outside [eta_l, eta_u]
  double eta_min = 0.0;
  double eta_max = 0.0;
};

struct BoundSweepSpec {
  RuleSpec rule;
  double eta = 1e-3;
  double grad_bound = 1.0;
  double beta1 = 0.9;
  std::size_t streams = 10000;
  std::size_t length = 100;
  std::size_t dim = 4;
  std::uint64_t seed = 0;
};

/// Relative tolerance on the certificate bounds.
inline constexpr double kBoundSlack = 1e-12;

/// Gradient entry for (stream, step, coordinate) of a bound sweep.
double bounded_gradient_entry(std::uint64_t seed, std::uint64_t stream, std::uint64_t step,
                              std::uint32_t coord, double bound) noexcept;

namespace serial {
Lemma1Moments lemma1_moments(const ParamVector& m_prev, const ParamVector& grad, double keep,
                             const NoiseModel& noise, std::size_t n);
NoiseMoments noise_moments(const ParamVector& grad, const NoiseModel& noise, std::size_t n);
BoundSweepResult bound_sweep(const BoundSweepSpec& spec);
}  // namespace serial

namespace omp {
Lemma1Moments lemma1_moments(const ParamVector& m_prev, const ParamVector& grad, double keep,
                             const NoiseModel& noise, std::size_t n);
NoiseMoments noise_moments(const ParamVector& grad, const NoiseModel& noise, std::size_t n);
BoundSweepResult bound_sweep(const BoundSweepSpec& spec);
}  // namespace omp

}  // namespace uadam::kernels
