#include "uadam/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uadam/lr_rules.hpp"
#include "uadam/philox.hpp"

namespace uadam::kernels {

double Lemma1Moments::diff_std_error() const noexcept {
  if (n < 2) return 0.0;
  const double var = m2_diff / static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}

double NoiseMoments::coord_std_error(std::size_t i) const noexcept {
  if (n < 2) return 0.0;
  return std::sqrt(m2[i] / static_cast<double>(n - 1) / static_cast<double>(n));
}

double NoiseMoments::sq_norm_std_error() const noexcept {
  if (n < 2) return 0.0;
  return std::sqrt(m2_sq_norm / static_cast<double>(n - 1) / static_cast<double>(n));
}

double bounded_gradient_entry(std::uint64_t seed, std::uint64_t stream, std::uint64_t step,
                              std::uint32_t coord, double bound) noexcept {
  const auto r = Philox4x32::generate(
      {static_cast<std::uint32_t>(step), static_cast<std::uint32_t>(stream),
       static_cast<std::uint32_t>(stream >> 32), coord},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
  const double selector = uniform_open01(r[0], r[1]);
  const double u = uniform_open01(r[2], r[3]);
  if (selector < 1.0 / 16.0) return 0.0;
  if (selector < 3.0 / 16.0) return (r[3] & 1u) ? bound : -bound;
  return std::clamp(bound * (2.0 * u - 1.0), -bound, bound);
}

namespace {

// Welford accumulator with Chan's pairwise merge.
struct Running {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Running& o) noexcept {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

struct LemmaAcc {
  Running lhs;
  Running var;
  Running diff;

  void merge(const LemmaAcc& o) noexcept {
    lhs.merge(o.lhs);
    var.merge(o.var);
    diff.merge(o.diff);
  }
};

void lemma_draws(LemmaAcc& acc, const ParamVector& m_prev, const ParamVector& grad,
                 double keep, const NoiseModel& noise, std::size_t first, std::size_t last) {
  const double fresh = 1.0 - keep;
  for (std::size_t k = first; k < last; ++k) {
    const ParamVector g = sample_gradient_from(grad, noise, k + 1);
    double lhs = 0.0;
    double var = 0.0;
    for (std::size_t i = 0; i < grad.dim(); ++i) {
      const double m = keep * m_prev[i] + fresh * g[i];
      lhs += (m - grad[i]) * (m - grad[i]);
      var += (g[i] - grad[i]) * (g[i] - grad[i]);
    }
    acc.lhs.add(lhs);
    acc.var.add(var);
    acc.diff.add(lhs - fresh * fresh * var);
  }
}

Lemma1Moments to_moments(const LemmaAcc& acc) {
  return {acc.diff.n, acc.lhs.mean, acc.var.mean, acc.diff.mean, acc.diff.m2};
}

struct NoiseAcc {
  std::vector<Running> coords;
  Running sq_norm;

  explicit NoiseAcc(std::size_t dim = 0) : coords(dim) {}

  void merge(const NoiseAcc& o) noexcept {
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i].merge(o.coords[i]);
    sq_norm.merge(o.sq_norm);
  }
};

void noise_draws(NoiseAcc& acc, const ParamVector& grad, const NoiseModel& noise,
                 std::size_t first, std::size_t last) {
  for (std::size_t k = first; k < last; ++k) {
    const ParamVector g = sample_gradient_from(grad, noise, k + 1);
    for (std::size_t i = 0; i < grad.dim(); ++i) acc.coords[i].add(g[i]);
    acc.sq_norm.add(distance_sq(g, grad));
  }
}

NoiseMoments to_moments(const NoiseAcc& acc, std::size_t dim) {
  NoiseMoments out;
  out.n = acc.sq_norm.n;
  out.mean = ParamVector(dim);
  out.m2 = ParamVector(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out.mean[i] = acc.coords[i].mean;
    out.m2[i] = acc.coords[i].m2;
  }
  out.mean_sq_norm = acc.sq_norm.mean;
  out.m2_sq_norm = acc.sq_norm.m2;
  return out;
}

struct StreamResult {
  std::size_t violations = 0;
  double eta_min = std::numeric_limits<double>::infinity();
  double eta_max = 0.0;
};

StreamResult run_stream(const BoundSweepSpec& spec, const BoundCertificate& cert,
                        double entry_bound, std::uint64_t stream) {
  StreamResult out;
  LrRuleState state(spec.rule, spec.dim, spec.beta1);
  ParamVector g(spec.dim);
  const double lo = cert.eta_l * (1.0 - kBoundSlack);
  const double hi = cert.eta_u * (1.0 + kBoundSlack);
  for (std::size_t t = 1; t <= spec.length; ++t) {
    for (std::size_t i = 0; i < spec.dim; ++i) {
      g[i] = bounded_gradient_entry(spec.seed, stream, t, static_cast<std::uint32_t>(i),
                                    entry_bound);
    }
    const ParamVector eta_t = lr_update(state, g, spec.eta);
    bool bad = false;
    for (double e : eta_t) {
      out.eta_min = std::min(out.eta_min, e);
      out.eta_max = std::max(out.eta_max, e);
      bad = bad || e < lo || e > hi;
    }
    if (bad) ++out.violations;
  }
  return out;
}

BoundSweepResult combine(const std::vector<StreamResult>& parts, const BoundSweepSpec& spec) {
  BoundSweepResult out;
  out.streams = spec.streams;
  out.steps = spec.streams * spec.length;
  out.eta_min = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) {
    out.violations += p.violations;
    out.eta_min = std::min(out.eta_min, p.eta_min);
    out.eta_max = std::max(out.eta_max, p.eta_max);
  }
  return out;
}

double entry_bound_for(const BoundCertificate& cert, double grad_bound) {
  return std::isfinite(cert.grad_precondition) ? cert.grad_precondition : grad_bound;
}

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

}  // namespace

namespace serial {

Lemma1Moments lemma1_moments(const ParamVector& m_prev, const ParamVector& grad, double keep,
                             const NoiseModel& noise, std::size_t n) {
  require_same_dim(m_prev, grad);
  LemmaAcc acc;
  lemma_draws(acc, m_prev, grad, keep, noise, 0, n);
  return to_moments(acc);
}

NoiseMoments noise_moments(const ParamVector& grad, const NoiseModel& noise, std::size_t n) {
  NoiseAcc acc(grad.dim());
  noise_draws(acc, grad, noise, 0, n);
  return to_moments(acc, grad.dim());
}

BoundSweepResult bound_sweep(const BoundSweepSpec& spec) {
  const BoundCertificate cert = bound_certificate(spec.rule, spec.eta, spec.grad_bound);
  const double entry_bound = entry_bound_for(cert, spec.grad_bound);
  std::vector<StreamResult> parts;
  parts.reserve(spec.streams);
  for (std::size_t s = 0; s < spec.streams; ++s) {
    parts.push_back(run_stream(spec, cert, entry_bound, s));
  }
  return combine(parts, spec);
}

}  // namespace serial

namespace omp {

Lemma1Moments lemma1_moments(const ParamVector& m_prev, const ParamVector& grad, double keep,
                             const NoiseModel& noise, std::size_t n) {
  require_same_dim(m_prev, grad);
  const std::size_t chunks = chunk_count(n);
  std::vector<LemmaAcc> parts(chunks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t first = static_cast<std::size_t>(c) * kChunk;
    lemma_draws(parts[static_cast<std::size_t>(c)], m_prev, grad, keep, noise, first,
                std::min(n, first + kChunk));
  }
  LemmaAcc total;
  for (const auto& p : parts) total.merge(p);
  return to_moments(total);
}

NoiseMoments noise_moments(const ParamVector& grad, const NoiseModel& noise, std::size_t n) {
  const std::size_t chunks = chunk_count(n);
  std::vector<NoiseAcc> parts(chunks, NoiseAcc(grad.dim()));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    const std::size_t first = static_cast<std::size_t>(c) * kChunk;
    noise_draws(parts[static_cast<std::size_t>(c)], grad, noise, first,
                std::min(n, first + kChunk));
  }
  NoiseAcc total(grad.dim());
  for (const auto& p : parts) total.merge(p);
  return to_moments(total, grad.dim());
}

BoundSweepResult bound_sweep(const BoundSweepSpec& spec) {
  const BoundCertificate cert = bound_certificate(spec.rule, spec.eta, spec.grad_bound);
  const double entry_bound = entry_bound_for(cert, spec.grad_bound);
  std::vector<StreamResult> parts(spec.streams);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t s = 0; s < static_cast<std::ptrdiff_t>(spec.streams); ++s) {
    parts[static_cast<std::size_t>(s)] =
        run_stream(spec, cert, entry_bound, static_cast<std::uint64_t>(s));
  }
  return combine(parts, spec);
}

}  // namespace omp

}  // namespace uadam::kernels
