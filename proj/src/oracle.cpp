#include "uadam/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "uadam/errors.hpp"
#include "uadam/philox.hpp"

namespace uadam {

double Problem::f(const ParamVector& x) const {
  if (x.dim() != dim) throw ConfigError("point dimension does not match problem " + name);
  return value(x);
}

ParamVector Problem::grad(const ParamVector& x) const {
  if (x.dim() != dim) throw ConfigError("point dimension does not match problem " + name);
  return gradient(x);
}

bool Problem::in_region(const ParamVector& x) const noexcept {
  return norm_inf(x) <= region_radius;
}

namespace {

// log(1 + exp(z)) without overflow.
double log1pexp(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Problem make_quadratic(std::size_t dim, const ProblemParams& params) {
  std::vector<double> diag = params.diag.empty() ? std::vector<double>(dim, 1.0) : params.diag;
  if (diag.size() != dim) {
    throw ConfigError("quadratic diag has " + std::to_string(diag.size()) +
                      " entries, dim is " + std::to_string(dim));
  }
  for (double a : diag) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("quadratic diag must be positive");
  }
  const double amax = *std::max_element(diag.begin(), diag.end());
  auto a = std::make_shared<const std::vector<double>>(std::move(diag));

  Problem p;
  p.name = "quadratic";
  p.dim = dim;
  p.lipschitz = amax;
  p.f_star = 0.0;
  p.region_radius = params.radius;
  p.grad_inf_bound = amax * params.radius;
  p.start = ParamVector(dim, 1.0);
  p.value = [a](const ParamVector& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) acc += (*a)[i] * x[i] * x[i];
    return 0.5 * acc;
  };
  p.gradient = [a](const ParamVector& x) {
    ParamVector g(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) g[i] = (*a)[i] * x[i];
    return g;
  };
  return p;
}

Problem make_rosenbrock(std::size_t dim) {
  if (dim < 2) throw ConfigError("rosenbrock requires dim >= 2");
  Problem p;
  p.name = "rosenbrock";
  p.dim = dim;
  // Gershgorin on [-2, 2]^d: diagonal <= 2 + 1200*4 + 400*2 + 200, two
  // off-diagonal entries of magnitude <= 400*2.
  p.lipschitz = 7402.0;
  p.f_star = 0.0;
  p.region_radius = 2.0;
  // 400*2*6 + 2*3 + 200*6 on the same box.
  p.grad_inf_bound = 6006.0;
  p.start = ParamVector(dim);
  for (std::size_t i = 0; i < dim; ++i) p.start[i] = (i % 2 == 0) ? -1.2 : 1.0;
  p.value = [](const ParamVector& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.dim(); ++i) {
      const double r = x[i + 1] - x[i] * x[i];
      const double s = 1.0 - x[i];
      acc += 100.0 * r * r + s * s;
    }
    return acc;
  };
  p.gradient = [](const ParamVector& x) {
    ParamVector g(x.dim());
    for (std::size_t i = 0; i + 1 < x.dim(); ++i) {
      const double r = x[i + 1] - x[i] * x[i];
      g[i] += -400.0 * x[i] * r - 2.0 * (1.0 - x[i]);
      g[i + 1] += 200.0 * r;
    }
    return g;
  };
  return p;
}

struct LogisticData {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> features;  // row-major n x d
  std::vector<double> labels;    // 0 or 1
  double reg = 0.0;

  double margin(std::size_t row, const ParamVector& w) const {
    double z = 0.0;
    for (std::size_t j = 0; j < d; ++j) z += features[row * d + j] * w[j];
    return z;
  }
};

Problem make_logistic(std::size_t dim, const ProblemParams& params) {
  if (params.samples == 0) throw ConfigError("logistic requires samples >= 1");
  if (params.reg < 0.0) throw ConfigError("logistic reg must be nonnegative");
  auto data = std::make_shared<LogisticData>();
  data->n = params.samples;
  data->d = dim;
  data->reg = params.reg;
  data->features.resize(data->n * dim);

  // Streams: 0 features, 1 ground-truth weights, 2 label coins.
  ParamVector truth(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    truth[j] = standard_normal(params.data_seed, 0, static_cast<std::uint32_t>(j), 1);
  }
  for (std::size_t i = 0; i < data->n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      data->features[i * dim + j] =
          standard_normal(params.data_seed, i, static_cast<std::uint32_t>(j), 0);
    }
    const auto coin = Philox4x32::generate(
        {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), 0, 2},
        {static_cast<std::uint32_t>(params.data_seed),
         static_cast<std::uint32_t>(params.data_seed >> 32)});
    const double u = uniform_open01(coin[0], coin[1]);
    data->labels.push_back(u < sigmoid(data->margin(i, truth)) ? 1.0 : 0.0);
  }

  Eigen::MatrixXd x = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                     Eigen::RowMajor>>(
      data->features.data(), static_cast<Eigen::Index>(data->n),
      static_cast<Eigen::Index>(dim));
  const Eigen::MatrixXd gram = x.transpose() * x;
  const double lambda_max =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly)
          .eigenvalues()
          .maxCoeff();

  double col_abs_mean = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < data->n; ++i) acc += std::abs(data->features[i * dim + j]);
    col_abs_mean = std::max(col_abs_mean, acc / static_cast<double>(data->n));
  }

  Problem p;
  p.name = "logistic";
  p.dim = dim;
  p.lipschitz = 0.25 * lambda_max / static_cast<double>(data->n) + params.reg;
  p.f_star = 0.0;
  p.region_radius = params.radius;
  p.grad_inf_bound = col_abs_mean + params.reg * params.radius;
  p.start = ParamVector(dim);
  p.value = [data](const ParamVector& w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < data->n; ++i) {
      const double z = data->margin(i, w);
      acc += log1pexp(z) - data->labels[i] * z;
    }
    return acc / static_cast<double>(data->n) + 0.5 * data->reg * norm_sq(w);
  };
  p.gradient = [data](const ParamVector& w) {
    ParamVector g(data->d);
    for (std::size_t i = 0; i < data->n; ++i) {
      const double r = sigmoid(data->margin(i, w)) - data->labels[i];
      for (std::size_t j = 0; j < data->d; ++j) g[j] += r * data->features[i * data->d + j];
    }
    const double inv_n = 1.0 / static_cast<double>(data->n);
    for (std::size_t j = 0; j < data->d; ++j) g[j] = g[j] * inv_n + data->reg * w[j];
    return g;
  };
  return p;
}

}  // namespace

Problem make_problem(std::string_view name, std::size_t dim, const ProblemParams& params) {
  if (dim == 0) throw ConfigError("problem dimension must be >= 1");
  if (name == "quadratic") return make_quadratic(dim, params);
  if (name == "rosenbrock") return make_rosenbrock(dim);
  if (name == "logistic") return make_logistic(dim, params);
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

double noise_sigma(const NoiseModel& noise, double grad_norm_sq, std::size_t dim) noexcept {
  return std::sqrt((noise.d0 + noise.d1 * grad_norm_sq) / static_cast<double>(dim));
}

ParamVector sample_gradient_from(const ParamVector& true_grad, const NoiseModel& noise,
                                 std::uint64_t t) {
  ParamVector g = true_grad;
  if (noise.noiseless()) return g;
  const double sigma = noise_sigma(noise, norm_sq(true_grad), true_grad.dim());
  if (sigma == 0.0) return g;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    g[i] += sigma * standard_normal(noise.seed, t, static_cast<std::uint32_t>(i), noise.stream);
  }
  return g;
}

ParamVector sample_gradient(const Problem& problem, const NoiseModel& noise,
                            const ParamVector& x, std::uint64_t t) {
  return sample_gradient_from(problem.grad(x), noise, t);
}

double finite_diff_check(const Problem& problem, std::span<const ParamVector> points,
                         double h) {
  if (!(h > 0.0)) throw ConfigError("finite difference step must be positive");
  double worst = 0.0;
  for (const ParamVector& x : points) {
    const ParamVector analytic = problem.grad(x);
    ParamVector probe = x;
    for (std::size_t i = 0; i < x.dim(); ++i) {
      probe[i] = x[i] + h;
      const double up = problem.f(probe);
      probe[i] = x[i] - h;
      const double down = problem.f(probe);
      probe[i] = x[i];
      const double fd = (up - down) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - analytic[i]) / std::max(1.0, std::abs(analytic[i])));
    }
  }
  return worst;
}

}  // namespace uadam
