#include "uadam/param_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uadam/errors.hpp"

namespace uadam {

bool ParamVector::all_finite() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(),
                     [](double v) { return std::isfinite(v); });
}

void require_same_dim(const ParamVector& a, const ParamVector& b) {
  if (a.dim() != b.dim()) {
    throw ConfigError("dimension mismatch: " + std::to_string(a.dim()) +
                      " vs " + std::to_string(b.dim()));
  }
}

namespace {

double apply(ElementOp op, double x, double y, std::size_t i) {
  switch (op) {
    case ElementOp::Add:
      return x + y;
    case ElementOp::Sub:
      return x - y;
    case ElementOp::Mul:
      return x * y;
    case ElementOp::Div:
      if (y == 0.0) throw NumericDomainError("division by zero", i);
      return x / y;
    case ElementOp::Pow:
      if (x < 0.0 && std::trunc(y) != y) {
        throw NumericDomainError("negative base with non-integer exponent", i);
      }
      return std::pow(x, y);
    case ElementOp::Max:
      return std::max(x, y);
  }
  return 0.0;
}

}  // namespace

ParamVector elementwise(ElementOp op, const ParamVector& a, const ParamVector& b) {
  require_same_dim(a, b);
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = apply(op, a[i], b[i], i);
  return out;
}

ParamVector elementwise(ElementOp op, const ParamVector& a, double b) {
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = apply(op, a[i], b, i);
  return out;
}

ParamVector add(const ParamVector& a, const ParamVector& b) {
  return elementwise(ElementOp::Add, a, b);
}
ParamVector sub(const ParamVector& a, const ParamVector& b) {
  return elementwise(ElementOp::Sub, a, b);
}
ParamVector mul(const ParamVector& a, const ParamVector& b) {
  return elementwise(ElementOp::Mul, a, b);
}
ParamVector div(const ParamVector& a, const ParamVector& b) {
  return elementwise(ElementOp::Div, a, b);
}
ParamVector max(const ParamVector& a, const ParamVector& b) {
  return elementwise(ElementOp::Max, a, b);
}
ParamVector pow(const ParamVector& a, double exponent) {
  return elementwise(ElementOp::Pow, a, exponent);
}

ParamVector sqrt(const ParamVector& a) {
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (a[i] < 0.0) throw NumericDomainError("square root of negative value", i);
    out[i] = std::sqrt(a[i]);
  }
  return out;
}

ParamVector clip(const ParamVector& a, double lo, double hi) {
  if (!(lo <= hi)) throw ConfigError("clip requires lo <= hi");
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = std::clamp(a[i], lo, hi);
  return out;
}

ParamVector sign(const ParamVector& a) {
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    out[i] = static_cast<double>((a[i] > 0.0) - (a[i] < 0.0));
  }
  return out;
}

ParamVector scale(const ParamVector& a, double s) {
  ParamVector out(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) out[i] = s * a[i];
  return out;
}

ParamVector operator+(const ParamVector& a, const ParamVector& b) { return add(a, b); }
ParamVector operator-(const ParamVector& a, const ParamVector& b) { return sub(a, b); }
ParamVector operator*(double s, const ParamVector& a) { return scale(a, s); }

double dot(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm_sq(const ParamVector& a) noexcept {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

double norm_inf(const ParamVector& a) noexcept {
  double acc = 0.0;
  for (double v : a) acc = std::max(acc, std::abs(v));
  return acc;
}

double distance_sq(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double max_abs_diff(const ParamVector& a, const ParamVector& b) {
  require_same_dim(a, b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc = std::max(acc, std::abs(a[i] - b[i]));
  return acc;
}

}  // namespace uadam
