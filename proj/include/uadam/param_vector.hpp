#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace uadam {

/// Dense real vector of fixed dimension. Holds iterates, gradients and
/// moment estimates. All arithmetic on it is coordinate-wise.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
  ParamVector(std::initializer_list<double> init) : coords_(init) {}
  explicit ParamVector(std::vector<double> coords) : coords_(std::move(coords)) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  bool empty() const noexcept { return coords_.empty(); }

  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  double& operator[](std::size_t i) noexcept { return coords_[i]; }

  std::span<const double> coords() const noexcept { return coords_; }
  std::span<double> coords() noexcept { return coords_; }

  auto begin() const noexcept { return coords_.begin(); }
  auto end() const noexcept { return coords_.end(); }
  auto begin() noexcept { return coords_.begin(); }
  auto end() noexcept { return coords_.end(); }

  bool all_finite() const noexcept;

  bool operator==(const ParamVector&) const = default;

 private:
  std::vector<double> coords_;
};

enum class ElementOp { Add, Sub, Mul, Div, Pow, Max };

/// Coordinate-wise binary operation. Throws ConfigError on dimension
/// mismatch and NumericDomainError on a zero divisor or a negative base
/// raised to a non-integer power.
ParamVector elementwise(ElementOp op, const ParamVector& a, const ParamVector& b);
ParamVector elementwise(ElementOp op, const ParamVector& a, double b);

ParamVector add(const ParamVector& a, const ParamVector& b);
ParamVector sub(const ParamVector& a, const ParamVector& b);
ParamVector mul(const ParamVector& a, const ParamVector& b);
ParamVector div(const ParamVector& a, const ParamVector& b);
ParamVector max(const ParamVector& a, const ParamVector& b);
ParamVector pow(const ParamVector& a, double exponent);
ParamVector sqrt(const ParamVector& a);
ParamVector clip(const ParamVector& a, double lo, double hi);
ParamVector sign(const ParamVector& a);
ParamVector scale(const ParamVector& a, double s);

ParamVector operator+(const ParamVector& a, const ParamVector& b);
ParamVector operator-(const ParamVector& a, const ParamVector& b);
ParamVector operator*(double s, const ParamVector& a);

double dot(const ParamVector& a, const ParamVector& b);
double norm_sq(const ParamVector& a) noexcept;
double norm_inf(const ParamVector& a) noexcept;
double distance_sq(const ParamVector& a, const ParamVector& b);
double max_abs_diff(const ParamVector& a, const ParamVector& b);

void require_same_dim(const ParamVector& a, const ParamVector& b);

}  // namespace uadam
