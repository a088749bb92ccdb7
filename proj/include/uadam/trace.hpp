#pragma once

#include <cstddef>
#include <vector>

namespace uadam {

/// One optimizer iteration. f_val, grad_norm_sq and delta_t are evaluated at
/// x_t (before the update); step_norm is ||x_{t+1} - x_t||.
struct TraceRecord {
  std::size_t t = 0;
  double f_val = 0.0;
  double grad_norm_sq = 0.0;
  double delta_t = 0.0;  // ||m_t - grad f(x_t)||^2
  double eta_min = 0.0;
  double eta_max = 0.0;
  double step_norm = 0.0;
};

/// Per-step records with t = 1, 2, ... in order.
class RunTrace {
 public:
  /// Throws std::logic_error unless record.t == size() + 1.
  void append(const TraceRecord& record);

  const std::vector<TraceRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const TraceRecord& operator[](std::size_t i) const { return records_[i]; }
  auto begin() const noexcept { return records_.begin(); }
  auto end() const noexcept { return records_.end(); }

 private:
  std::vector<TraceRecord> records_;
};

}  // namespace uadam
