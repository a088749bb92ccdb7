#pragma once

#include <string>
#include <vector>

#include "uadam/trace.hpp"

namespace uadam::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// `#`-prefixed metadata lines, a header row, then data rows. Numbers are
/// written with 17 significant digits so they re-parse bit-exactly.
struct CsvTable {
  std::vector<std::string> metadata;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws ConfigError if absent.
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

std::string format_number(double v);

void write_csv(const std::string& path, const CsvTable& table);
/// Throws ConfigError on unreadable files or ragged rows.
CsvTable read_csv(const std::string& path);

inline const std::vector<std::string> kTraceColumns = {
    "t", "f", "grad_norm_sq", "delta_t", "eta_min", "eta_max", "step_norm"};
inline const std::vector<std::string> kSummaryColumns = {"avg_grad_sq", "min_grad_sq",
                                                         "plateau", "conditions"};
inline const std::vector<std::string> kSweepColumns = {
    "axis", "value", "seed", "avg_grad_sq", "min_grad_sq", "plateau", "status"};

/// Trace rows for t divisible by `stride`.
CsvTable trace_table(const RunTrace& trace, std::size_t stride,
                     std::vector<std::string> metadata);
/// Rebuilds a trace from a stride-1 trace table.
RunTrace trace_from_table(const CsvTable& table);

}  // namespace uadam::cli
