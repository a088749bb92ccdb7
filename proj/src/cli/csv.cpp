#include "uadam/cli/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "uadam/errors.hpp"

namespace uadam::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
  out << '\n';
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ConfigError("csv has no column `" + name + "`");
  return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw ConfigError("csv cell `" + cell + "` is not a number");
  }
  return v;
}

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write `" + path + "`");
  for (const auto& m : table.metadata) out << "# " << m << '\n';
  write_row(out, table.header);
  for (const auto& r : table.rows) write_row(out, r);
  if (!out) throw ConfigError("write failed for `" + path + "`");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read `" + path + "`");
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind('#', 0) == 0) {
      table.metadata.push_back(line.size() > 1 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (line.empty()) continue;
    auto cells = split(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != table.header.size()) {
        throw ConfigError("ragged csv row in `" + path + "`");
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw ConfigError("csv `" + path + "` has no header");
  return table;
}

CsvTable trace_table(const RunTrace& trace, std::size_t stride,
                     std::vector<std::string> metadata) {
  CsvTable table;
  table.metadata = std::move(metadata);
  table.header = kTraceColumns;
  for (const auto& r : trace) {
    if (r.t % stride != 0) continue;
    table.rows.push_back({std::to_string(r.t), format_number(r.f_val),
                          format_number(r.grad_norm_sq), format_number(r.delta_t),
                          format_number(r.eta_min), format_number(r.eta_max),
                          format_number(r.step_norm)});
  }
  return table;
}

RunTrace trace_from_table(const CsvTable& table) {
  RunTrace trace;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    TraceRecord r;
    r.t = static_cast<std::size_t>(table.number(i, "t"));
    r.f_val = table.number(i, "f");
    r.grad_norm_sq = table.number(i, "grad_norm_sq");
    r.delta_t = table.number(i, "delta_t");
    r.eta_min = table.number(i, "eta_min");
    r.eta_max = table.number(i, "eta_max");
    r.step_norm = table.number(i, "step_norm");
    trace.append(r);
  }
  return trace;
}

}  // namespace uadam::cli
