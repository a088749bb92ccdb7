#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uadam/errors.hpp"

namespace uadam::cli {

/// Config error pinned to a 1-based line and column of the source text.
class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : ConfigError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct IniEntry {
  std::string section;
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t key_column = 0;
  std::size_t value_column = 0;
};

/// Sectioned `key = value` text. Blank lines and lines starting with `#` or
/// `;` are ignored. Keys outside a section and repeated keys are errors.
class IniDocument {
 public:
  static IniDocument parse(std::string_view text);

  const std::vector<IniEntry>& entries() const noexcept { return entries_; }
  const IniEntry* find(std::string_view section, std::string_view key) const;
  /// Replaces or appends a value (used by sweeps).
  void set(std::string_view section, std::string_view key, std::string value);
  void erase(std::string_view section, std::string_view key);
  std::string render() const;

 private:
  std::vector<IniEntry> entries_;
};

}  // namespace uadam::cli
