#include "uadam/cli/ini.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace uadam::cli {

namespace {

std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

IniDocument IniDocument::parse(std::string_view text) {
  IniDocument doc;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = eol + 1;

    const std::size_t start = skip_space(line, 0);
    if (start == line.size() || line[start] == '#' || line[start] == ';') {
      if (eol == text.size()) break;
      continue;
    }
    const std::size_t col = start + 1;

    if (line[start] == '[') {
      const std::string_view body = trim_right(line.substr(start));
      if (body.back() != ']') throw ParseError("unterminated section header", line_no, col);
      const std::string_view name = body.substr(1, body.size() - 2);
      if (!valid_name(name)) throw ParseError("bad section name", line_no, col + 1);
      section = std::string(name);
    } else {
      const std::size_t eq = line.find('=', start);
      if (eq == std::string_view::npos) throw ParseError("expected `key = value`", line_no, col);
      const std::string_view key = trim_right(line.substr(start, eq - start));
      if (!valid_name(key)) throw ParseError("bad key", line_no, col);
      if (section.empty()) throw ParseError("key outside any section", line_no, col);
      const std::size_t vstart = skip_space(line, eq + 1);
      const std::string_view value = trim_right(line.substr(vstart));
      if (value.empty()) throw ParseError("missing value", line_no, vstart + 1);
      if (doc.find(section, key) != nullptr) {
        throw ParseError("duplicate key `" + std::string(key) + "`", line_no, col);
      }
      doc.entries_.push_back(
          {section, std::string(key), std::string(value), line_no, col, vstart + 1});
    }
    if (eol == text.size()) break;
  }
  return doc;
}

const IniEntry* IniDocument::find(std::string_view section, std::string_view key) const {
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) return &e;
  }
  return nullptr;
}

void IniDocument::set(std::string_view section, std::string_view key, std::string value) {
  for (auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  entries_.push_back({std::string(section), std::string(key), std::move(value), 0, 0, 0});
}

void IniDocument::erase(std::string_view section, std::string_view key) {
  std::erase_if(entries_,
                [&](const IniEntry& e) { return e.section == section && e.key == key; });
}

std::string IniDocument::render() const {
  std::vector<std::string> sections;
  for (const auto& e : entries_) {
    if (std::find(sections.begin(), sections.end(), e.section) == sections.end()) {
      sections.push_back(e.section);
    }
  }
  std::ostringstream out;
  for (const auto& s : sections) {
    out << '[' << s << "]\n";
    for (const auto& e : entries_) {
      if (e.section == s) out << e.key << " = " << e.value << '\n';
    }
  }
  return out.str();
}

}  // namespace uadam::cli
