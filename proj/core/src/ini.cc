#include "oti/ini.h"

#include <string>

#include "oti/errors.h"

namespace oti {

std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

const IniEntry* IniSection::find(const std::string& key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

const IniSection* IniDocument::find(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

IniSection& IniDocument::get_or_add(const std::string& name) {
  for (auto& s : sections) {
    if (s.name == name) return s;
  }
  sections.push_back(IniSection{name, {}, {}});
  return sections.back();
}

IniDocument parse_ini(std::istream& in) {
  IniDocument doc;
  IniSection* current = &doc.get_or_add("");
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      current = &doc.get_or_add(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      current->raw_lines.push_back(line);
      continue;
    }
    IniEntry entry{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (entry.key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    if (current->find(entry.key) != nullptr) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                        entry.key + "'");
    }
    current->entries.push_back(std::move(entry));
  }
  return doc;
}

}  // namespace oti
