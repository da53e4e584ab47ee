#ifndef OTI_INI_H_
#define OTI_INI_H_

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace oti {

// Minimal "key = value" text format with [section] headers and '#'
// comments. Lines without '=' are kept verbatim as raw lines of their
// section so that tabular blocks (e.g. a means matrix) can live in the
// same file.
struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  std::vector<IniEntry> entries;
  std::vector<std::string> raw_lines;

  const IniEntry* find(const std::string& key) const;
};

struct IniDocument {
  std::vector<IniSection> sections;

  const IniSection* find(const std::string& name) const;
  IniSection& get_or_add(const std::string& name);
};

// Throws ConfigError on malformed headers or duplicate keys.
IniDocument parse_ini(std::istream& in);

std::string trim(std::string s);

}  // namespace oti

#endif  // OTI_INI_H_
