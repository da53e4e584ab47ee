#include "oti/instance_io.h"

#include <fstream>
#include <sstream>

#include "oti/errors.h"
#include "oti/format.h"
#include "oti/ini.h"

namespace oti {

void write_instance(std::ostream& out, const InstanceFile& file) {
  const auto& inst = file.instance;
  out << "[instance]\n";
  out << "M = " << inst.num_agents() << "\n";
  out << "K = " << inst.num_arms() << "\n";
  if (!file.metadata.empty()) {
    out << "\n[metadata]\n";
    for (const auto& [key, value] : file.metadata) {
      out << key << " = " << value << "\n";
    }
  }
  out << "\n[means]\n";
  for (int m = 0; m < inst.num_agents(); ++m) {
    for (int k = 0; k < inst.num_arms(); ++k) {
      if (k > 0) out << ' ';
      out << format_double(inst.mean(m, k));
    }
    out << '\n';
  }
}

InstanceFile read_instance(std::istream& in) {
  const IniDocument doc = parse_ini(in);
  const IniSection* header = doc.find("instance");
  const IniSection* means = doc.find("means");
  if (header == nullptr || means == nullptr) {
    throw ConfigError("instance file needs [instance] and [means] sections");
  }
  const IniEntry* m_entry = header->find("M");
  const IniEntry* k_entry = header->find("K");
  if (m_entry == nullptr || k_entry == nullptr) {
    throw ConfigError("instance file: [instance] must define M and K");
  }
  const auto M = parse_int(m_entry->value, "instance.M");
  const auto K = parse_int(k_entry->value, "instance.K");
  if (static_cast<std::int64_t>(means->raw_lines.size()) != M) {
    throw ConfigError("instance file: expected " + std::to_string(M) +
                      " rows of means, found " +
                      std::to_string(means->raw_lines.size()));
  }
  std::vector<std::vector<double>> rows;
  for (const auto& line : means->raw_lines) {
    std::istringstream ss(line);
    std::vector<double> row;
    std::string tok;
    while (ss >> tok) row.push_back(parse_double(tok, "instance mean"));
    if (static_cast<std::int64_t>(row.size()) != K) {
      throw ConfigError("instance file: row '" + line + "' does not have K = " +
                        std::to_string(K) + " entries");
    }
    rows.push_back(std::move(row));
  }
  InstanceFile file{LocalInstanceSet(rows), {}};
  if (const IniSection* meta = doc.find("metadata")) {
    for (const auto& e : meta->entries) file.metadata.emplace_back(e.key, e.value);
  }
  return file;
}

InstanceFile load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open instance file " + path.string());
  return read_instance(in);
}

}  // namespace oti
