#ifndef OTI_INSTANCE_IO_H_
#define OTI_INSTANCE_IO_H_

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "oti/instance.h"

namespace oti {

// Instance file layout:
//
//   [instance]
//   M = 2
//   K = 3
//
//   [metadata]          # optional, free-form key = value pairs
//   seed = 7
//
//   [means]             # one agent per line, K decimals each
//   0.89 0.47 0.01
//   0.01 0.47 0.89
//
// Means are written in shortest round-trip form so a reread instance is
// bit-identical.
struct InstanceFile {
  LocalInstanceSet instance;
  std::vector<std::pair<std::string, std::string>> metadata;
};

void write_instance(std::ostream& out, const InstanceFile& file);
InstanceFile read_instance(std::istream& in);

InstanceFile load_instance(const std::filesystem::path& path);

}  // namespace oti

#endif  // OTI_INSTANCE_IO_H_
