#ifndef OTI_TOOLS_COMMANDS_H_
#define OTI_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace oti::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitCheckFailed = 2,
  kExitGenerationExhausted = 3,
};

// Commands: simulate, passive, sweep-delta, sweep-m, verify-ucb-bound,
// generate-instance, lemma1-check, repro.
struct RunManifest {
  std::string command;
  std::optional<std::filesystem::path> config_path;
  std::filesystem::path output_dir = "oti_out";
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  std::optional<int> threads;
  std::optional<std::filesystem::path> instance;
  bool full_trace = false;
  bool force = false;
};

const std::vector<std::string>& command_names();

// Runs one command and maps errors to exit codes. Progress and errors go
// to `log`.
int run_manifest(const RunManifest& manifest, std::ostream& log);

// argv front end (CLI11).
int run_cli(int argc, char** argv);

}  // namespace oti::cli

#endif  // OTI_TOOLS_COMMANDS_H_
