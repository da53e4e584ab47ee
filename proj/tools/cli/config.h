#ifndef OTI_TOOLS_CONFIG_H_
#define OTI_TOOLS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "oti/instance_gen.h"
#include "oti/sim.h"

namespace oti::cli {

// Everything a command can be configured with. Defaults reproduce the
// experimental setup: T = 1e5, delta = 0.01, alpha = 2, 100 runs,
// kappa = T/2, simplified bound, always-following agents, bans enforced.
struct ExperimentConfig {
  SimConfig sim;
  InstanceGenConfig generator;
  std::uint64_t generator_seed = 1;
  std::optional<std::filesystem::path> instance_file;

  std::vector<double> deltas = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<int> m_values = {10, 30, 50, 70, 90, 110, 130, 150};

  std::vector<double> ucb_means = {0.9, 0.5, 0.1};
  std::int64_t ucb_lambda = 100000;
  int ucb_runs = 1000;

  int lemma1_agent = 0;  // 0-based
  // 0 means "first incentivizing step".
  std::int64_t lemma1_refuse_from = 0;

  std::vector<std::string> warnings;
};

// Reads the optional config file, applies "section.key=value" overrides
// (bare keys refer to [sim]) and validates. Unknown sections or keys are
// errors. Throws ConfigError with the offending field in the message.
ExperimentConfig parse_config(const std::optional<std::filesystem::path>& path,
                              const std::vector<std::string>& overrides);

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::vector<std::string>& overrides);

}  // namespace oti::cli

#endif  // OTI_TOOLS_CONFIG_H_
