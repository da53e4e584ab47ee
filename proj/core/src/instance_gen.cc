#include "oti/instance_gen.h"

#include <cmath>
#include <string>

#include "oti/errors.h"

namespace oti {

void InstanceGenConfig::validate() const {
  if (num_arms < 2) throw ConfigError("generator.K must be at least 2");
  if (num_agents < 1) throw ConfigError("generator.M must be at least 1");
  if (!(base_low >= 0.0 && base_low < base_high && base_high <= 1.0)) {
    throw ConfigError(
        "generator base range must satisfy 0 <= base_low < base_high <= 1");
  }
  if (!(local_variance > 0.0)) {
    throw ConfigError("generator.local_variance must be positive");
  }
  if (!(dmin_low > 0.0 && dmin_low <= dmin_high && dmin_high < 1.0)) {
    throw ConfigError(
        "generator delta_min window must be a nonempty subinterval of (0, 1)");
  }
  if (max_attempts < 1) {
    throw ConfigError("generator.max_attempts must be at least 1");
  }
}

std::vector<double> base_means(const InstanceGenConfig& cfg) {
  std::vector<double> nu(cfg.num_arms);
  const double step = (cfg.base_high - cfg.base_low) / (cfg.num_arms - 1);
  for (int k = 0; k < cfg.num_arms; ++k) nu[k] = cfg.base_low + k * step;
  nu.back() = cfg.base_high;
  return nu;
}

double truncated_gaussian01(double mean, double stddev, Rng& rng) {
  if (stddev == 0.0) return std::fmin(1.0, std::fmax(0.0, mean));
  for (;;) {
    const double x = rng.gaussian(mean, stddev);
    if (x >= 0.0 && x <= 1.0) return x;
  }
}

GeneratedInstance generate_random_instance(const InstanceGenConfig& cfg,
                                           Rng& rng) {
  cfg.validate();
  const std::vector<double> nu = base_means(cfg);
  const double stddev = std::sqrt(cfg.local_variance);
  std::vector<std::vector<double>> rows(cfg.num_agents,
                                        std::vector<double>(cfg.num_arms));
  for (std::int64_t attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    for (auto& row : rows) {
      for (int k = 0; k < cfg.num_arms; ++k) {
        row[k] = truncated_gaussian01(nu[k], stddev, rng);
      }
    }
    try {
      LocalInstanceSet inst(rows);
      const GlobalView view = derive_global_view(inst);
      if (view.delta_min >= cfg.dmin_low && view.delta_min <= cfg.dmin_high) {
        return {std::move(inst), attempt};
      }
    } catch (const NonUniqueOptimum&) {
      // Tied optimum; resample.
    }
  }
  throw GenerationExhausted("no instance accepted after " +
                            std::to_string(cfg.max_attempts) + " attempts");
}

}  // namespace oti
