#ifndef OTI_INSTANCE_GEN_H_
#define OTI_INSTANCE_GEN_H_

#include <cstdint>
#include <vector>

#include "oti/instance.h"
#include "oti/rng.h"

namespace oti {

// Random instance generator for the many-agent experiments.
//
// A base vector nu is spread linearly over [base_low, base_high] with K
// points. Each local mean mu_{k,m} is drawn from a Gaussian centered at
// nu_k with variance `local_variance`, truncated to [0, 1]. The draw is
// accepted when the resulting global game has a unique optimum, unique
// local optima, and a minimum gap inside [dmin_low, dmin_high].
struct InstanceGenConfig {
  int num_arms = 30;
  int num_agents = 10;
  double base_low = 0.4;
  double base_high = 0.545;
  double local_variance = 0.01;
  double dmin_low = 4.5e-3;
  double dmin_high = 5.5e-3;
  std::int64_t max_attempts = 1000000;

  void validate() const;
};

std::vector<double> base_means(const InstanceGenConfig& cfg);

// Draw from N(mean, stddev^2) conditioned on [0, 1], by rejection.
double truncated_gaussian01(double mean, double stddev, Rng& rng);

struct GeneratedInstance {
  LocalInstanceSet instance;
  std::int64_t attempts = 0;
};

// Throws GenerationExhausted after cfg.max_attempts rejected draws.
GeneratedInstance generate_random_instance(const InstanceGenConfig& cfg,
                                           Rng& rng);

}  // namespace oti

#endif  // OTI_INSTANCE_GEN_H_
