#ifndef OTI_REWARD_H_
#define OTI_REWARD_H_

#include "oti/errors.h"
#include "oti/rng.h"

namespace oti {

// Bernoulli reward law. The only family the simulator supports; samples are
// always in {0, 1} and hence in [0, 1].
struct RewardDist {
  double p = 0.0;

  static RewardDist bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("bernoulli parameter must lie in [0, 1]");
    }
    return RewardDist{p};
  }
};

inline double sample_reward(const RewardDist& dist, Rng& rng) {
  return rng.bernoulli(dist.p) ? 1.0 : 0.0;
}

}  // namespace oti

#endif  // OTI_REWARD_H_
