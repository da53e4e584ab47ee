#ifndef OTI_SIM_H_
#define OTI_SIM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "oti/agent.h"
#include "oti/instance.h"
#include "oti/principal.h"

namespace oti {

struct SimConfig {
  std::int64_t horizon = 100000;
  double delta = 0.01;
  double alpha = 2.0;
  KappaRule kappa;
  CbVariant cb_variant = CbVariant::kSimplified;
  // Either one shared behavior or one per agent.
  std::vector<IncentiveBehavior> behaviors = {IncentiveBehavior::always_follow()};
  bool never_ban = false;
  int runs = 100;
  std::uint64_t master_seed = 20231031;
  // Evaluate the clean event |mu_hat_k - mu_k| <= CB_k at every
  // incentivizing step. Costs O(KM) per step after identification.
  bool track_confidence = true;
  int threads = 1;

  // Throws ConfigError.
  void validate(int num_arms, int num_agents) const;
  const IncentiveBehavior& behavior_for(int m) const;
  std::int64_t kappa_steps() const { return kappa.resolve(horizon); }
};

struct EpisodeTrace {
  std::uint64_t seed = 0;
  int num_agents = 0;
  int num_arms = 0;
  int k_hat = 0;
  bool correct = false;
  std::int64_t c_total = 0;
  // Row-major M x K.
  std::vector<std::int64_t> c_pair;
  std::vector<std::int64_t> free_pulls;
  int s_final_size = 0;
  std::vector<bool> bans;
  bool confidence_violated = false;
  bool optimal_eliminated = false;
  std::vector<double> reward_per_agent;
  std::vector<std::int64_t> bonus_per_agent;
  // Local step of the agent's first refusal, -1 if none.
  std::vector<std::int64_t> first_refusal;
  // Bonuses paid to the agent after its first refusal.
  std::vector<std::int64_t> bonus_after_refusal;
  // Offers made to each agent (taken or not).
  std::vector<std::int64_t> offers_received;

  std::int64_t pair(const std::vector<std::int64_t>& mat, int m, int k) const {
    return mat[static_cast<size_t>(m) * num_arms + k];
  }
  bool operator==(const EpisodeTrace&) const = default;
};

// One agent's action at one step.
struct StepRecord {
  std::int64_t t = 0;
  int m = 0;
  int arm = 0;
  double reward = 0.0;
  std::optional<int> offered;
  bool followed = true;
};

struct EpisodeHooks {
  // After the principal has issued its offers for step t.
  std::function<void(std::int64_t t, const Principal&,
                     std::span<const IncentiveOffer>)>
      on_offers;
  // After each agent's action has been observed.
  std::function<void(const StepRecord&)> on_action;
};

enum class PrincipalMode { kOti, kPassive };

// One seeded episode. Agents are stepped in index order inside each step:
// offers are announced, every agent acts and is rewarded, the principal
// observes the pull and the response to any offer.
class Episode {
 public:
  Episode(const LocalInstanceSet& inst, const SimConfig& cfg,
          std::uint64_t seed, PrincipalMode mode = PrincipalMode::kOti);

  void run(const EpisodeHooks& hooks = {});
  EpisodeTrace trace() const { return trace_; }

  const Principal& principal() const { return principal_; }
  const std::vector<UcbAgent>& agents() const { return agents_; }

 private:
  LocalInstanceSet inst_;
  SimConfig cfg_;
  GlobalView view_;
  Principal principal_;
  std::vector<UcbAgent> agents_;
  std::vector<Rng> reward_rngs_;
  std::vector<Rng> behavior_rngs_;
  EpisodeTrace trace_;
  bool done_ = false;
};

EpisodeTrace run_episode(const LocalInstanceSet& inst, const SimConfig& cfg,
                         std::uint64_t seed);
EpisodeTrace run_passive_baseline(const LocalInstanceSet& inst,
                                  const SimConfig& cfg, std::uint64_t seed);

std::uint64_t episode_seed(std::uint64_t master_seed, std::int64_t index);
std::uint64_t agent_reward_seed(std::uint64_t episode_seed, int m);
std::uint64_t agent_behavior_seed(std::uint64_t episode_seed, int m);

// Final state obtained by driving fresh agents with the offers in `log`
// instead of a live principal.
struct ReplayResult {
  std::vector<UcbAgent> agents;
  // Row-major M x K.
  std::vector<std::int64_t> pulls;
  std::vector<double> means;
  std::vector<IncentiveRecord> responses;
};

ReplayResult replay_incentive_log(const LocalInstanceSet& inst,
                                  const SimConfig& cfg, std::uint64_t seed,
                                  std::span<const IncentiveRecord> log);

struct AggregateResult {
  int runs = 0;
  int num_agents = 0;
  int num_arms = 0;
  double accuracy = 0.0;
  double mean_cost = 0.0;
  double stddev_cost = 0.0;
  std::vector<double> mean_c_pair;
  std::vector<double> mean_free_pulls;
  double violation_rate = 0.0;
  double optimal_eliminated_rate = 0.0;
  std::vector<EpisodeTrace> traces;
};

// cfg.runs episodes with seeds episode_seed(cfg.master_seed, i). Episodes
// may run on cfg.threads threads; the reduction is always in episode order.
AggregateResult run_monte_carlo(const LocalInstanceSet& inst,
                                const SimConfig& cfg,
                                PrincipalMode mode = PrincipalMode::kOti);

AggregateResult aggregate(std::vector<EpisodeTrace> traces);

// Run `fn(i)` for i in [0, n) on up to `threads` workers.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace oti

#endif  // OTI_SIM_H_
