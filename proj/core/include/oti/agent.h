#ifndef OTI_AGENT_H_
#define OTI_AGENT_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "oti/rng.h"

namespace oti {

// How an agent answers an incentive offer.
struct IncentiveBehavior {
  enum class Kind { kAlwaysFollow, kStochasticFollow, kScriptedRefuser };

  Kind kind = Kind::kAlwaysFollow;
  // Acceptance probability for kStochasticFollow.
  double p_follow = 1.0;
  // kScriptedRefuser: refuse any offer made at one of these local steps.
  std::set<std::int64_t> refuse_at;
  // kScriptedRefuser: additionally refuse the first offer received at or
  // after this local step (used for the one-refusal counterfactual).
  std::optional<std::int64_t> refuse_first_offer_from;

  static IncentiveBehavior always_follow() { return {}; }
  static IncentiveBehavior stochastic_follow(double p);
  static IncentiveBehavior scripted_refuser(std::set<std::int64_t> steps);
  static IncentiveBehavior refuse_first_offer_after(std::int64_t step);
};

// Binary unit bonus on at most one arm.
struct IncentiveOffer {
  std::optional<int> arm;
  double bonus = 1.0;

  bool present() const { return arm.has_value(); }
};

struct AgentAction {
  int arm = 0;
  // True when the pulled arm is the offered arm, or vacuously when there
  // was no offer.
  bool followed = true;
};

// mean + sqrt(alpha ln(t) / n); +inf when n == 0.
double ucb_index(double mean, std::int64_t n, double t, double alpha);

// alpha-UCB learner with an incentive-response policy.
//
// The agent never sees the horizon. Arms are played once each in index
// order before the index rule applies; ties in the index go to the lowest
// arm.
class UcbAgent {
 public:
  UcbAgent(int num_arms, double alpha,
           IncentiveBehavior behavior = IncentiveBehavior::always_follow());

  // Decide the arm for local step t_local() + 1. `behavior_rng` is only
  // consumed by stochastic compliance, and only when an offer is present.
  AgentAction act(const IncentiveOffer& offer, Rng& behavior_rng);

  // Throws RewardOutOfRange if reward is outside [0, 1].
  void update(int arm, double reward);

  // Arm the index rule picks at the next step, ignoring offers.
  int ucb_choice() const;

  int num_arms() const { return num_arms_; }
  double alpha() const { return alpha_; }
  std::int64_t t_local() const { return t_local_; }
  const std::vector<std::int64_t>& pulls() const { return pulls_; }
  const std::vector<double>& means() const { return means_; }
  const IncentiveBehavior& behavior() const { return behavior_; }
  // Set once the agent has refused any offer.
  bool banned_aware() const { return banned_aware_; }

 private:
  bool accepts(Rng& behavior_rng);

  int num_arms_;
  double alpha_;
  IncentiveBehavior behavior_;
  std::vector<std::int64_t> pulls_;
  std::vector<double> means_;
  // 1 / sqrt(pulls), cached so the per-step index is one multiply-add.
  std::vector<double> inv_sqrt_pulls_;
  std::int64_t t_local_ = 0;
  int unpulled_ = 0;
  bool banned_aware_ = false;
};

// Per-step income of one agent: raw reward and whether a bonus was paid.
struct AgentStepIncome {
  double reward = 0.0;
  bool bonus_paid = false;
};

// R_m(T): sum of raw rewards plus bonuses actually received.
double cumulative_reward(std::span<const AgentStepIncome> log);

// Pull counts of a standalone alpha-UCB agent on `row` for `steps` steps,
// drawing Bernoulli rewards from `reward_rng`.
std::vector<std::int64_t> run_local_ucb(std::span<const double> row,
                                        double alpha, std::int64_t steps,
                                        Rng& reward_rng);

}  // namespace oti

#endif  // OTI_AGENT_H_
