#include "oti/agent.h"

#include <cmath>
#include <limits>

#include "oti/errors.h"
#include "oti/reward.h"

namespace oti {

IncentiveBehavior IncentiveBehavior::stochastic_follow(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError("p_follow must lie in [0, 1]");
  }
  IncentiveBehavior b;
  b.kind = Kind::kStochasticFollow;
  b.p_follow = p;
  return b;
}

IncentiveBehavior IncentiveBehavior::scripted_refuser(
    std::set<std::int64_t> steps) {
  IncentiveBehavior b;
  b.kind = Kind::kScriptedRefuser;
  b.refuse_at = std::move(steps);
  return b;
}

IncentiveBehavior IncentiveBehavior::refuse_first_offer_after(
    std::int64_t step) {
  IncentiveBehavior b;
  b.kind = Kind::kScriptedRefuser;
  b.refuse_first_offer_from = step;
  return b;
}

double ucb_index(double mean, std::int64_t n, double t, double alpha) {
  if (n <= 0) return std::numeric_limits<double>::infinity();
  return mean + std::sqrt(alpha * std::log(t) / static_cast<double>(n));
}

UcbAgent::UcbAgent(int num_arms, double alpha, IncentiveBehavior behavior)
    : num_arms_(num_arms),
      alpha_(alpha),
      behavior_(std::move(behavior)),
      pulls_(num_arms, 0),
      means_(num_arms, 0.0),
      inv_sqrt_pulls_(num_arms, 0.0) {
  if (num_arms < 1) throw DomainError("agent needs at least one arm");
}

int UcbAgent::ucb_choice() const {
  if (unpulled_ < num_arms_) return unpulled_;
  const double bonus =
      std::sqrt(alpha_ * std::log(static_cast<double>(t_local_ + 1)));
  const double* mu = means_.data();
  const double* w = inv_sqrt_pulls_.data();
  int best = 0;
  double best_index = mu[0] + bonus * w[0];
  for (int k = 1; k < num_arms_; ++k) {
    const double index = mu[k] + bonus * w[k];
    if (index > best_index) {
      best_index = index;
      best = k;
    }
  }
  return best;
}

bool UcbAgent::accepts(Rng& behavior_rng) {
  switch (behavior_.kind) {
    case IncentiveBehavior::Kind::kAlwaysFollow:
      return true;
    case IncentiveBehavior::Kind::kStochasticFollow:
      return behavior_rng.bernoulli(behavior_.p_follow);
    case IncentiveBehavior::Kind::kScriptedRefuser: {
      const std::int64_t step = t_local_ + 1;
      if (behavior_.refuse_at.contains(step)) return false;
      if (behavior_.refuse_first_offer_from && !banned_aware_ &&
          step >= *behavior_.refuse_first_offer_from) {
        return false;
      }
      return true;
    }
  }
  return true;
}

AgentAction UcbAgent::act(const IncentiveOffer& offer, Rng& behavior_rng) {
  if (!offer.present()) return {ucb_choice(), true};
  const int offered = *offer.arm;
  if (offered < 0 || offered >= num_arms_) {
    throw ProtocolViolation("offer on an arm the agent does not have");
  }
  if (accepts(behavior_rng)) return {offered, true};
  banned_aware_ = true;
  const int arm = ucb_choice();
  // The principal only sees the pull; landing on the offered arm anyway is
  // indistinguishable from taking the offer.
  return {arm, arm == offered};
}

void UcbAgent::update(int arm, double reward) {
  if (arm < 0 || arm >= num_arms_) throw DomainError("arm index out of range");
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw RewardOutOfRange("reward outside [0, 1]");
  }
  const std::int64_t n = ++pulls_[arm];
  means_[arm] += (reward - means_[arm]) / static_cast<double>(n);
  inv_sqrt_pulls_[arm] = 1.0 / std::sqrt(static_cast<double>(n));
  ++t_local_;
  while (unpulled_ < num_arms_ && pulls_[unpulled_] > 0) ++unpulled_;
}

double cumulative_reward(std::span<const AgentStepIncome> log) {
  double total = 0.0;
  for (const auto& step : log) {
    total += step.reward + (step.bonus_paid ? 1.0 : 0.0);
  }
  return total;
}

std::vector<std::int64_t> run_local_ucb(std::span<const double> row,
                                        double alpha, std::int64_t steps,
                                        Rng& reward_rng) {
  UcbAgent agent(static_cast<int>(row.size()), alpha);
  Rng unused(0);
  for (std::int64_t t = 0; t < steps; ++t) {
    const int arm = agent.act({}, unused).arm;
    agent.update(arm, sample_reward(RewardDist{row[arm]}, reward_rng));
  }
  return agent.pulls();
}

}  // namespace oti
