#include "oti/sim.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "oti/errors.h"
#include "oti/reward.h"

namespace oti {

void SimConfig::validate(int num_arms, int num_agents) const {
  if (horizon < 2 * static_cast<std::int64_t>(num_arms)) {
    throw ConfigError("T must be at least 2K (T = " + std::to_string(horizon) +
                      ", K = " + std::to_string(num_arms) + ")");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  const auto k = kappa_steps();
  if (k < 0 || k > horizon) throw ConfigError("kappa must lie in [0, T]");
  if (behaviors.empty() ||
      (behaviors.size() != 1 && static_cast<int>(behaviors.size()) != num_agents)) {
    throw ConfigError("behaviors must list one shared entry or one per agent");
  }
  for (const auto& b : behaviors) {
    if (!(b.p_follow >= 0.0 && b.p_follow <= 1.0)) {
      throw ConfigError("p_follow must lie in [0, 1]");
    }
  }
}

const IncentiveBehavior& SimConfig::behavior_for(int m) const {
  return behaviors.size() == 1 ? behaviors.front() : behaviors[m];
}

std::uint64_t episode_seed(std::uint64_t master_seed, std::int64_t index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(index),
                     StreamTag::kEpisode);
}

std::uint64_t agent_reward_seed(std::uint64_t episode_seed, int m) {
  return derive_seed(episode_seed, static_cast<std::uint64_t>(m),
                     StreamTag::kReward);
}

std::uint64_t agent_behavior_seed(std::uint64_t episode_seed, int m) {
  return derive_seed(episode_seed, static_cast<std::uint64_t>(m),
                     StreamTag::kBehavior);
}

namespace {

PrincipalParams principal_params(const LocalInstanceSet& inst,
                                 const SimConfig& cfg, PrincipalMode mode) {
  PrincipalParams p;
  p.horizon = cfg.horizon;
  p.num_arms = inst.num_arms();
  p.num_agents = inst.num_agents();
  p.delta = cfg.delta;
  p.cb_variant = cfg.cb_variant;
  p.kappa = cfg.kappa_steps();
  p.never_ban = cfg.never_ban;
  p.incentivize = mode == PrincipalMode::kOti;
  return p;
}

std::vector<UcbAgent> make_agents(const LocalInstanceSet& inst,
                                  const SimConfig& cfg) {
  std::vector<UcbAgent> agents;
  agents.reserve(inst.num_agents());
  for (int m = 0; m < inst.num_agents(); ++m) {
    agents.emplace_back(inst.num_arms(), cfg.alpha, cfg.behavior_for(m));
  }
  return agents;
}

}  // namespace

Episode::Episode(const LocalInstanceSet& inst, const SimConfig& cfg,
                 std::uint64_t seed, PrincipalMode mode)
    : inst_(inst),
      cfg_(cfg),
      view_(derive_global_view(inst)),
      principal_((cfg.validate(inst.num_arms(), inst.num_agents()),
                  principal_params(inst, cfg, mode))),
      agents_(make_agents(inst, cfg)) {
  const int M = inst.num_agents();
  const int K = inst.num_arms();
  for (int m = 0; m < M; ++m) {
    reward_rngs_.emplace_back(agent_reward_seed(seed, m));
    behavior_rngs_.emplace_back(agent_behavior_seed(seed, m));
  }
  trace_.seed = seed;
  trace_.num_agents = M;
  trace_.num_arms = K;
  trace_.c_pair.assign(static_cast<size_t>(M) * K, 0);
  trace_.free_pulls.assign(static_cast<size_t>(M) * K, 0);
  trace_.bans.assign(M, false);
  trace_.reward_per_agent.assign(M, 0.0);
  trace_.bonus_per_agent.assign(M, 0);
  trace_.first_refusal.assign(M, -1);
  trace_.bonus_after_refusal.assign(M, 0);
  trace_.offers_received.assign(M, 0);
}

void Episode::run(const EpisodeHooks& hooks) {
  if (done_) throw ProtocolViolation("episode already ran");
  const int M = inst_.num_agents();
  const int K = inst_.num_arms();
  const std::int64_t kappa = principal_.kappa();
  const int k_star = view_.k_star;

  for (std::int64_t t = 1; t <= cfg_.horizon; ++t) {
    const std::vector<IncentiveOffer>& offers = principal_.step(t);

    if (t > kappa) {
      if (cfg_.track_confidence && !trace_.confidence_violated) {
        const auto means = principal_.snapshot_means();
        const auto bounds = principal_.snapshot_bounds();
        for (int k = 0; k < K; ++k) {
          if (std::fabs(means[k] - view_.global_means[k]) > bounds[k]) {
            trace_.confidence_violated = true;
            break;
          }
        }
      }
      if (!trace_.optimal_eliminated && !principal_.is_active(k_star)) {
        trace_.optimal_eliminated = true;
      }
    }
    if (hooks.on_offers) hooks.on_offers(t, principal_, offers);

    for (int m = 0; m < M; ++m) {
      const IncentiveOffer& offer = offers[m];
      UcbAgent& agent = agents_[m];
      const AgentAction action = agent.act(offer, behavior_rngs_[m]);
      const double reward =
          sample_reward(RewardDist{inst_.mean(m, action.arm)}, reward_rngs_[m]);
      agent.update(action.arm, reward);
      principal_.observe(m, action.arm, reward);

      bool paid = false;
      if (offer.present()) {
        principal_.record_response(m, action.followed);
        ++trace_.offers_received[m];
        paid = action.followed;
        if (!action.followed && trace_.first_refusal[m] < 0) {
          trace_.first_refusal[m] = t;
        }
      }
      const size_t cell = static_cast<size_t>(m) * K + action.arm;
      if (paid) {
        ++trace_.c_pair[cell];
        ++trace_.bonus_per_agent[m];
        if (trace_.first_refusal[m] >= 0) ++trace_.bonus_after_refusal[m];
      }
      trace_.reward_per_agent[m] += reward + (paid ? 1.0 : 0.0);
      if (t <= kappa) ++trace_.free_pulls[cell];

      if (hooks.on_action) {
        hooks.on_action(StepRecord{t, m, action.arm, reward, offer.arm,
                                   action.followed});
      }
    }
  }

  trace_.s_final_size = static_cast<int>(principal_.active().size());
  trace_.k_hat = principal_.finalize();
  trace_.correct = trace_.k_hat == k_star;
  trace_.c_total = principal_.incentives_paid();
  for (int m = 0; m < M; ++m) trace_.bans[m] = principal_.banned(m);
  done_ = true;
}

EpisodeTrace run_episode(const LocalInstanceSet& inst, const SimConfig& cfg,
                         std::uint64_t seed) {
  Episode ep(inst, cfg, seed, PrincipalMode::kOti);
  ep.run();
  return ep.trace();
}

EpisodeTrace run_passive_baseline(const LocalInstanceSet& inst,
                                  const SimConfig& cfg, std::uint64_t seed) {
  Episode ep(inst, cfg, seed, PrincipalMode::kPassive);
  ep.run();
  return ep.trace();
}

ReplayResult replay_incentive_log(const LocalInstanceSet& inst,
                                  const SimConfig& cfg, std::uint64_t seed,
                                  std::span<const IncentiveRecord> log) {
  cfg.validate(inst.num_arms(), inst.num_agents());
  const int M = inst.num_agents();
  const int K = inst.num_arms();
  ReplayResult out;
  out.agents = make_agents(inst, cfg);
  Principal record(principal_params(inst, cfg, PrincipalMode::kPassive));
  std::vector<Rng> reward_rngs;
  std::vector<Rng> behavior_rngs;
  for (int m = 0; m < M; ++m) {
    reward_rngs.emplace_back(agent_reward_seed(seed, m));
    behavior_rngs.emplace_back(agent_behavior_seed(seed, m));
  }

  size_t next = 0;
  std::vector<IncentiveOffer> offers(M);
  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    std::fill(offers.begin(), offers.end(), IncentiveOffer{});
    for (size_t i = next; i < log.size() && log[i].t == t; ++i) {
      offers[log[i].m].arm = log[i].k;
    }
    for (int m = 0; m < M; ++m) {
      const AgentAction action = out.agents[m].act(offers[m], behavior_rngs[m]);
      const double reward =
          sample_reward(RewardDist{inst.mean(m, action.arm)}, reward_rngs[m]);
      out.agents[m].update(action.arm, reward);
      record.observe(m, action.arm, reward);
      if (offers[m].present()) {
        out.responses.push_back({t, m, *offers[m].arm, action.followed});
      }
    }
    while (next < log.size() && log[next].t == t) ++next;
  }
  out.pulls.resize(static_cast<size_t>(M) * K);
  out.means.resize(static_cast<size_t>(M) * K);
  for (int m = 0; m < M; ++m) {
    for (int k = 0; k < K; ++k) {
      out.pulls[static_cast<size_t>(m) * K + k] = record.pulls(m, k);
      out.means[static_cast<size_t>(m) * K + k] = record.mean(m, k);
    }
  }
  return out;
}

}  // namespace oti
