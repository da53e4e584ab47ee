#include "oti/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "oti/errors.h"
#include "oti/kl.h"

namespace oti {

double ucb_pull_threshold(double alpha, double lambda, double gap) {
  const double c = std::sqrt(alpha) - std::sqrt(1.5);
  return c * c * std::log(lambda / 2.0) / (4.0 * gap * gap);
}

UcbBoundReport verify_ucb_lower_bound(std::span<const double> row,
                                      double alpha, std::int64_t lambda,
                                      int runs, std::uint64_t seed,
                                      int threads) {
  if (alpha < 1.5) {
    throw AlphaOutOfRange("the alpha-UCB pull threshold needs alpha >= 3/2");
  }
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (lambda <= 2) throw ConfigError("Lambda must exceed 2");
  const int K = static_cast<int>(row.size());
  const LocalGaps gaps = gaps_of_row(row);

  UcbBoundReport rep;
  rep.lambda = lambda;
  rep.alpha = alpha;
  rep.runs = runs;
  rep.thresholds.resize(K);
  for (int k = 0; k < K; ++k) {
    rep.thresholds[k] =
        ucb_pull_threshold(alpha, static_cast<double>(lambda), gaps.gaps[k]);
  }
  const double L = static_cast<double>(lambda);
  const double a = alpha - 1.5;
  rep.condition_ok = L / (std::log(L) * std::log(L)) >
                     4.0 * K * a * a / std::pow(gaps.delta_min, 4);

  std::vector<std::vector<std::int64_t>> pulls(runs);
  parallel_for(runs, threads, [&](std::int64_t i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i), StreamTag::kReward));
    pulls[i] = run_local_ucb(row, alpha, lambda, rng);
  });

  rep.min_pulls.assign(K, std::numeric_limits<std::int64_t>::max());
  for (const auto& p : pulls) {
    bool violated = false;
    for (int k = 0; k < K; ++k) {
      rep.min_pulls[k] = std::min(rep.min_pulls[k], p[k]);
      if (static_cast<double>(p[k]) < rep.thresholds[k]) violated = true;
    }
    rep.violation_count += violated ? 1 : 0;
  }
  rep.violation_rate = static_cast<double>(rep.violation_count) / runs;
  rep.bound = 2.0 * K / L;
  rep.tolerance =
      rep.bound + 3.0 * std::sqrt(rep.bound * (1.0 - rep.bound) / runs);
  return rep;
}

double coverage_check(std::span<const EpisodeTrace> traces) {
  if (traces.empty()) return 1.0;
  const auto ok = std::count_if(traces.begin(), traces.end(),
                                [](const auto& t) { return !t.confidence_violated; });
  return static_cast<double>(ok) / static_cast<double>(traces.size());
}

LinearFit ols(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("ols: size mismatch");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (xs.size() < 2 || sxx == 0.0) {
    throw DegenerateSweep("ols needs at least two distinct x values");
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy > 0.0) {
    double sse = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
      sse += r * r;
    }
    fit.r_squared = 1.0 - sse / syy;
  }
  return fit;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t q = i; q <= j; ++q) ranks[order[q]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("spearman: size mismatch");
  if (xs.size() < 2) return 0.0;
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

DeltaSweepResult delta_sweep(const LocalInstanceSet& inst, const SimConfig& cfg,
                             std::span<const double> deltas) {
  if (std::set<double>(deltas.begin(), deltas.end()).size() < 3) {
    throw ConfigError("delta sweep needs at least three distinct deltas");
  }
  DeltaSweepResult out;
  std::vector<double> xs, ys;
  for (double d : deltas) {
    SimConfig c = cfg;
    c.delta = d;
    const AggregateResult agg = run_monte_carlo(inst, c);
    DeltaSweepPoint p;
    p.delta = d;
    p.log_inv_delta = std::log(1.0 / d);
    p.mean_cost = agg.mean_cost;
    p.stddev_cost = agg.stddev_cost;
    p.accuracy = agg.accuracy;
    out.points.push_back(p);
    xs.push_back(p.log_inv_delta);
    ys.push_back(p.mean_cost);
  }
  out.fit = ols(xs, ys);
  out.applicable = out.fit.r_squared.has_value();
  return out;
}

std::uint64_t m_sweep_instance_seed(std::uint64_t master_seed, int num_agents) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(num_agents),
                     StreamTag::kGenerator);
}

MSweepResult m_sweep(const InstanceGenConfig& gen_template, const SimConfig& cfg,
                     std::span<const int> m_values) {
  std::vector<int> ms(m_values.begin(), m_values.end());
  std::sort(ms.begin(), ms.end());
  MSweepResult out;
  for (int M : ms) {
    InstanceGenConfig gen = gen_template;
    gen.num_agents = M;
    Rng rng(m_sweep_instance_seed(cfg.master_seed, M));
    const GeneratedInstance g = generate_random_instance(gen, rng);
    const AggregateResult agg = run_monte_carlo(g.instance, cfg);
    MSweepRow row;
    row.num_agents = M;
    row.mean_cost = agg.mean_cost;
    row.stddev_cost = agg.stddev_cost;
    row.accuracy = agg.accuracy;
    row.delta_min = derive_global_view(g.instance).delta_min;
    row.attempts = g.attempts;
    out.rows.push_back(row);
    if (!out.first_zero_cost_m && agg.mean_cost == 0.0) out.first_zero_cost_m = M;
  }
  std::vector<double> xs, ys;
  for (const auto& r : out.rows) {
    xs.push_back(r.num_agents);
    ys.push_back(r.mean_cost);
  }
  out.spearman_rho = spearman(xs, ys);
  return out;
}

namespace {

void mean_and_se(const std::vector<double>& v, double& mean, double& se) {
  mean = se = 0.0;
  if (v.empty()) return;
  const double n = static_cast<double>(v.size());
  mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

Lemma1Report lemma1_empirical_check(const LocalInstanceSet& inst,
                                    const SimConfig& cfg, int agent,
                                    std::int64_t refuse_from) {
  const int M = inst.num_agents();
  if (agent < 0 || agent >= M) throw ConfigError("lemma1 agent out of range");
  if (refuse_from <= cfg.kappa_steps() || refuse_from > cfg.horizon) {
    throw ConfigError("lemma1 refusal step must lie in the incentivizing phase");
  }
  SimConfig follow = cfg;
  SimConfig refuse = cfg;
  follow.behaviors.clear();
  refuse.behaviors.clear();
  for (int m = 0; m < M; ++m) {
    follow.behaviors.push_back(cfg.behavior_for(m));
    refuse.behaviors.push_back(cfg.behavior_for(m));
  }
  follow.behaviors[agent] = IncentiveBehavior::always_follow();
  refuse.behaviors[agent] = IncentiveBehavior::refuse_first_offer_after(refuse_from);

  std::vector<EpisodeTrace> follow_traces(cfg.runs), refuse_traces(cfg.runs);
  parallel_for(cfg.runs, cfg.threads, [&](std::int64_t i) {
    const std::uint64_t seed = episode_seed(cfg.master_seed, i);
    follow_traces[i] = run_episode(inst, follow, seed);
    refuse_traces[i] = run_episode(inst, refuse, seed);
  });

  Lemma1Report rep;
  rep.agent = agent;
  rep.refuse_from = refuse_from;
  rep.runs = cfg.runs;
  std::vector<double> f, r, d;
  double f_all = 0.0, r_all = 0.0;
  for (int i = 0; i < cfg.runs; ++i) {
    const double rf = follow_traces[i].reward_per_agent[agent];
    const double rr = refuse_traces[i].reward_per_agent[agent];
    f_all += rf;
    r_all += rr;
    if (refuse_traces[i].first_refusal[agent] < 0) {
      ++rep.runs_excluded;
      continue;
    }
    f.push_back(rf);
    r.push_back(rr);
    d.push_back(rf - rr);
    rep.max_bonus_after_refusal = std::max(
        rep.max_bonus_after_refusal, refuse_traces[i].bonus_after_refusal[agent]);
  }
  rep.runs_used = static_cast<int>(d.size());
  rep.mean_follow_all = f_all / cfg.runs;
  rep.mean_refuse_all = r_all / cfg.runs;
  mean_and_se(f, rep.mean_follow, rep.se_follow);
  mean_and_se(r, rep.mean_refuse, rep.se_refuse);
  mean_and_se(d, rep.mean_diff, rep.se_diff);
  return rep;
}

std::vector<double> theoretical_free_pulls(const LocalInstanceSet& inst,
                                           std::int64_t kappa) {
  const int M = inst.num_agents();
  const int K = inst.num_arms();
  const double cap = static_cast<double>(kappa);
  const double log_kappa = kappa > 0 ? std::log(cap) : 0.0;
  std::vector<double> out(static_cast<size_t>(M) * K, 0.0);
  for (int m = 0; m < M; ++m) {
    const LocalGaps g = local_gaps(inst, m);
    const double best = inst.mean(m, g.k_star);
    for (int k = 0; k < K; ++k) {
      const double kl = kl_bernoulli(inst.mean(m, k), best);
      const double v = kl == 0.0 ? cap : std::min(cap, log_kappa / kl);
      out[static_cast<size_t>(m) * K + k] = std::max(0.0, v);
    }
  }
  return out;
}

std::vector<FreePullRow> free_pull_report(const LocalInstanceSet& inst,
                                          double alpha, std::int64_t kappa,
                                          const AggregateResult& agg) {
  const int M = inst.num_agents();
  const int K = inst.num_arms();
  const auto reference = theoretical_free_pulls(inst, kappa);
  std::vector<FreePullRow> rows;
  for (int m = 0; m < M; ++m) {
    const LocalGaps g = local_gaps(inst, m);
    for (int k = 0; k < K; ++k) {
      const size_t c = static_cast<size_t>(m) * K + k;
      FreePullRow row;
      row.m = m;
      row.k = k;
      row.measured = c < agg.mean_free_pulls.size() ? agg.mean_free_pulls[c] : 0.0;
      row.kl_reference = reference[c];
      row.ucb_threshold =
          alpha >= 1.5 && kappa > 2
              ? ucb_pull_threshold(alpha, static_cast<double>(kappa), g.gaps[k])
              : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace oti
