#ifndef OTI_ANALYSIS_H_
#define OTI_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oti/instance.h"
#include "oti/instance_gen.h"
#include "oti/sim.h"

namespace oti {

// Spontaneous-exploration threshold for alpha-UCB over Lambda steps:
// (sqrt(alpha) - sqrt(1.5))^2 ln(Lambda / 2) / (4 gap^2).
double ucb_pull_threshold(double alpha, double lambda, double gap);

struct UcbBoundReport {
  std::int64_t lambda = 0;
  double alpha = 0.0;
  std::vector<double> thresholds;
  int runs = 0;
  int violation_count = 0;
  double violation_rate = 0.0;
  // 2K / Lambda.
  double bound = 0.0;
  // bound + 3 binomial standard deviations at `runs`.
  double tolerance = 0.0;
  // Lambda / ln^2(Lambda) > 4K (alpha - 3/2)^2 / Delta_min^4.
  bool condition_ok = false;
  // Smallest observed pull count per arm across runs.
  std::vector<std::int64_t> min_pulls;

  bool pass() const { return violation_rate <= tolerance; }
};

// Standalone alpha-UCB on one local row, no principal. Throws
// AlphaOutOfRange when alpha < 3/2.
UcbBoundReport verify_ucb_lower_bound(std::span<const double> row,
                                      double alpha, std::int64_t lambda,
                                      int runs, std::uint64_t seed,
                                      int threads = 1);

// Fraction of episodes whose clean confidence event held throughout.
double coverage_check(std::span<const EpisodeTrace> traces);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  // Absent when the responses have zero variance.
  std::optional<double> r_squared;
};

// Ordinary least squares. Throws DegenerateSweep when fewer than two
// distinct x values are given.
LinearFit ols(std::span<const double> xs, std::span<const double> ys);

// Spearman rank correlation with average ranks for ties; 0 when either
// side is constant.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct DeltaSweepPoint {
  double delta = 0.0;
  double log_inv_delta = 0.0;
  double mean_cost = 0.0;
  double stddev_cost = 0.0;
  double accuracy = 0.0;
};

struct DeltaSweepResult {
  std::vector<DeltaSweepPoint> points;
  LinearFit fit;
  // False when every mean cost is equal and R^2 is undefined.
  bool applicable = false;
};

// Mean C(T) per delta and an OLS fit against ln(1/delta). Needs at least
// three distinct deltas.
DeltaSweepResult delta_sweep(const LocalInstanceSet& inst, const SimConfig& cfg,
                             std::span<const double> deltas);

struct MSweepRow {
  int num_agents = 0;
  double mean_cost = 0.0;
  double stddev_cost = 0.0;
  double accuracy = 0.0;
  double delta_min = 0.0;
  std::int64_t attempts = 0;
};

struct MSweepResult {
  std::vector<MSweepRow> rows;
  std::optional<int> first_zero_cost_m;
  double spearman_rho = 0.0;
};

// Seed of the generator draw for one M value of a sweep.
std::uint64_t m_sweep_instance_seed(std::uint64_t master_seed, int num_agents);

// One accepted instance per M (shared by all runs at that M).
MSweepResult m_sweep(const InstanceGenConfig& gen_template, const SimConfig& cfg,
                     std::span<const int> m_values);

struct Lemma1Report {
  int agent = 0;
  std::int64_t refuse_from = 0;
  int runs = 0;
  int runs_used = 0;
  int runs_excluded = 0;
  // Means and standard errors over the runs in which a refusal happened.
  double mean_follow = 0.0;
  double se_follow = 0.0;
  double mean_refuse = 0.0;
  double se_refuse = 0.0;
  double mean_diff = 0.0;
  double se_diff = 0.0;
  // Over every run, including excluded ones.
  double mean_follow_all = 0.0;
  double mean_refuse_all = 0.0;
  // Largest bonus income received after a refusal in any used run.
  std::int64_t max_bonus_after_refusal = 0;

  bool pass() const { return mean_follow >= mean_refuse - 2.0 * se_diff; }
};

// Matched-seed comparison of one agent that always follows against the
// same agent refusing the first offer it gets at or after `refuse_from`.
Lemma1Report lemma1_empirical_check(const LocalInstanceSet& inst,
                                    const SimConfig& cfg, int agent,
                                    std::int64_t refuse_from);

// Row-major M x K matrix of min{kappa, ln(kappa) / KL(mu_{k,m}, mu_{*,m})};
// the local optimum gets kappa.
std::vector<double> theoretical_free_pulls(const LocalInstanceSet& inst,
                                           std::int64_t kappa);

struct FreePullRow {
  int m = 0;
  int k = 0;
  double measured = 0.0;
  double kl_reference = 0.0;
  double ucb_threshold = 0.0;
};

// Side-by-side report of measured observing-phase pulls against the KL
// reference and the alpha-UCB threshold at Lambda = kappa. Report only.
std::vector<FreePullRow> free_pull_report(const LocalInstanceSet& inst,
                                          double alpha, std::int64_t kappa,
                                          const AggregateResult& agg);

}  // namespace oti

#endif  // OTI_ANALYSIS_H_
