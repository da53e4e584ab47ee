#ifndef OTI_PRINCIPAL_H_
#define OTI_PRINCIPAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oti/agent.h"

namespace oti {

enum class CbVariant {
  // Includes the 4M ln ln(KT/delta) term.
  kFull,
  // Drops it; the default for experiments.
  kSimplified,
};

enum class Phase { kObserving, kIncentivizing, kDone };

// Length of the observing phase as a function of the horizon.
struct KappaRule {
  enum class Kind { kHalf, kQuarter, kSqrt, kExplicit };
  Kind kind = Kind::kHalf;
  std::int64_t steps = 0;  // kExplicit only

  std::int64_t resolve(std::int64_t horizon) const;
  std::string to_string() const;
  // Accepts "half", "T/2", "quarter", "T/4", "sqrt", "sqrtT" or an integer.
  static KappaRule parse(const std::string& text);
};

struct PrincipalParams {
  std::int64_t horizon = 100000;
  int num_arms = 0;
  int num_agents = 0;
  double delta = 0.01;
  CbVariant cb_variant = CbVariant::kSimplified;
  std::int64_t kappa = 50000;
  bool never_ban = false;
  // False gives the purely passive principal: no elimination, no offers.
  bool incentivize = true;
};

struct IncentiveRecord {
  std::int64_t t = 0;
  int m = 0;
  int k = 0;
  bool followed = false;

  bool operator==(const IncentiveRecord&) const = default;
};

struct IncentiveTarget {
  int arm = 0;
  int agent = 0;

  bool operator==(const IncentiveTarget&) const = default;
};

// (1/M) sqrt(sum_m 1/N_m * (ln(KT/delta) [+ 4M ln ln(KT/delta)])); +inf if
// some N_m is zero. Throws ConfigError when the full variant is requested
// with ln ln(KT/delta) <= 0.
double confidence_radius(std::span<const std::int64_t> pulls, int num_arms,
                         std::int64_t horizon, double delta,
                         CbVariant variant);

// Elimination rule on one snapshot: keep k in `active` iff
// means[k] + cbs[k] >= max_{j in active} (means[j] - cbs[j]).
std::vector<int> eliminate_arms(std::span<const int> active,
                                std::span<const double> means,
                                std::span<const double> cbs);

// Active arm with the largest confidence bound (lowest index on ties).
// Empty when at most one arm is active.
std::optional<int> select_arm(std::span<const int> active,
                              std::span<const double> cbs);

// Non-banned agent with the fewest pulls on the chosen arm (lowest index on
// ties). Empty when every agent is banned.
std::optional<int> select_agent(std::span<const std::int64_t> pulls_by_agent,
                                const std::vector<bool>& banned);

// The observe-then-incentivize principal.
//
// Keeps only (N_{k,m}, mu_hat_{k,m}) per pair, so memory is O(KM) for any
// horizon. Steps t <= kappa are purely observational. Afterwards each step
// eliminates arms on the t-1 snapshot and offers one unit bonus on the
// (arm, agent) pair with the widest uncertainty. Refusing an offer bans the
// agent from all later offers unless never_ban is set.
class Principal {
 public:
  explicit Principal(const PrincipalParams& params);

  // Offers for step t (1-based), one entry per agent.
  const std::vector<IncentiveOffer>& step(std::int64_t t);

  void observe(int m, int k, double reward);

  // Must follow an offer to agent m in the current step.
  void record_response(int m, bool followed);

  // Identified arm; sets the phase to done.
  int finalize();

  double aggregate_mean(int k) const;
  double confidence_bound(int k) const;

  // Recompute S from the current record (elimination on one snapshot).
  void eliminate();
  std::optional<IncentiveTarget> select_incentive_target() const;

  // Aggregated means and bounds on the record as of the last completed
  // step. Refreshed lazily.
  std::span<const double> snapshot_means();
  std::span<const double> snapshot_bounds();

  std::int64_t pulls(int m, int k) const { return n_[cell(m, k)]; }
  double mean(int m, int k) const { return mu_[cell(m, k)]; }
  std::span<const std::int64_t> pulls_on_arm(int k) const {
    return {n_.data() + cell(0, k), static_cast<size_t>(params_.num_agents)};
  }
  const std::vector<int>& active() const { return active_; }
  bool is_active(int k) const;
  Phase phase() const { return phase_; }
  bool banned(int m) const { return banned_[m]; }
  const std::vector<bool>& banned_agents() const { return banned_; }
  const std::vector<IncentiveRecord>& incentive_log() const { return log_; }
  std::optional<int> k_hat() const { return k_hat_; }
  std::int64_t kappa() const { return params_.kappa; }
  const PrincipalParams& params() const { return params_; }
  std::int64_t steps_observed() const { return observed_ / params_.num_agents; }
  std::int64_t total_observations() const { return observed_; }
  std::int64_t incentives_paid() const { return paid_total_; }
  std::int64_t incentives_paid(int m, int k) const { return paid_[cell(m, k)]; }

 private:
  size_t cell(int m, int k) const {
    return static_cast<size_t>(k) * params_.num_agents + m;
  }
  void refresh_snapshot();

  PrincipalParams params_;
  double log_term_ = 0.0;
  // Arm-major storage: entries for one arm are contiguous.
  std::vector<std::int64_t> n_;
  std::vector<double> mu_;
  std::vector<double> inv_n_;
  std::vector<std::int64_t> zero_count_;
  std::vector<std::int64_t> paid_;
  std::int64_t paid_total_ = 0;
  std::int64_t observed_ = 0;

  std::vector<int> active_;
  Phase phase_ = Phase::kObserving;
  std::vector<bool> banned_;
  std::vector<IncentiveRecord> log_;
  std::optional<int> k_hat_;

  std::int64_t t_ = 0;
  std::vector<IncentiveOffer> offers_;
  std::optional<IncentiveTarget> outstanding_;
  bool responded_ = false;

  std::vector<double> snap_means_;
  std::vector<double> snap_bounds_;
  std::int64_t snap_at_ = -1;
};

}  // namespace oti

#endif  // OTI_PRINCIPAL_H_
