#include "oti/principal.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oti/errors.h"

namespace oti {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_term(int num_arms, std::int64_t horizon, double delta,
                int num_agents, CbVariant variant) {
  const double base =
      std::log(static_cast<double>(num_arms) * static_cast<double>(horizon) /
               delta);
  if (variant == CbVariant::kSimplified) return base;
  const double loglog = std::log(base);
  if (!(base > 0.0) || !(loglog > 0.0)) {
    throw ConfigError(
        "full confidence bound needs ln ln(KT/delta) > 0; KT/delta is too "
        "small");
  }
  return base + 4.0 * num_agents * loglog;
}

}  // namespace

std::int64_t KappaRule::resolve(std::int64_t horizon) const {
  switch (kind) {
    case Kind::kHalf:
      return horizon / 2;
    case Kind::kQuarter:
      return horizon / 4;
    case Kind::kSqrt:
      return static_cast<std::int64_t>(
          std::ceil(std::sqrt(static_cast<double>(horizon))));
    case Kind::kExplicit:
      return steps;
  }
  return horizon / 2;
}

std::string KappaRule::to_string() const {
  switch (kind) {
    case Kind::kHalf:
      return "half";
    case Kind::kQuarter:
      return "quarter";
    case Kind::kSqrt:
      return "sqrt";
    case Kind::kExplicit:
      return std::to_string(steps);
  }
  return "half";
}

KappaRule KappaRule::parse(const std::string& text) {
  if (text == "half" || text == "T/2") return {Kind::kHalf, 0};
  if (text == "quarter" || text == "T/4") return {Kind::kQuarter, 0};
  if (text == "sqrt" || text == "sqrtT") return {Kind::kSqrt, 0};
  std::int64_t v = 0;
  try {
    size_t used = 0;
    v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError("kappa: expected half, quarter, sqrt or an integer, got '" +
                      text + "'");
  }
  if (v < 0) throw ConfigError("kappa must be non-negative");
  return {Kind::kExplicit, v};
}

double confidence_radius(std::span<const std::int64_t> pulls, int num_arms,
                         std::int64_t horizon, double delta,
                         CbVariant variant) {
  const int M = static_cast<int>(pulls.size());
  const double term = log_term(num_arms, horizon, delta, M, variant);
  double inv_sum = 0.0;
  for (std::int64_t n : pulls) {
    if (n == 0) return kInf;
    inv_sum += 1.0 / static_cast<double>(n);
  }
  return std::sqrt(inv_sum * term) / M;
}

std::vector<int> eliminate_arms(std::span<const int> active,
                                std::span<const double> means,
                                std::span<const double> cbs) {
  double best_lower = -kInf;
  for (int j : active) best_lower = std::max(best_lower, means[j] - cbs[j]);
  std::vector<int> kept;
  kept.reserve(active.size());
  for (int k : active) {
    if (means[k] + cbs[k] >= best_lower) kept.push_back(k);
  }
  if (kept.empty() && !active.empty()) {
    throw EmptyActiveSet("elimination removed every arm");
  }
  return kept;
}

std::optional<int> select_arm(std::span<const int> active,
                              std::span<const double> cbs) {
  if (active.size() <= 1) return std::nullopt;
  int arm = active.front();
  for (int k : active) {
    if (cbs[k] > cbs[arm] || (cbs[k] == cbs[arm] && k < arm)) arm = k;
  }
  return arm;
}

std::optional<int> select_agent(std::span<const std::int64_t> pulls_by_agent,
                                const std::vector<bool>& banned) {
  std::optional<int> agent;
  for (int m = 0; m < static_cast<int>(pulls_by_agent.size()); ++m) {
    if (banned[m]) continue;
    if (!agent || pulls_by_agent[m] < pulls_by_agent[*agent]) agent = m;
  }
  return agent;
}

Principal::Principal(const PrincipalParams& params) : params_(params) {
  if (params_.num_arms < 1) throw ConfigError("principal needs K >= 1");
  if (params_.num_agents < 1) throw ConfigError("principal needs M >= 1");
  if (params_.horizon < 1) throw ConfigError("horizon must be positive");
  if (!(params_.delta > 0.0 && params_.delta < 1.0)) {
    throw ConfigError("delta must lie in (0, 1)");
  }
  if (params_.kappa < 0 || params_.kappa > params_.horizon) {
    throw ConfigError("kappa must lie in [0, T]");
  }
  log_term_ = log_term(params_.num_arms, params_.horizon, params_.delta,
                       params_.num_agents, params_.cb_variant);
  const size_t cells =
      static_cast<size_t>(params_.num_arms) * params_.num_agents;
  n_.assign(cells, 0);
  mu_.assign(cells, 0.0);
  inv_n_.assign(cells, 0.0);
  paid_.assign(cells, 0);
  zero_count_.assign(params_.num_arms, params_.num_agents);
  active_.resize(params_.num_arms);
  std::iota(active_.begin(), active_.end(), 0);
  banned_.assign(params_.num_agents, false);
  offers_.assign(params_.num_agents, IncentiveOffer{});
  snap_means_.assign(params_.num_arms, 0.0);
  snap_bounds_.assign(params_.num_arms, kInf);
}

bool Principal::is_active(int k) const {
  for (int a : active_) {
    if (a == k) return true;
  }
  return false;
}

double Principal::aggregate_mean(int k) const {
  const double* mu = mu_.data() + cell(0, k);
  double sum = 0.0;
  for (int m = 0; m < params_.num_agents; ++m) sum += mu[m];
  return sum / params_.num_agents;
}

double Principal::confidence_bound(int k) const {
  if (zero_count_[k] > 0) return kInf;
  const double* inv = inv_n_.data() + cell(0, k);
  double inv_sum = 0.0;
  for (int m = 0; m < params_.num_agents; ++m) inv_sum += inv[m];
  return std::sqrt(inv_sum * log_term_) / params_.num_agents;
}

void Principal::refresh_snapshot() {
  if (snap_at_ == observed_) return;
  for (int k = 0; k < params_.num_arms; ++k) {
    snap_means_[k] = aggregate_mean(k);
    snap_bounds_[k] = confidence_bound(k);
  }
  snap_at_ = observed_;
}

std::span<const double> Principal::snapshot_means() {
  refresh_snapshot();
  return snap_means_;
}

std::span<const double> Principal::snapshot_bounds() {
  refresh_snapshot();
  return snap_bounds_;
}

void Principal::eliminate() {
  refresh_snapshot();
  active_ = eliminate_arms(active_, snap_means_, snap_bounds_);
}

std::optional<IncentiveTarget> Principal::select_incentive_target() const {
  if (active_.size() <= 1) return std::nullopt;
  std::vector<double> cbs(params_.num_arms, 0.0);
  for (int k : active_) cbs[k] = confidence_bound(k);
  const auto arm = select_arm(active_, cbs);
  if (!arm) return std::nullopt;
  const auto agent = select_agent(pulls_on_arm(*arm), banned_);
  if (!agent) return std::nullopt;
  return IncentiveTarget{*arm, *agent};
}

const std::vector<IncentiveOffer>& Principal::step(std::int64_t t) {
  if (t < 1 || t > params_.horizon) {
    throw ProtocolViolation("step outside [1, T]");
  }
  if (phase_ == Phase::kDone) throw ProtocolViolation("principal is finalized");
  t_ = t;
  if (outstanding_) offers_[outstanding_->agent] = IncentiveOffer{};
  outstanding_.reset();
  responded_ = false;

  if (t <= params_.kappa || !params_.incentivize) return offers_;
  phase_ = Phase::kIncentivizing;
  if (active_.size() <= 1) return offers_;

  eliminate();
  if (active_.size() == 1) {
    k_hat_ = active_.front();
    return offers_;
  }
  const auto arm = select_arm(active_, snap_bounds_);
  const auto agent = arm ? select_agent(pulls_on_arm(*arm), banned_)
                         : std::nullopt;
  if (arm && agent) {
    outstanding_ = IncentiveTarget{*arm, *agent};
    offers_[*agent].arm = *arm;
  }
  return offers_;
}

void Principal::observe(int m, int k, double reward) {
  if (phase_ == Phase::kDone) throw ProtocolViolation("principal is finalized");
  const size_t c = cell(m, k);
  const std::int64_t n = ++n_[c];
  if (n == 1) --zero_count_[k];
  mu_[c] += (reward - mu_[c]) / static_cast<double>(n);
  inv_n_[c] = 1.0 / static_cast<double>(n);
  ++observed_;
}

void Principal::record_response(int m, bool followed) {
  if (!outstanding_ || outstanding_->agent != m || responded_) {
    throw ProtocolViolation("no outstanding offer for agent " +
                            std::to_string(m + 1));
  }
  responded_ = true;
  log_.push_back({t_, m, outstanding_->arm, followed});
  if (followed) {
    ++paid_[cell(m, outstanding_->arm)];
    ++paid_total_;
  } else if (!params_.never_ban) {
    banned_[m] = true;
  }
}

int Principal::finalize() {
  if (!k_hat_) {
    int best = active_.front();
    for (int k : active_) {
      if (aggregate_mean(k) > aggregate_mean(best)) best = k;
    }
    k_hat_ = best;
  }
  phase_ = Phase::kDone;
  return *k_hat_;
}

}  // namespace oti
