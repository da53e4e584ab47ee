#include "oti/instance.h"

#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "oti/errors.h"

namespace oti {
namespace {

// Index of the maximum; second element reports whether it is unique.
std::pair<int, bool> unique_argmax(std::span<const double> v) {
  int best = 0;
  for (int k = 1; k < static_cast<int>(v.size()); ++k) {
    if (v[k] > v[best]) best = k;
  }
  for (int k = 0; k < static_cast<int>(v.size()); ++k) {
    if (k != best && v[best] - v[k] <= kTieTolerance) return {best, false};
  }
  return {best, true};
}

}  // namespace

LocalInstanceSet::LocalInstanceSet(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DomainError("instance needs at least one agent");
  num_agents_ = static_cast<int>(rows.size());
  num_arms_ = static_cast<int>(rows.front().size());
  if (num_arms_ < 2) throw DomainError("instance needs at least two arms");
  means_.reserve(static_cast<size_t>(num_agents_) * num_arms_);
  for (int m = 0; m < num_agents_; ++m) {
    const auto& r = rows[m];
    if (static_cast<int>(r.size()) != num_arms_) {
      throw DomainError("ragged instance: agent " + std::to_string(m + 1) +
                        " has " + std::to_string(r.size()) + " arms");
    }
    for (double mu : r) {
      if (!(mu >= 0.0 && mu <= 1.0)) {
        throw DomainError("mean reward outside [0, 1] for agent " +
                          std::to_string(m + 1));
      }
      means_.push_back(mu);
    }
    if (!unique_argmax(r).second) {
      throw NonUniqueOptimum("agent " + std::to_string(m + 1) +
                             " has a tied local optimum");
    }
  }
}

LocalInstanceSet LocalInstanceSet::toy() {
  return LocalInstanceSet({{0.89, 0.47, 0.01}, {0.01, 0.47, 0.89}});
}

std::vector<std::vector<double>> LocalInstanceSet::rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(num_agents_);
  for (int m = 0; m < num_agents_; ++m) {
    auto r = row(m);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

GlobalView derive_global_view(const LocalInstanceSet& inst) {
  const int K = inst.num_arms();
  const int M = inst.num_agents();
  GlobalView view;
  view.global_means.assign(K, 0.0);
  for (int k = 0; k < K; ++k) {
    double sum = 0.0;
    for (int m = 0; m < M; ++m) sum += inst.mean(m, k);
    view.global_means[k] = sum / M;
  }
  auto [best, unique] = unique_argmax(view.global_means);
  if (!unique) {
    throw NonUniqueOptimum("global optimum is attained by several arms");
  }
  LocalGaps g = gaps_of_row(view.global_means);
  view.k_star = best;
  view.gaps = std::move(g.gaps);
  view.delta_min = g.delta_min;
  return view;
}

LocalGaps gaps_of_row(std::span<const double> row) {
  const int K = static_cast<int>(row.size());
  LocalGaps out;
  out.k_star = unique_argmax(row).first;
  out.gaps.assign(K, 0.0);
  out.delta_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < K; ++k) {
    if (k == out.k_star) continue;
    out.gaps[k] = row[out.k_star] - row[k];
    out.delta_min = std::min(out.delta_min, out.gaps[k]);
  }
  out.gaps[out.k_star] = out.delta_min;
  return out;
}

LocalGaps local_gaps(const LocalInstanceSet& inst, int m) {
  if (m < 0 || m >= inst.num_agents()) {
    throw DomainError("agent index out of range");
  }
  return gaps_of_row(inst.row(m));
}

}  // namespace oti
