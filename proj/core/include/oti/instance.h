#ifndef OTI_INSTANCE_H_
#define OTI_INSTANCE_H_

#include <span>
#include <vector>

namespace oti {

// Two means closer than this are considered tied.
inline constexpr double kTieTolerance = 1e-12;

// M x K matrix of local expected rewards, one row per agent.
//
// Construction checks that every entry lies in [0, 1] and that each row has
// a unique maximum. Uniqueness of the global optimum is checked by
// derive_global_view, so instances with a tied global game can still be
// built (and rejected downstream).
class LocalInstanceSet {
 public:
  explicit LocalInstanceSet(const std::vector<std::vector<double>>& rows);

  // Two agents, three arms: rows [0.89, 0.47, 0.01] and [0.01, 0.47, 0.89].
  static LocalInstanceSet toy();

  int num_agents() const { return num_agents_; }
  int num_arms() const { return num_arms_; }
  double mean(int m, int k) const { return means_[index(m, k)]; }
  std::span<const double> row(int m) const {
    return {means_.data() + index(m, 0), static_cast<size_t>(num_arms_)};
  }
  std::vector<std::vector<double>> rows() const;

  bool operator==(const LocalInstanceSet&) const = default;

 private:
  size_t index(int m, int k) const {
    return static_cast<size_t>(m) * num_arms_ + k;
  }

  int num_agents_ = 0;
  int num_arms_ = 0;
  std::vector<double> means_;
};

struct GlobalView {
  std::vector<double> global_means;
  int k_star = 0;
  // gaps[k] = mu_* - mu_k, except gaps[k_star] = delta_min.
  std::vector<double> gaps;
  double delta_min = 0.0;
};

// Throws NonUniqueOptimum when the best global mean is shared.
GlobalView derive_global_view(const LocalInstanceSet& inst);

struct LocalGaps {
  std::vector<double> gaps;
  int k_star = 0;
  double delta_min = 0.0;
};

LocalGaps local_gaps(const LocalInstanceSet& inst, int m);
LocalGaps gaps_of_row(std::span<const double> row);

}  // namespace oti

#endif  // OTI_INSTANCE_H_
