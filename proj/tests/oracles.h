#ifndef OTI_TESTS_ORACLES_H_
#define OTI_TESTS_ORACLES_H_

// Independent reference computations for the tests. Nothing here calls
// into the library under test.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oti::testing {

using HighPrecision = boost::multiprecision::cpp_dec_float_50;

inline HighPrecision hp(double x) { return HighPrecision(x); }

// Closed form evaluated in 50 decimal digits. Arguments are decimal
// literals so the oracle sees the exact values, not their binary rounding.
inline HighPrecision hp_kl_bernoulli(const char* p_text, const char* q_text) {
  using boost::multiprecision::log;
  const HighPrecision p(p_text), q(q_text);
  return p * log(p / q) + (1 - p) * log((1 - p) / (1 - q));
}

inline HighPrecision hp_confidence_radius(std::span<const std::int64_t> pulls,
                                          int num_arms, std::int64_t horizon,
                                          const char* delta_text, bool full) {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const HighPrecision delta(delta_text);
  const HighPrecision base = log(HighPrecision(num_arms) * horizon / delta);
  const int M = static_cast<int>(pulls.size());
  const HighPrecision term = full ? base + 4 * M * log(base) : base;
  HighPrecision inv_sum = 0;
  for (auto n : pulls) inv_sum += HighPrecision(1) / HighPrecision(n);
  return sqrt(inv_sum * term) / M;
}

inline HighPrecision hp_ucb_threshold(const char* alpha_text, std::int64_t lambda,
                                      const char* gap_text) {
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const HighPrecision alpha(alpha_text), gap(gap_text);
  const HighPrecision c = sqrt(alpha) - sqrt(HighPrecision("1.5"));
  return c * c * log(HighPrecision(lambda) / 2) / (4 * gap * gap);
}

// Textbook alpha-UCB written from the index formula: sums and counts,
// literal sqrt(alpha ln t / n), round-robin start, lowest index on ties.
class ReferenceUcb {
 public:
  ReferenceUcb(int arms, double alpha) : sums_(arms, 0.0), counts_(arms, 0), alpha_(alpha) {}

  int choose() const {
    const int K = static_cast<int>(sums_.size());
    for (int k = 0; k < K; ++k) {
      if (counts_[k] == 0) return k;
    }
    int best = 0;
    double best_index = -1.0;
    for (int k = 0; k < K; ++k) {
      const double index = sums_[k] / counts_[k] +
                           std::sqrt(alpha_ * std::log(static_cast<double>(t_ + 1)) / counts_[k]);
      if (index > best_index) {
        best_index = index;
        best = k;
      }
    }
    return best;
  }

  void update(int arm, double reward) {
    sums_[arm] += reward;
    counts_[arm] += 1;
    t_ += 1;
  }

  double mean(int arm) const { return counts_[arm] ? sums_[arm] / counts_[arm] : 0.0; }
  std::int64_t count(int arm) const { return counts_[arm]; }

 private:
  std::vector<double> sums_;
  std::vector<std::int64_t> counts_;
  double alpha_;
  std::int64_t t_ = 0;
};

}  // namespace oti::testing

#endif  // OTI_TESTS_ORACLES_H_
