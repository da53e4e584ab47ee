#ifndef OTI_RNG_H_
#define OTI_RNG_H_

#include <cstdint>
#include <random>

namespace oti {

// Seeded random stream. Every stochastic call site takes one of these
// explicitly; nothing in the library touches global random state.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  result_type operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  // Uniform on [0, 1) with 53 random bits. Bit-identical across platforms,
  // unlike std::uniform_real_distribution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  double gaussian(double mean, double stddev) {
    std::normal_distribution<double> dist(mean, stddev);
    return dist(engine_);
  }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Child seed for stream `index` with a purpose tag. Streams with different
// (index, tag) pairs are statistically independent for practical purposes.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index,
                          std::uint64_t tag = 0);

enum class StreamTag : std::uint64_t {
  kEpisode = 0x45,
  kReward = 0x52,
  kBehavior = 0x42,
  kGenerator = 0x47,
};

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index,
                                 StreamTag tag) {
  return derive_seed(parent, index, static_cast<std::uint64_t>(tag));
}

}  // namespace oti

#endif  // OTI_RNG_H_
