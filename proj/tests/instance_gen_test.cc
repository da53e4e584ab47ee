#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oti/errors.h"
#include "oti/instance.h"
#include "oti/instance_gen.h"
#include "oti/rng.h"

namespace oti {
namespace {

TEST(BaseMeans, LinearOverDefaultRange) {
  const auto nu = base_means(InstanceGenConfig{});
  ASSERT_EQ(nu.size(), 30u);
  EXPECT_DOUBLE_EQ(nu.front(), 0.4);
  EXPECT_NEAR(nu.back(), 0.545, 1e-12);
  for (size_t k = 1; k < nu.size(); ++k) EXPECT_NEAR(nu[k] - nu[k - 1], 0.005, 1e-12);
}

TEST(TruncatedGaussian, StaysInUnitInterval) {
  Rng rng(8);
  for (double mean : {0.0, 0.02, 0.5, 0.98, 1.0}) {
    for (int i = 0; i < 20000; ++i) {
      const double x = truncated_gaussian01(mean, 0.3, rng);
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
    }
  }
}

TEST(GenerateRandomInstance, DefaultWindowIsRespected) {
  InstanceGenConfig cfg;
  cfg.num_agents = 50;
  Rng rng(derive_seed(77, 50, StreamTag::kGenerator));
  const auto gen = generate_random_instance(cfg, rng);
  EXPECT_GE(gen.attempts, 1);
  EXPECT_EQ(gen.instance.num_agents(), 50);
  EXPECT_EQ(gen.instance.num_arms(), 30);
  const auto view = derive_global_view(gen.instance);
  EXPECT_GE(view.delta_min, cfg.dmin_low);
  EXPECT_LE(view.delta_min, cfg.dmin_high);
  for (int m = 0; m < 50; ++m) {
    for (int k = 0; k < 30; ++k) {
      EXPECT_GE(gen.instance.mean(m, k), 0.0);
      EXPECT_LE(gen.instance.mean(m, k), 1.0);
    }
  }
}

TEST(GenerateRandomInstance, ZeroVarianceLimitRecoversBase) {
  InstanceGenConfig cfg;
  cfg.num_agents = 4;
  cfg.local_variance = 1e-16;
  Rng rng(1);
  const auto gen = generate_random_instance(cfg, rng);
  const auto nu = base_means(cfg);
  const auto view = derive_global_view(gen.instance);
  for (int k = 0; k < cfg.num_arms; ++k) EXPECT_NEAR(view.global_means[k], nu[k], 1e-6);
  EXPECT_EQ(view.k_star, cfg.num_arms - 1);
}

TEST(GenerateRandomInstance, DeterministicForSeed) {
  InstanceGenConfig cfg;
  cfg.num_agents = 10;
  Rng a(123), b(123);
  const auto x = generate_random_instance(cfg, a);
  const auto y = generate_random_instance(cfg, b);
  EXPECT_EQ(x.instance, y.instance);
  EXPECT_EQ(x.attempts, y.attempts);
}

TEST(GenerateRandomInstance, ImpossibleWindowExhausts) {
  InstanceGenConfig cfg;
  cfg.num_agents = 3;
  cfg.dmin_low = 0.5;
  cfg.dmin_high = 0.6;
  cfg.max_attempts = 20;
  Rng rng(4);
  EXPECT_THROW(generate_random_instance(cfg, rng), GenerationExhausted);
}

TEST(InstanceGenConfig, Validation) {
  auto bad = [](auto mutate) {
    InstanceGenConfig cfg;
    mutate(cfg);
    EXPECT_THROW(cfg.validate(), ConfigError);
  };
  bad([](InstanceGenConfig& c) { c.num_arms = 1; });
  bad([](InstanceGenConfig& c) { c.num_agents = 0; });
  bad([](InstanceGenConfig& c) { c.base_low = 0.6; });
  bad([](InstanceGenConfig& c) { c.local_variance = 0.0; });
  bad([](InstanceGenConfig& c) { c.dmin_low = 0.01; c.dmin_high = 0.001; });
  bad([](InstanceGenConfig& c) { c.max_attempts = 0; });
  EXPECT_NO_THROW(InstanceGenConfig{}.validate());
}

}  // namespace
}  // namespace oti
