#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "oti/errors.h"
#include "oti/principal.h"

namespace oti {
namespace {

using testing::HighPrecision;
constexpr double kInf = std::numeric_limits<double>::infinity();

PrincipalParams params(int M, int K, std::int64_t T = 100000, std::int64_t kappa = 50000) {
  PrincipalParams p;
  p.horizon = T;
  p.num_arms = K;
  p.num_agents = M;
  p.kappa = kappa;
  return p;
}

TEST(Principal, ObserveTracksCountsAndMeans) {
  Principal p(params(2, 3));
  p.observe(0, 1, 1.0);
  EXPECT_EQ(p.pulls(0, 1), 1);
  EXPECT_EQ(p.mean(0, 1), 1.0);
  p.observe(0, 1, 0.0);
  EXPECT_EQ(p.pulls(0, 1), 2);
  EXPECT_EQ(p.mean(0, 1), 0.5);
  EXPECT_EQ(p.pulls(1, 1), 0);
  EXPECT_EQ(p.total_observations(), 2);
}

TEST(Principal, AggregateMeanAveragesAgents) {
  Principal p(params(2, 2));
  for (int i = 0; i < 10; ++i) p.observe(0, 0, i == 0 ? 0.0 : 1.0);
  for (int i = 0; i < 10; ++i) p.observe(1, 0, i == 0 ? 1.0 : 0.0);
  EXPECT_NEAR(p.mean(0, 0), 0.9, 1e-15);
  EXPECT_NEAR(p.mean(1, 0), 0.1, 1e-15);
  EXPECT_NEAR(p.aggregate_mean(0), 0.5, 1e-15);
}

const std::vector<std::int64_t> kHundredEach{100, 100};

TEST(ConfidenceRadius, SimplifiedMatchesOracle) {
  const HighPrecision frozen("0.2933999654024044826243870878825168334047");
  const auto oracle = testing::hp_confidence_radius(kHundredEach, 3, 100000, "0.01", false);
  EXPECT_LT(abs(oracle - frozen), HighPrecision("1e-35"));
  const double cb = confidence_radius(kHundredEach, 3, 100000, 0.01, CbVariant::kSimplified);
  EXPECT_NEAR(cb, frozen.convert_to<double>(), 1e-15);
}

TEST(ConfidenceRadius, FullMatchesOracle) {
  const HighPrecision frozen("0.4471227480956753165651523038990665793825");
  const auto oracle = testing::hp_confidence_radius(kHundredEach, 3, 100000, "0.01", true);
  EXPECT_LT(abs(oracle - frozen), HighPrecision("1e-35"));
  const double cb = confidence_radius(kHundredEach, 3, 100000, 0.01, CbVariant::kFull);
  EXPECT_NEAR(cb, frozen.convert_to<double>(), 1e-15);
}

TEST(ConfidenceRadius, InfiniteWhileAnyPairIsUnobserved) {
  const std::vector<std::int64_t> pulls{0, 100};
  EXPECT_EQ(confidence_radius(pulls, 3, 100000, 0.01, CbVariant::kSimplified), kInf);
}

TEST(ConfidenceRadius, ShrinksAsInverseSqrtOfPulls) {
  const std::vector<std::int64_t> doubled{200, 200};
  const double a = confidence_radius(kHundredEach, 3, 100000, 0.01, CbVariant::kSimplified);
  const double b = confidence_radius(doubled, 3, 100000, 0.01, CbVariant::kSimplified);
  EXPECT_NEAR(b, a / std::sqrt(2.0), 1e-15);
}

TEST(ConfidenceRadius, FullVariantNeedsPositiveLogLog) {
  const std::vector<std::int64_t> one{1};
  EXPECT_THROW(confidence_radius(one, 1, 2, 0.9, CbVariant::kFull), ConfigError);
  EXPECT_NO_THROW(confidence_radius(one, 1, 2, 0.9, CbVariant::kSimplified));
  auto p = params(1, 1, 2, 1);
  p.delta = 0.9;
  p.cb_variant = CbVariant::kFull;
  EXPECT_THROW(Principal{p}, ConfigError);
}

TEST(Principal, ConfidenceBoundMatchesFreeFunction) {
  Principal p(params(2, 3));
  for (int i = 0; i < 100; ++i) {
    p.observe(0, 0, 1.0);
    p.observe(1, 0, 0.0);
  }
  EXPECT_EQ(p.confidence_bound(0),
            confidence_radius(kHundredEach, 3, 100000, 0.01, CbVariant::kSimplified));
  EXPECT_EQ(p.confidence_bound(1), kInf);
}

TEST(EliminateArms, SeparatedArmIsDropped) {
  const std::vector<int> active{0, 1};
  const std::vector<double> means{0.6, 0.3}, cbs{0.05, 0.05};
  EXPECT_EQ(eliminate_arms(active, means, cbs), (std::vector<int>{0}));
}

TEST(EliminateArms, OverlappingArmsSurvive) {
  const std::vector<int> active{0, 1};
  const std::vector<double> means{0.6, 0.55}, cbs{0.05, 0.05};
  EXPECT_EQ(eliminate_arms(active, means, cbs), (std::vector<int>{0, 1}));
}

TEST(EliminateArms, InfiniteBoundIsRetained) {
  const std::vector<int> active{0, 1, 2};
  const std::vector<double> means{0.9, 0.0, 0.1}, cbs{0.01, kInf, 0.01};
  EXPECT_EQ(eliminate_arms(active, means, cbs), (std::vector<int>{0, 1}));
}

TEST(EliminateArms, RespectsActiveSubset) {
  const std::vector<int> active{1, 2};
  // Arm 0 would eliminate everything but is no longer active.
  const std::vector<double> means{1.0, 0.5, 0.45}, cbs{0.0, 0.05, 0.05};
  EXPECT_EQ(eliminate_arms(active, means, cbs), (std::vector<int>{1, 2}));
}

TEST(SelectTarget, WidestArmThenLeastObservedAgent) {
  const std::vector<int> active{0, 1};
  const std::vector<double> cbs{0.3, 0.1};
  EXPECT_EQ(select_arm(active, cbs), 0);
  const std::vector<std::int64_t> pulls{5, 2};
  EXPECT_EQ(select_agent(pulls, {false, false}), 1);
}

TEST(SelectTarget, TiesGoToLowestIndex) {
  const std::vector<int> active{0, 1, 2};
  const std::vector<double> cbs{0.2, 0.2, 0.1};
  EXPECT_EQ(select_arm(active, cbs), 0);
  const std::vector<std::int64_t> pulls{3, 3};
  EXPECT_EQ(select_agent(pulls, {false, false}), 0);
}

TEST(SelectTarget, SkipsBannedAgents) {
  const std::vector<std::int64_t> pulls{0, 7};
  EXPECT_EQ(select_agent(pulls, {true, false}), 1);
  EXPECT_EQ(select_agent(pulls, {true, true}), std::nullopt);
}

TEST(SelectTarget, NothingToDoWithOneActiveArm) {
  const std::vector<int> active{2};
  const std::vector<double> cbs{0.2, 0.2, 0.1};
  EXPECT_EQ(select_arm(active, cbs), std::nullopt);
}

TEST(Principal, NoOffersDuringObservingPhase) {
  Principal p(params(2, 3, 100, 50));
  for (std::int64_t t = 1; t <= 50; ++t) {
    for (const auto& offer : p.step(t)) EXPECT_FALSE(offer.present());
    EXPECT_EQ(p.phase(), Phase::kObserving);
    for (int m = 0; m < 2; ++m) p.observe(m, static_cast<int>(t % 3), 0.5);
  }
  const auto& offers = p.step(51);
  int present = 0;
  for (const auto& offer : offers) present += offer.present();
  EXPECT_EQ(present, 1);
  EXPECT_EQ(p.phase(), Phase::kIncentivizing);
}

TEST(Principal, RefusalBansAgentForever) {
  Principal p(params(2, 3, 200, 0));
  // Nothing observed: every bound is infinite, the target is (arm 0, agent 0).
  const auto& first = p.step(1);
  ASSERT_TRUE(first[0].present());
  EXPECT_EQ(*first[0].arm, 0);
  p.observe(0, 2, 0.0);
  p.record_response(0, false);
  p.observe(1, 2, 0.0);
  EXPECT_TRUE(p.banned(0));
  for (std::int64_t t = 2; t <= 50; ++t) {
    const auto& offers = p.step(t);
    EXPECT_FALSE(offers[0].present());
    ASSERT_TRUE(offers[1].present());
    p.observe(0, 0, 0.0);
    p.observe(1, *offers[1].arm, 1.0);
    p.record_response(1, true);
  }
  EXPECT_EQ(p.incentive_log().front(), (IncentiveRecord{1, 0, 0, false}));
  EXPECT_EQ(p.incentives_paid(), 49);
  EXPECT_EQ(p.incentives_paid(0, 0), 0);
}

TEST(Principal, NeverBanKeepsAgentsEligible) {
  auto prm = params(1, 2, 100, 0);
  prm.never_ban = true;
  Principal p(prm);
  for (std::int64_t t = 1; t <= 5; ++t) {
    const auto& offers = p.step(t);
    ASSERT_TRUE(offers[0].present());
    p.observe(0, 1 - *offers[0].arm, 0.0);
    p.record_response(0, false);
  }
  EXPECT_FALSE(p.banned(0));
  EXPECT_EQ(p.incentives_paid(), 0);
  EXPECT_EQ(p.incentive_log().size(), 5u);
}

TEST(Principal, ResponseWithoutOfferIsAProtocolViolation) {
  Principal p(params(2, 3, 100, 50));
  p.step(1);
  EXPECT_THROW(p.record_response(0, true), ProtocolViolation);

  Principal q(params(2, 3, 100, 0));
  q.step(1);
  q.record_response(0, true);
  EXPECT_THROW(q.record_response(0, true), ProtocolViolation);
  EXPECT_THROW(q.record_response(1, true), ProtocolViolation);
}

TEST(Principal, SingleArmNeedsNoOffers) {
  Principal p(params(2, 1, 10, 0));
  for (std::int64_t t = 1; t <= 10; ++t) {
    for (const auto& offer : p.step(t)) EXPECT_FALSE(offer.present());
    p.observe(0, 0, 1.0);
    p.observe(1, 0, 0.0);
  }
  EXPECT_EQ(p.active(), (std::vector<int>{0}));
  EXPECT_EQ(p.finalize(), 0);
}

void feed(Principal& p, int k, int ones, int total) {
  for (int i = 0; i < total; ++i) p.observe(0, k, i < ones ? 1.0 : 0.0);
}

TEST(Principal, FinalizePicksLargestMeanAmongSurvivors) {
  Principal p(params(1, 3, 100000, 0));
  feed(p, 0, 4500, 10000);
  feed(p, 1, 0, 10000);
  feed(p, 2, 4600, 10000);
  p.step(1);
  EXPECT_EQ(p.active(), (std::vector<int>{0, 2}));
  EXPECT_FALSE(p.k_hat().has_value());
  EXPECT_EQ(p.finalize(), 2);
  EXPECT_EQ(p.phase(), Phase::kDone);
}

TEST(Principal, FinalizeTieGoesToLowestIndex) {
  Principal p(params(1, 3, 100000, 0));
  feed(p, 0, 4600, 10000);
  feed(p, 1, 0, 10000);
  feed(p, 2, 4600, 10000);
  p.step(1);
  EXPECT_EQ(p.finalize(), 0);
}

TEST(Principal, FinalizeReturnsSoleSurvivor) {
  Principal p(params(1, 2, 100000, 0));
  feed(p, 0, 9000, 10000);
  feed(p, 1, 1000, 10000);
  for (const auto& offer : p.step(1)) EXPECT_FALSE(offer.present());
  EXPECT_EQ(p.k_hat(), 0);
  EXPECT_EQ(p.finalize(), 0);
  EXPECT_THROW(p.step(2), ProtocolViolation);
}

TEST(KappaRule, ResolveAndParse) {
  EXPECT_EQ(KappaRule::parse("half").resolve(100000), 50000);
  EXPECT_EQ(KappaRule::parse("T/4").resolve(100000), 25000);
  EXPECT_EQ(KappaRule::parse("sqrt").resolve(100000), 317);
  EXPECT_EQ(KappaRule::parse("1234").resolve(100000), 1234);
  EXPECT_THROW(KappaRule::parse("sometimes"), ConfigError);
}

}  // namespace
}  // namespace oti
