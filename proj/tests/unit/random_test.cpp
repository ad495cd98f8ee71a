#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "../support/oracles.hpp"
#include "nyopsim/random.hpp"

namespace nyopsim {
namespace {

TEST(DemandStream, ZeroSigmaIsConstant) {
  DemandStream s(123, 100.0, 0.0);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(s.next(), 100.0);
}

TEST(DemandStream, MomentsOfOneHundredThousandDraws) {
  DemandStream s(2024, 100.0, 10.0);
  std::vector<double> xs(100000);
  for (auto& x : xs) x = s.next();
  const double m = oracle::mean(xs);
  const double sd = std::sqrt(oracle::variance(xs));
  EXPECT_GE(m, 99.8);
  EXPECT_LE(m, 100.2);
  EXPECT_GE(sd, 9.8);
  EXPECT_LE(sd, 10.2);
}

TEST(DemandStream, DeterministicAndTruncated) {
  DemandStream a(77, 1.0, 10.0), b(77, 1.0, 10.0), c(78, 1.0, 10.0);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_GE(x, 0.0);
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a.draws(), 1000u);
}

TEST(StandardNormalQuantile, KnownPoints) {
  EXPECT_NEAR(standard_normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(standard_normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(standard_normal_quantile(0.025), -1.959963984540054, 1e-12);
  EXPECT_NEAR(standard_normal_quantile(0.8413447460685429), 1.0, 1e-12);
}

TEST(MixSeed, OrderSensitive) {
  EXPECT_NE(mix_seed(1, 2), mix_seed(2, 1));
  EXPECT_EQ(mix_seed(5, 9), mix_seed(5, 9));
}

}  // namespace
}  // namespace nyopsim
