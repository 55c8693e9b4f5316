#include <gtest/gtest.h>

#include <vector>

#include "approach/rng.hpp"

namespace approach {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, SplitDoesNotAdvanceParent) {
  Rng a(42), b(42);
  (void)a.split(3);
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, SplitStreamsIgnoreSiblingDraws) {
  const Rng root(9);
  Rng first = root.split(1);
  for (int i = 0; i < 1000; ++i) (void)first.next_u64();
  Rng second = root.split(2), again = Rng(9).split(2);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(second.next_u64(), again.next_u64());
  EXPECT_NE(Rng(9).split(1).next_u64(), Rng(9).split(2).next_u64());
}

TEST(Rng, UniformInUnitInterval) {
  Rng rng(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Rng, BelowStaysInRange) {
  Rng rng(2);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) ++hits[rng.below(7)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(Rng, DiscreteFollowsProbabilities) {
  Rng rng(3);
  const std::vector<double> p = {0.2, 0.0, 0.8};
  std::vector<int> hits(3, 0);
  for (int i = 0; i < 50000; ++i) ++hits[rng.discrete(p)];
  EXPECT_EQ(hits[1], 0);
  EXPECT_NEAR(hits[0] / 50000.0, 0.2, 0.01);
}

TEST(Rng, BallAndSphereSamples) {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_NEAR(rng.unit_vector(3).norm(), 1.0, 1e-12);
    EXPECT_LE(rng.in_ball(4, 2.0).norm(), 2.0 + 1e-12);
  }
}

TEST(Rng, NormalMoments) {
  Rng rng(5);
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / 100000, 0.0, 0.02);
  EXPECT_NEAR(s2 / 100000, 1.0, 0.02);
}

}  // namespace
}  // namespace approach
