#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "nlspike/rng.hpp"

using namespace nlspike;

TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out[0], 0x408f276du);
  EXPECT_EQ(out[1], 0x41c83b0eu);
  EXPECT_EQ(out[2], 0xa20bc7c6u);
  EXPECT_EQ(out[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out[0], 0xd16cfe09u);
  EXPECT_EQ(out[1], 0x94fdccebu);
  EXPECT_EQ(out[2], 0x5001e420u);
  EXPECT_EQ(out[3], 0x24126ea1u);
}

TEST(CounterRng, SameStreamSameSamples) {
  const CounterRng a({42, 7});
  const CounterRng b({42, 7});
  for (std::uint64_t i = 0; i < 100; ++i) EXPECT_EQ(a.normal(i, i * 3), b.normal(i, i * 3));
}

TEST(CounterRng, DistinctStreamsDiffer) {
  const CounterRng a({42, 7});
  const CounterRng b({42, 8});
  const CounterRng c({43, 7});
  int same_ab = 0;
  int same_ac = 0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    same_ab += a.block(i, 0) == b.block(i, 0);
    same_ac += a.block(i, 0) == c.block(i, 0);
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(CounterRng, UniformsInOpenInterval) {
  const CounterRng rng({1, 2});
  double sum = 0.0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    for (double u : rng.uniforms(i, 0)) {
      ASSERT_GT(u, 0.0);
      ASSERT_LT(u, 1.0);
      sum += u;
    }
  }
  EXPECT_NEAR(sum / (2.0 * count), 0.5, 3e-3);
}

TEST(CounterRng, NormalMoments) {
  const CounterRng rng({9, 9});
  const int count = 400000;
  double s1 = 0.0;
  double s2 = 0.0;
  double s4 = 0.0;
  for (int i = 0; i < count; ++i) {
    const double z = rng.normal(i, 1);
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / count, 0.0, 6e-3);
  EXPECT_NEAR(s2 / count, 1.0, 1e-2);
  EXPECT_NEAR(s4 / count, 3.0, 6e-2);
}

TEST(SeededStream, ChildrenAreDistinctAndStable) {
  const SeededStream root{5, 11};
  std::set<std::uint64_t> ids;
  for (std::uint64_t t = 0; t < 1000; ++t) ids.insert(root.child(t).stream_id);
  EXPECT_EQ(ids.size(), 1000u);
  EXPECT_EQ(root.child(3), root.child(3));
  EXPECT_EQ(root.child(3).seed, 5u);
}

TEST(HashCombine, OrderMatters) {
  EXPECT_NE(hash_combine(hash_combine(0, 1), 2), hash_combine(hash_combine(0, 2), 1));
}
