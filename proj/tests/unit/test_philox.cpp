#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bbibp/philox.hpp"

using namespace bbibp;

// Known-answer vectors of the Random123 distribution for philox4x32-10.
TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  EXPECT_EQ(Philox4x32::apply(C{0, 0, 0, 0}, K{0, 0}),
            (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::apply(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              K{0xffffffffu, 0xffffffffu}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::apply(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              K{0xa4093822u, 0x299f31d0u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(PathStream, DeterministicAndDistinct) {
  PathStream a(7, 3);
  PathStream b(7, 3);
  PathStream c(7, 4);
  PathStream d(8, 3);
  std::set<double> seen;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    EXPECT_NE(x, c.normal());
    EXPECT_NE(x, d.normal());
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(PathStream, MomentsOfNormals) {
  PathStream s(123, 0);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    m1 += x;
    m2 += x * x;
  }
  m1 /= n;
  m2 /= n;
  EXPECT_NEAR(m1, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 4.0 * std::sqrt(2.0 / n));
}

TEST(UniformOpen, NeverHitsEndpoints) {
  EXPECT_GT(uniform_open(0), 0.0);
  EXPECT_LT(uniform_open(~std::uint64_t{0}), 1.0);
  EXPECT_NEAR(uniform_open(std::uint64_t{1} << 63), 0.5, 1e-15);
}
