#include <gtest/gtest.h>

#include "ecorank/eval.hpp"
#include "ecorank/synth.hpp"
#include "test_util.hpp"

using namespace ecorank;

TEST(PerfectlyNested, SmallestCase) {
  EXPECT_EQ(testutil::to_grid(perfectly_nested(2, 2)), (oracle::Grid{{1, 1}, {1, 0}}));
}

TEST(PerfectlyNested, SingleRow) {
  const auto m = perfectly_nested(1, 5);
  EXPECT_EQ(m.countries(), 1);
  EXPECT_EQ(m.links(), 5);
}

TEST(PerfectlyNested, RowWidths) {
  const auto m = perfectly_nested(4, 8);
  EXPECT_EQ(m.diversification(), Eigen::Vector4i(8, 6, 4, 2));
  for (Index i = 0; i < 4; ++i)
    for (Index a = 0; a < 8; ++a) EXPECT_EQ(m(i, a), a < m.diversification()[i]);
  EXPECT_EQ(m.country_labels().front(), "C001");
  EXPECT_EQ(m.product_labels().back(), "P008");
}

TEST(PerfectlyNested, SupportsAreNestedAndNoIsolatedNodes) {
  for (Index n : {1, 3, 7, 20}) {
    for (Index k : {1, 4, 9, 40}) {
      const auto m = perfectly_nested(n, k);
      EXPECT_FALSE(drop_isolated(m).removed_any());
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          const auto& a = m.exports_of(i);
          const auto& b = m.exports_of(j);
          const bool a_in_b = std::includes(b.begin(), b.end(), a.begin(), a.end());
          const bool b_in_a = std::includes(a.begin(), a.end(), b.begin(), b.end());
          EXPECT_TRUE(a_in_b || b_in_a);
        }
        if (i > 0) EXPECT_LE(m.diversification()[i], m.diversification()[i - 1]);
      }
    }
  }
}

TEST(PerfectlyNested, StrictlyDecreasingWhenWidthsDistinct) {
  const auto m = perfectly_nested(20, 40);
  for (Index i = 1; i < m.countries(); ++i) EXPECT_LT(m.diversification()[i], m.diversification()[i - 1]);
}

TEST(PerfectlyNested, RejectsEmpty) {
  EXPECT_THROW(perfectly_nested(0, 5), InvalidArgument);
  EXPECT_THROW(perfectly_nested(5, 0), InvalidArgument);
}

TEST(NestedWithNoise, ZeroNoiseIsNested) { EXPECT_EQ(nested_with_noise(6, 9, 0.0, 3), perfectly_nested(6, 9)); }

TEST(NestedWithNoise, Reproducible) {
  EXPECT_EQ(nested_with_noise(20, 40, 0.05, 7), nested_with_noise(20, 40, 0.05, 7));
  EXPECT_FALSE(nested_with_noise(20, 40, 0.05, 7) == nested_with_noise(20, 40, 0.05, 8));
}

TEST(NestedWithNoise, FlipCount) {
  const auto base = perfectly_nested(20, 40);
  const auto noisy = nested_with_noise(20, 40, 0.05, 7);
  // Large nested instance keeps all nodes at this noise level, so the
  // difference count is exactly the number of flipped cells.
  ASSERT_EQ(noisy.countries(), 20);
  ASSERT_EQ(noisy.products(), 40);
  EXPECT_EQ((noisy.entries().array() != base.entries().array()).count(), 40);
  EXPECT_THROW(nested_with_noise(5, 5, 1.5, 0), InvalidArgument);
}

TEST(RandomMatrix, DensityAndReproducibility) {
  const auto m = random_matrix(100, 200, 0.1, 3);
  EXPECT_NEAR(static_cast<double>(m.links()) / (100.0 * 200.0), 0.1, 0.01);
  EXPECT_EQ(m, random_matrix(100, 200, 0.1, 3));
  EXPECT_FALSE(drop_isolated(m).removed_any());
  EXPECT_THROW(random_matrix(3, 3, 0.0, 1), EmptyNetwork);
  EXPECT_THROW(random_matrix(3, 3, 1.5, 1), InvalidArgument);
}
