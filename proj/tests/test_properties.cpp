// Seeded property suites: 500 random games or samples per property.
#include <gtest/gtest.h>

#include "property_suites.hpp"

namespace {

constexpr std::size_t kSamples = 500;
constexpr std::uint64_t kSeed = 20240601;

}  // namespace

TEST(Property, RoundsAreNested) {
  const suites::Outcome o = suites::rounds_nested(kSamples, kSeed);
  EXPECT_TRUE(o.ok) << o.failure;
  EXPECT_EQ(o.samples, kSamples);
}

TEST(Property, ComplementsBoundsIncreaseInTheta) {
  const suites::Outcome o = suites::complements_monotone(kSamples, kSeed + 10);
  EXPECT_TRUE(o.ok) << o.failure;
  EXPECT_EQ(o.samples, kSamples);
}

TEST(Property, BestResponseMonotoneInOrderedInputs) {
  const suites::Outcome o = suites::best_response_monotone(kSamples, kSeed + 20);
  EXPECT_TRUE(o.ok) << o.failure;
  EXPECT_EQ(o.samples, kSamples);
}

TEST(Property, DifferencesOnBuiltInGames) {
  for (const auto& g : {pointrat::bertrand_game(1.0, 1.0, 3.0), pointrat::cournot_game(10.0, 2.0, 1.0, 3.0, 8.0)}) {
    const suites::Outcome o = suites::differences_hold(g, kSamples, kSeed + 30);
    EXPECT_TRUE(o.ok) << o.failure;
    EXPECT_EQ(o.samples, kSamples);
  }
}

TEST(Property, DifferencesOnRandomGames) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    const suites::Outcome o = suites::differences_hold(suites::random_game(kSeed + 40, k), 25, kSeed + k);
    EXPECT_TRUE(o.ok) << "game " << k << ": " << o.failure;
  }
}

TEST(Property, ExpectationDominance) {
  const suites::Outcome o = suites::expectation_dominance(200, 3, kSeed + 50);
  EXPECT_TRUE(o.ok) << o.failure;
  EXPECT_EQ(o.samples, 600u);
}
