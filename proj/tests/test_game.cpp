#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pointrat/game.hpp"
#include "pointrat/golden_section.hpp"
#include "pointrat/quadrature.hpp"

using namespace pointrat;

namespace {

double u(const GameSpec& g, std::size_t i, double theta, double c, double other) {
  const std::vector<double> o{other};
  return utility_eval(g, i, theta, c, o);
}

}  // namespace

TEST(Bertrand, UtilityExamples) {
  const GameSpec g = bertrand_game(2.0, 1.0, 4.0);
  EXPECT_DOUBLE_EQ(u(g, 0, 0.0, 1.0, 0.0), 1.0);
  const GameSpec h = bertrand_game(1.0, 1.0, 3.0);
  EXPECT_DOUBLE_EQ(u(h, 0, 0.0, 0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(u(h, 1, 0.5, 2.0, 1.0), 1.5 * 0.0);
  EXPECT_DOUBLE_EQ(u(h, 1, 0.5, 1.0, 1.0), 0.5 * 1.0);
}

TEST(Bertrand, FamilyAndMode) {
  const GameSpec g = bertrand_game(1.0, 1.0, 3.0);
  EXPECT_EQ(g.mode(), Mode::Complements);
  const BeliefFamily& fam = g.player(0).beliefs.at(0);
  EXPECT_DOUBLE_EQ(fam.max_member().values()[1], 2.0);
  EXPECT_DOUBLE_EQ(fam.max_member().breakpoints()[1], 0.5);
  const auto [top, bottom] = family_extremes(fam);
  EXPECT_EQ(top, fam.members()[0]);
  EXPECT_EQ(bottom, fam.members()[2]);
}

TEST(Bertrand, Preconditions) {
  EXPECT_THROW(bertrand_game(1.0, 1.0, 1.5), ArgumentError);
  EXPECT_THROW(bertrand_game(-1.0, 1.0, 3.0), ArgumentError);
  EXPECT_THROW(bertrand_game(1.0, 0.0, 3.0), ArgumentError);
}

TEST(Cournot, UtilityExamples) {
  const GameSpec g = cournot_game(10.0, 2.0, 1.0, 3.0, 8.0);
  EXPECT_EQ(g.mode(), Mode::Substitutes);
  EXPECT_DOUBLE_EQ(u(g, 0, 1.0, 2.0, 3.0), 6.0);
  for (double t : {1.0, 2.0, 3.0}) {
    for (double q2 : {0.0, 4.0, 8.0}) EXPECT_DOUBLE_EQ(u(g, 0, t, 0.0, q2), 0.0);
  }
}

TEST(Cournot, FamilyUpperHalf) {
  const GameSpec g = cournot_game(10.0, 2.0, 1.0, 3.0, 8.0);
  const Density& top = g.player(0).beliefs.at(0).max_member();
  EXPECT_DOUBLE_EQ(top.breakpoints()[1], 2.0);
  EXPECT_DOUBLE_EQ(top.values()[0], 0.0);
  EXPECT_DOUBLE_EQ(top.values()[1], 1.0);
}

TEST(Cournot, Preconditions) {
  EXPECT_NO_THROW(cournot_game(10.0, 2.0, 1.0, 3.0, 4.0));
  EXPECT_THROW(cournot_game(10.0, 2.0, 1.0, 3.0, 3.9), ArgumentError);
  EXPECT_THROW(cournot_game(2.0, 2.0, 1.0, 3.0, 8.0), ArgumentError);
  EXPECT_THROW(cournot_game(10.0, 2.0, 0.0, 3.0, 8.0), ArgumentError);
}

TEST(GameSpec, DomainChecks) {
  const GameSpec g = bertrand_game(1.0, 1.0, 3.0);
  EXPECT_THROW(u(g, 0, 1.5, 1.0, 1.0), DomainError);
  EXPECT_THROW(u(g, 0, 0.5, 3.5, 1.0), DomainError);
  EXPECT_THROW(u(g, 0, 0.5, 1.0, -0.1), DomainError);
}

TEST(GameSpec, RejectsConvexOwnChoice) {
  QuadraticOwnChoice q;
  q.quadratic = MultiAffine::constant({1.0, 0.0});
  q.linear = MultiAffine::constant({0.0, 1.0});
  q.constant = MultiAffine::constant({0.0, 0.0});
  std::vector<PlayerSpec> ps;
  for (int k = 0; k < 2; ++k) ps.push_back({{0.0, 1.0}, {0.0, 1.0}, {halves_family(0.0, 1.0)}, q});
  EXPECT_THROW(GameSpec(ps, Mode::Complements), AssumptionViolation);
}

TEST(GameSpec, RejectsMismatchedFamilyDomain) {
  const GameSpec b = bertrand_game(1.0, 1.0, 3.0);
  std::vector<PlayerSpec> ps = b.players();
  ps[0].beliefs[0] = halves_family(0.0, 2.0);
  EXPECT_THROW(GameSpec(ps, Mode::Complements), Error);
}

TEST(GameSpec, RejectsSinglePlayer) {
  const GameSpec b = bertrand_game(1.0, 1.0, 3.0);
  std::vector<PlayerSpec> ps{b.player(0)};
  ps[0].beliefs.clear();
  EXPECT_THROW(GameSpec(ps, Mode::Complements), Error);
}

TEST(Quadrature, SimpsonOnCells) {
  // Integral of x^3 against density 1 on [0, 1] and 3 on [1, 2].
  const std::vector<std::vector<QuadCell>> dims{{{0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}}};
  const double v = tensor_simpson(dims, [](std::span<const double> x, std::span<const std::size_t>) { return x[0] * x[0] * x[0]; });
  EXPECT_NEAR(v, 0.25 + 3.0 * 3.75, 1e-12);
}

TEST(Quadrature, TwoDimensionalProduct) {
  const std::vector<std::vector<QuadCell>> dims{{{0.0, 1.0, 1.0}}, {{1.0, 2.0, 1.0}}};
  const double v = tensor_simpson(dims, [](std::span<const double> x, std::span<const std::size_t>) { return std::exp(x[0]) / x[1]; });
  EXPECT_NEAR(v, (std::exp(1.0) - 1.0) * std::log(2.0), 1e-8);
}

TEST(GoldenSection, FindsInteriorAndEdgeMaxima) {
  const Maximum m = golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, 0.0, 1.0);
  EXPECT_NEAR(m.x, 0.3, 1e-8);
  const Maximum e = golden_section_max([](double x) { return x; }, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(e.x, 1.0);
}

TEST(GoldenSection, ProbeRejectsBimodal) {
  auto f = [](double x) { return std::cos(12.0 * x); };
  EXPECT_THROW(probe_unimodal(f, 0.0, 1.0), AssumptionViolation);
  EXPECT_NO_THROW(probe_unimodal([](double x) { return -x * x; }, -1.0, 1.0));
}
