#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fractalcalc/fractal_support.hpp"
#include "fractalcalc/staircase_coords.hpp"

namespace fc = fractalcalc;

namespace {

fc::Staircase cantor(int depth) {
  return fc::staircase_of_set(fc::build_set(fc::IfsSetSpec::triadic_cantor(), depth),
                              std::log(2.0) / std::log(3.0));
}

} // namespace

TEST(GridFunction, Construction) {
  EXPECT_THROW(fc::GridFunction(0.0, 0.0, {1.0, 2.0}), fc::GridError);
  EXPECT_THROW(fc::GridFunction(0.0, 0.1, {1.0}), fc::GridError);
  EXPECT_THROW(fc::GridFunction::sample([](double u) { return u; }, 1.0, 0.0, 10), fc::GridError);
  const auto g = fc::GridFunction::sample([](double u) { return u * u; }, 0.0, 2.0, 5);
  EXPECT_DOUBLE_EQ(g.du(), 0.5);
  EXPECT_DOUBLE_EQ(g.u_end(), 2.0);
  EXPECT_DOUBLE_EQ(g[4], 4.0);
  EXPECT_DOUBLE_EQ(g.at(0.25), 0.125);
  EXPECT_DOUBLE_EQ(g.at(-3.0), 0.0);
  EXPECT_DOUBLE_EQ(g.at(9.0), 4.0);
  EXPECT_THROW(g.with_samples({1.0, 2.0}), fc::GridError);
}

TEST(PseudoInverse, RoundTripOnSupport) {
  const auto s = cantor(8);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, s.max_value());
  for (int i = 0; i < 300; ++i) {
    const double v = u(rng);
    EXPECT_NEAR(s(fc::pseudo_inverse(s, v)), v, 1e-13);
  }
}

TEST(PseudoInverse, PlateausResolveLeft) {
  const auto s = cantor(4);
  const double mid = s(0.5);
  EXPECT_NEAR(fc::pseudo_inverse(s, mid), 1.0 / 3.0, 1e-14);
  EXPECT_THROW(fc::pseudo_inverse(s, -0.1), fc::RangeError);
  EXPECT_THROW(fc::pseudo_inverse(s, s.max_value() + 0.1), fc::RangeError);
}

TEST(ToGrid, ComposesWithStaircase) {
  const auto s = cantor(10);
  const auto g = fc::to_grid([&](double z) { return std::exp(s(z)); }, s, 257);
  for (std::size_t j = 0; j < g.size(); ++j)
    EXPECT_NEAR(g[j], std::exp(g.u(j)), 1e-12);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> z(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double x = z(rng);
    EXPECT_NEAR(fc::from_grid(g, s, x), std::exp(s(x)), 2e-5);
  }
  EXPECT_THROW(fc::from_grid(g, s, 1.5), fc::RangeError);
}
