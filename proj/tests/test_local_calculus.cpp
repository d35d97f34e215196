#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fractalcalc/local_calculus.hpp"

namespace fc = fractalcalc;

namespace {

const double kCantorAlpha = std::log(2.0) / std::log(3.0);

fc::Staircase cantor(int depth) {
  return fc::staircase_of_set(fc::build_set(fc::IfsSetSpec::triadic_cantor(), depth),
                              kCantorAlpha);
}

double max_err(const fc::GridFunction& g, double (*f)(double)) {
  double e = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    e = std::max(e, std::abs(g[j] - f(g.u(j))));
  return e;
}

} // namespace

TEST(FalphaDerivative, ExactOnQuadratics) {
  const auto g = fc::GridFunction::sample([](double u) { return 3.0 * u * u - u + 2.0; }, 0.0, 1.0,
                                          65);
  const auto d = fc::falpha_derivative(g);
  for (std::size_t j = 0; j < d.size(); ++j)
    EXPECT_NEAR(d[j], 6.0 * d.u(j) - 1.0, 1e-11);
  EXPECT_THROW(fc::falpha_derivative(fc::GridFunction(0.0, 1.0, {1.0, 2.0})), fc::GridError);
}

TEST(FalphaDerivative, SecondOrderConvergence) {
  double prev = INFINITY;
  for (std::size_t n : {65, 129, 257, 513}) {
    const auto g = fc::GridFunction::sample([](double u) { return std::sin(3.0 * u); }, 0.0, 1.0, n);
    const double e = max_err(fc::falpha_derivative(g), [](double u) { return 3.0 * std::cos(3.0 * u); });
    EXPECT_LT(e, prev / 3.5);
    prev = e;
  }
}

TEST(FalphaDerivative, VanishesOffTheSet) {
  const auto s = cantor(8);
  const auto set = fc::build_set(fc::IfsSetSpec::triadic_cantor(), 8);
  const auto g = fc::to_grid([&](double z) { return s(z) * s(z); }, s, 1025);
  const auto d = fc::falpha_derivative(g, s);
  EXPECT_EQ(fc::derivative_on_set(d, s, set, 0.5), 0.0);
  EXPECT_EQ(fc::derivative_on_set(d, s, set, 0.15), 0.0);
  EXPECT_NEAR(fc::derivative_on_set(d, s, set, 1.0), 2.0 * s.total(), 1e-9);
  const auto short_grid = fc::GridFunction::sample([](double u) { return u; }, 0.0, 0.5, 64);
  EXPECT_THROW(fc::falpha_derivative(short_grid, s), fc::GridError);
}

TEST(FalphaIntegral, PowersAndBounds) {
  const auto s = cantor(10);
  const auto g = fc::to_grid([&](double z) { return s(z) * s(z); }, s, 2049);
  const auto r = fc::falpha_integral(g, s, 0.0, 1.0);
  const double want = std::pow(s.total(), 3) / 3.0;
  EXPECT_NEAR(r.value, want, 1e-6);
  EXPECT_LE(r.lower, want);
  EXPECT_GE(r.upper, want);
  // sub-range across a gap
  const auto half = fc::falpha_integral(g, s, 0.2, 0.9);
  const double ua = s(0.2), ub = s(0.9);
  EXPECT_NEAR(half.value, (ub * ub * ub - ua * ua * ua) / 3.0, 1e-6);
  EXPECT_THROW(fc::falpha_integral(g, s, 0.7, 0.3), fc::DomainError);
}

TEST(FalphaIntegral, FundamentalTheorem) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = c(rng), b = c(rng);
    const auto g = fc::GridFunction::sample([&](double u) { return a * std::sin(u) + b * u; }, 0.0,
                                            2.0, 2001);
    const auto back = fc::cumulative_integral(fc::falpha_derivative(g));
    for (std::size_t j = 0; j < g.size(); j += 100)
      EXPECT_NEAR(back[j], g[j] - g[0], 1e-5);
  }
}

TEST(FalphaIntegral, Linearity) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  const auto f = fc::GridFunction::sample([](double u) { return std::exp(u); }, 0.0, 1.0, 333);
  const auto h = fc::GridFunction::sample([](double u) { return std::cos(5 * u); }, 0.0, 1.0, 333);
  for (int i = 0; i < 10; ++i) {
    const double a = c(rng), b = c(rng);
    std::vector<double> mix(f.size());
    for (std::size_t j = 0; j < f.size(); ++j)
      mix[j] = a * f[j] + b * h[j];
    const double lhs = fc::integrate_u(f.with_samples(mix), 0.1, 0.93).value;
    const double rhs = a * fc::integrate_u(f, 0.1, 0.93).value + b * fc::integrate_u(h, 0.1, 0.93).value;
    EXPECT_NEAR(lhs, rhs, 1e-13);
  }
}

TEST(LinearOde, ExampleSolutionOnCantorSet) {
  const auto s = cantor(10);
  const auto y = fc::solve_linear_fractal_ode(2.0, -4.0, 5.0, s, 4096);
  EXPECT_DOUBLE_EQ(y[0], 5.0);
  EXPECT_NEAR(y[y.size() - 1], 2.0 + 3.0 * std::exp(2.0 * s.total()), 1e-12);
  const auto d = fc::falpha_derivative(y, s);
  double res = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j)
    res = std::max(res, std::abs(d[j] - 2.0 * y[j] + 4.0));
  EXPECT_LT(res, 1e-3);
  EXPECT_THROW(fc::solve_linear_fractal_ode(0.0, 1.0, 1.0, s, 64), fc::DomainError);
}
