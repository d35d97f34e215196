#pragma once

// Local Fα-derivative and Fα-integral, evaluated in the staircase coordinate,
// and the first-order linear fractal ODE  D y = a·y + b.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/fractal_support.hpp"
#include "fractalcalc/staircase_coords.hpp"

namespace fractalcalc {

/// dg/du by central differences; second-order one-sided at both ends.
inline GridFunction falpha_derivative(const GridFunction& g) {
  const std::size_t n = g.size();
  if (n < 3)
    throw GridError("falpha_derivative: need at least 3 samples");
  const double inv2h = 0.5 / g.du();
  std::vector<double> d(n);
  d[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) * inv2h;
  for (std::size_t j = 1; j + 1 < n; ++j)
    d[j] = (g[j + 1] - g[j - 1]) * inv2h;
  d[n - 1] = (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) * inv2h;
  return g.with_samples(std::move(d));
}

namespace detail {

inline void require_covers(const GridFunction& g, const Staircase& s, const char* who) {
  const double tol = 1e-9 * std::max(1.0, s.total());
  if (g.u0() > s.min_value() + tol || g.u_end() < s.max_value() - tol)
    throw GridError(std::string(who) + ": grid does not cover the staircase mass range");
}

} // namespace detail

/// Fα-derivative of g against the staircase S; g must span S's mass range.
inline GridFunction falpha_derivative(const GridFunction& g, const Staircase& s) {
  detail::require_covers(g, s, "falpha_derivative");
  return falpha_derivative(g);
}

/// Fα-derivative re-expanded to a physical point of a fractal set: the value
/// at S(z) on the support, zero in the gaps.
inline double derivative_on_set(const GridFunction& dg, const Staircase& s,
                                const FractalSetApprox& set, double z) {
  const auto it = std::upper_bound(set.intervals.begin(), set.intervals.end(), z,
                                   [](double x, const Interval& iv) { return x < iv.lo; });
  if (it == set.intervals.begin())
    return 0.0;
  const Interval& iv = *(it - 1);
  if (z > iv.hi())
    return 0.0;
  return from_grid(dg, s, z);
}

struct IntegralResult {
  double value; ///< trapezoidal Riemann–Stieltjes sum
  double lower; ///< Σ inf g · ΔS
  double upper; ///< Σ sup g · ΔS
};

/// ∫ g dS between staircase values ua <= ub, using the piecewise-linear
/// interpolant of the samples.
inline IntegralResult integrate_u(const GridFunction& g, double ua, double ub) {
  if (ua > ub)
    throw DomainError("falpha_integral: need a <= b");
  const double tol = 1e-9 * std::max(1.0, std::abs(g.u_end()));
  if (ua < g.u0() - tol || ub > g.u_end() + tol)
    throw DomainError("falpha_integral: range exceeds the grid");
  IntegralResult r{0.0, 0.0, 0.0};
  if (ua == ub)
    return r;
  detail::CompensatedSum val, lo, hi;
  const double h = g.du();
  const auto first = static_cast<std::size_t>(std::max(0.0, std::floor((ua - g.u0()) / h)));
  for (std::size_t k = first; k + 1 < g.size(); ++k) {
    const double a = std::max(ua, g.u(k));
    const double b = std::min(ub, g.u(k + 1));
    if (b <= a) {
      if (g.u(k) >= ub)
        break;
      continue;
    }
    const double ga = g.at(a);
    const double gb = g.at(b);
    val.add(0.5 * (ga + gb) * (b - a));
    lo.add(std::min(ga, gb) * (b - a));
    hi.add(std::max(ga, gb) * (b - a));
  }
  return {val.value(), lo.value(), hi.value()};
}

/// Fα-integral of g over [a,b] in physical coordinates.
inline IntegralResult falpha_integral(const GridFunction& g, const Staircase& s, double a,
                                      double b) {
  if (a > b || a < s.domain_lo() || b > s.domain_hi())
    throw DomainError("falpha_integral: need domain_lo <= a <= b <= domain_hi");
  return integrate_u(g, s(a), s(b));
}

/// Running trapezoid ∫_{u0}^{u_j} g du at every node.
inline GridFunction cumulative_integral(const GridFunction& g) {
  std::vector<double> out(g.size());
  detail::CompensatedSum sum;
  out[0] = 0.0;
  for (std::size_t j = 1; j < g.size(); ++j) {
    sum.add(0.5 * (g[j - 1] + g[j]) * g.du());
    out[j] = sum.value();
  }
  return g.with_samples(std::move(out));
}

/// Solution of D y = a·y + b, y(S = S_min) = y0, on n nodes of S's mass range:
/// y(u) = -b/a + (y0 + b/a)·exp(a·u).
inline GridFunction solve_linear_fractal_ode(double a, double b, double y0, const Staircase& s,
                                             std::size_t n) {
  if (a == 0.0)
    throw DomainError("solve_linear_fractal_ode: a = 0 is degenerate (solution y0 + b*u)");
  const double u0 = s.min_value();
  return GridFunction::sample(
      [&](double u) { return -b / a + (y0 + b / a) * std::exp(a * (u - u0)); }, u0,
      s.max_value(), n);
}

} // namespace fractalcalc
