#pragma once

// Riemann–Liouville and Caputo Fα-operators in the staircase coordinate.
//
// Left-sided operators integrate from the first grid node; right-sided ones
// are evaluated as the left-sided operator of the reflected samples, which is
// where the (-D)^n of the right-sided definitions ends up.
//
// The fractional integral uses product-trapezoidal quadrature: the samples are
// interpolated linearly and the kernel (u-w)^(β-1) is integrated exactly
// against each hat function, so the weakly singular kernel costs no order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/local_calculus.hpp"
#include "fractalcalc/special_functions.hpp"
#include "fractalcalc/staircase_coords.hpp"

namespace fractalcalc {

/// Operator order β on a support of order α, with the integer n fixed by
/// (n-1)·α <= β < n·α.
struct FracOrder {
  double alpha;
  double beta;
  int n;

  static FracOrder make(double alpha, double beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw OrderError("FracOrder: alpha must be positive");
    if (!(beta >= 0.0) || !std::isfinite(beta))
      throw OrderError("FracOrder: beta must be >= 0");
    const int n = static_cast<int>(std::floor(beta / alpha)) + 1;
    return {alpha, beta, n};
  }

  void validate() const {
    if (!(alpha > 0.0) || !(beta >= 0.0) || n < 1)
      throw OrderError("FracOrder: invalid fields");
    if (!((n - 1) * alpha <= beta && beta < n * alpha))
      throw OrderError("FracOrder: need (n-1)*alpha <= beta < n*alpha");
  }
};

enum class Side { Left, Right };

namespace detail {

// (1+x)^p + (1-x)^p - 2 without cancellation for small x.
inline double second_difference_factor(double p, double x) {
  return std::expm1(p * std::log1p(x)) + std::expm1(p * std::log1p(-x));
}

// Product-trapezoid weights for I^order on a uniform grid, excluding h^order/Γ(order+2):
//   lag[k] = (k+1)^p - 2k^p + (k-1)^p  (k >= 1),   p = order + 1
//   first[j] = (j-1)^p - (j-1-order)·j^order        (weight of the first sample)
struct ProductWeights {
  std::vector<double> lag;
  std::vector<double> first;

  ProductWeights(double order, std::size_t n) : lag(n, 0.0), first(n, 0.0) {
    const double p = order + 1.0;
    lag[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
      const double kd = static_cast<double>(k);
      lag[k] = std::pow(kd, p) * second_difference_factor(p, 1.0 / kd);
    }
    for (std::size_t j = 1; j < n; ++j) {
      // equals j^p·[(1 - 1/j)^p - 1 + p/j]
      const double jd = static_cast<double>(j);
      const double x = 1.0 / jd;
      first[j] = std::pow(jd, p) * (std::expm1(p * std::log1p(-x)) + p * x);
    }
  }
};

inline std::vector<double> left_rl_integral(const std::vector<double>& g, double h,
                                            double order) {
  const std::size_t n = g.size();
  const ProductWeights w(order, n);
  const double scale = std::pow(h, order) / gamma(order + 2.0);
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    double acc = w.first[j] * g[0] + g[j];
    const double* lag = w.lag.data();
    for (std::size_t i = 1; i < j; ++i)
      acc += lag[j - i] * g[i];
    out[j] = scale * acc;
  }
  return out;
}

// d/du of the integral of order γ. The first sample is split off and handled
// in closed form, g_0·u^(γ-1)/Γ(γ); the rest, which vanishes at u_0, goes
// through the product-trapezoid integral and a central difference.
inline std::vector<double> left_derivative_of_integral(const std::vector<double>& g, double h,
                                                       double order) {
  const std::size_t n = g.size();
  std::vector<double> rest(n);
  for (std::size_t i = 0; i < n; ++i)
    rest[i] = g[i] - g[0];
  const GridFunction integral(0.0, h, left_rl_integral(rest, h, order));
  std::vector<double> out = falpha_derivative(integral).samples();
  const double head = rgamma(order);
  if (g[0] != 0.0 && order == 1.0)
    out[0] += g[0];
  else if (g[0] != 0.0 && order < 1.0)
    out[0] = std::copysign(std::numeric_limits<double>::infinity(), g[0]);
  for (std::size_t j = 1; j < n; ++j)
    out[j] += g[0] * std::pow(static_cast<double>(j) * h, order - 1.0) * head;
  return out;
}

inline std::vector<double> reversed(std::vector<double> v) {
  std::reverse(v.begin(), v.end());
  return v;
}

template <class Op>
GridFunction apply_sided(const GridFunction& g, Side side, Op&& op) {
  if (side == Side::Left)
    return g.with_samples(op(g.samples()));
  return g.with_samples(reversed(op(reversed(g.samples()))));
}

inline void check_grid(const GridFunction& g, std::size_t min_samples, const char* who) {
  if (g.size() < min_samples)
    throw GridError(std::string(who) + ": too few samples");
}

} // namespace detail

/// Fractional integral of positive order from the first grid node (Left) or
/// toward the last node (Right).
inline GridFunction rl_integral(const GridFunction& g, double order, Side side = Side::Left) {
  if (!(order > 0.0))
    throw OrderError("rl_integral: order must be positive");
  detail::check_grid(g, 2, "rl_integral");
  return detail::apply_sided(g, side, [&](const std::vector<double>& s) {
    return detail::left_rl_integral(s, g.du(), order);
  });
}

inline GridFunction rl_integral(const GridFunction& g, const FracOrder& ord,
                                Side side = Side::Left) {
  if (!(ord.beta > 0.0))
    throw OrderError("rl_integral: beta must be positive");
  return rl_integral(g, ord.beta, side);
}

/// Riemann–Liouville derivative: n Fα-derivatives after the integral of order
/// n-β. The endpoint term g(u_0)·u^(n-β-1)/Γ(n-β) is carried in closed form
/// through the first derivative. Samples that depend on a singular endpoint
/// are NaN.
inline GridFunction rl_derivative(const GridFunction& g, const FracOrder& ord,
                                  Side side = Side::Left) {
  ord.validate();
  const double inner = ord.n - ord.beta;
  if (!(inner > 0.0))
    throw SingularGridError("rl_derivative: kernel exponent n-beta-1 <= -1");
  detail::check_grid(g, static_cast<std::size_t>(ord.n) + 2, "rl_derivative");
  return detail::apply_sided(g, side, [&](const std::vector<double>& s) {
    GridFunction d(0.0, g.du(), detail::left_derivative_of_integral(s, g.du(), inner));
    const bool singular = !std::isfinite(d[0]);
    for (int k = 1; k < ord.n; ++k)
      d = falpha_derivative(d);
    auto out = d.samples();
    if (singular)
      for (int k = 0; k < ord.n && k < static_cast<int>(out.size()); ++k)
        out[static_cast<std::size_t>(k)] = std::numeric_limits<double>::quiet_NaN();
    return out;
  });
}

/// Caputo derivative: n Fα-derivatives first, then the integral of order n-β.
inline GridFunction caputo_derivative(const GridFunction& g, const FracOrder& ord,
                                      Side side = Side::Left) {
  ord.validate();
  const double inner = ord.n - ord.beta;
  if (!(inner > 0.0))
    throw SingularGridError("caputo_derivative: kernel exponent n-beta-1 <= -1");
  detail::check_grid(g, static_cast<std::size_t>(ord.n) + 2, "caputo_derivative");
  return detail::apply_sided(g, side, [&](const std::vector<double>& s) {
    GridFunction d(0.0, g.du(), s);
    for (int k = 0; k < ord.n; ++k)
      d = falpha_derivative(d);
    return detail::left_rl_integral(d.samples(), g.du(), inner);
  });
}

// ---------------------------------------------------------------------------
// Exact images of power terms
// ---------------------------------------------------------------------------

/// c·(u - origin)^p
struct PowerTerm {
  double coef;
  double power;
};

/// Finite sum of power terms about a common origin. Used to carry the
/// singular leading part of a function whose operator images are known in
/// closed form, while the smooth remainder lives on a grid.
struct PowerSum {
  double origin = 0.0;
  std::vector<PowerTerm> terms;

  double operator()(double u) const {
    const double x = u - origin;
    double s = 0.0;
    for (const auto& t : terms)
      s += t.coef * std::pow(x, t.power);
    return s;
  }
};

/// I^β x^p = Γ(p+1)/Γ(p+β+1) x^(p+β), p > -1.
inline PowerSum rl_integral(const PowerSum& f, double order) {
  PowerSum out{f.origin, {}};
  for (const auto& t : f.terms) {
    if (!(t.power > -1.0))
      throw DomainError("rl_integral(PowerSum): power must exceed -1");
    out.terms.push_back(
        {t.coef * gamma(t.power + 1.0) * rgamma(t.power + order + 1.0), t.power + order});
  }
  return out;
}

/// D^β x^p = Γ(p+1)/Γ(p-β+1) x^(p-β); terms hitting a pole of the
/// denominator vanish.
inline PowerSum rl_derivative(const PowerSum& f, double order) {
  PowerSum out{f.origin, {}};
  for (const auto& t : f.terms) {
    if (!(t.power > -1.0))
      throw DomainError("rl_derivative(PowerSum): power must exceed -1");
    const double c = t.coef * gamma(t.power + 1.0) * rgamma(t.power - order + 1.0);
    if (c != 0.0)
      out.terms.push_back({c, t.power - order});
  }
  return out;
}

} // namespace fractalcalc
