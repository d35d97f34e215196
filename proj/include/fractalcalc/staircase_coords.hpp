#pragma once

// Transport between the physical coordinate z (or a curve parameter) and the
// staircase coordinate u = S(z). Every operator in the library acts on
// uniform samples in u.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/fractal_support.hpp"

namespace fractalcalc {

/// Uniform samples g_j ≈ g(u0 + j·du) of a function of the staircase coordinate.
class GridFunction {
public:
  GridFunction(double u0, double du, std::vector<double> samples)
      : u0_(u0), du_(du), g_(std::move(samples)) {
    if (!(du_ > 0.0))
      throw GridError("GridFunction: du must be positive");
    if (g_.size() < 2)
      throw GridError("GridFunction: need at least 2 samples");
  }

  /// Samples f on n equispaced nodes spanning [u_begin, u_end].
  template <class F>
  static GridFunction sample(F&& f, double u_begin, double u_end, std::size_t n) {
    if (n < 2 || !(u_end > u_begin))
      throw GridError("GridFunction::sample: need n >= 2 and u_end > u_begin");
    const double du = (u_end - u_begin) / static_cast<double>(n - 1);
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j)
      g[j] = f(j + 1 == n ? u_end : u_begin + static_cast<double>(j) * du);
    return GridFunction(u_begin, du, std::move(g));
  }

  double u0() const { return u0_; }
  double du() const { return du_; }
  std::size_t size() const { return g_.size(); }
  double u(std::size_t j) const { return u0_ + static_cast<double>(j) * du_; }
  double u_end() const { return u(g_.size() - 1); }
  double operator[](std::size_t j) const { return g_[j]; }
  double& operator[](std::size_t j) { return g_[j]; }
  const std::vector<double>& samples() const { return g_; }
  std::vector<double>& samples() { return g_; }

  /// Linear interpolation; clamps to the end samples outside the grid.
  double at(double u) const {
    const double x = (u - u0_) / du_;
    if (x <= 0.0)
      return g_.front();
    const double last = static_cast<double>(g_.size() - 1);
    if (x >= last)
      return g_.back();
    const auto k = static_cast<std::size_t>(x);
    const double t = x - static_cast<double>(k);
    return t == 0.0 ? g_[k] : (1.0 - t) * g_[k] + t * g_[k + 1];
  }

  /// Same nodes, new samples.
  GridFunction with_samples(std::vector<double> samples) const {
    if (samples.size() != g_.size())
      throw GridError("GridFunction::with_samples: size mismatch");
    return GridFunction(u0_, du_, std::move(samples));
  }

private:
  double u0_;
  double du_;
  std::vector<double> g_;
};

/// Leftmost z with S(z) = u. Plateaus resolve to their left end.
inline double pseudo_inverse(const Staircase& s, double u) {
  const auto& v = s.values();
  const auto& z = s.breakpoints();
  const double slack = 1e-12 * std::max(1.0, std::abs(v.back()));
  if (u < v.front() - slack || u > v.back() + slack)
    throw RangeError("pseudo_inverse: u outside the staircase range");
  u = std::clamp(u, v.front(), v.back());
  const auto it = std::lower_bound(v.begin(), v.end(), u);
  const auto k = static_cast<std::size_t>(it - v.begin());
  if (k == 0)
    return z.front();
  const double t = (u - v[k - 1]) / (v[k] - v[k - 1]);
  return z[k - 1] + t * (z[k] - z[k - 1]);
}

/// g_j = f(S⁻¹(u_j)) on n equispaced nodes of [u_begin, u_end].
template <class F>
GridFunction to_grid(F&& f, const Staircase& s, std::size_t n, double u_begin, double u_end) {
  if (n < 2)
    throw GridError("to_grid: need n >= 2");
  return GridFunction::sample([&](double u) { return f(pseudo_inverse(s, u)); }, u_begin, u_end,
                              n);
}

/// g_j = f(S⁻¹(u_j)) over the full mass range of S.
template <class F>
GridFunction to_grid(F&& f, const Staircase& s, std::size_t n) {
  return to_grid(std::forward<F>(f), s, n, s.min_value(), s.max_value());
}

/// Value of a grid function at the physical point z, i.e. g(S(z)).
inline double from_grid(const GridFunction& g, const Staircase& s, double z) {
  if (z < s.domain_lo() || z > s.domain_hi())
    throw RangeError("from_grid: z outside the staircase domain");
  return g.at(s(z));
}

} // namespace fractalcalc
