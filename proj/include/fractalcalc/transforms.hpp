#pragma once

// Fractal Laplace and Mellin transforms in the staircase coordinate, and the
// closed-form solution of the non-local linear ODE  D^β y - λy = h.
//
// Both transforms depend on s only through u_s = J(s) (Laplace) or
// σ = Re J(s) (Mellin), so they are classical transforms in u.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/fractal_support.hpp"
#include "fractalcalc/nonlocal_operators.hpp"
#include "fractalcalc/special_functions.hpp"
#include "fractalcalc/staircase_coords.hpp"

namespace fractalcalc {

struct LaplacePoint {
  double us;

  void validate() const {
    if (!(us > 0.0) || !std::isfinite(us))
      throw DomainError("LaplacePoint: us must be positive");
  }
};

/// σ inside the open existence strip (lo, hi).
struct MellinPoint {
  double sigma;
  double lo = -INFINITY;
  double hi = INFINITY;

  void validate() const {
    if (!(lo < sigma && sigma < hi))
      throw StripError("MellinPoint: sigma " + std::to_string(sigma) + " outside strip (" +
                       std::to_string(lo) + ", " + std::to_string(hi) + ")");
  }
};

struct TruncationPolicy {
  double u_max = 60.0;
  double u_min = 1e-16;
  double tail_tol = 1e-6;

  void validate() const {
    if (!(u_min > 0.0) || !(u_min < u_max) || !(tail_tol > 0.0))
      throw DomainError("TruncationPolicy: need 0 < u_min < u_max and tail_tol > 0");
  }
};

/// Transform value with the size of the parts of [0,∞) not covered by the
/// quadrature.
struct TransformValue {
  double value;
  double head_bound; ///< contribution estimate below the first node
  double tail_bound; ///< contribution estimate beyond the last node
};

namespace detail {

// f sampled at u = e^v on a uniform v-grid.
struct LogSamples {
  double v0;
  double dv;
  std::vector<double> u;
  std::vector<double> f;
};

template <class F>
LogSamples sample_log(F&& f, double u_min, double u_max, std::size_t n) {
  if (n < 3)
    throw GridError("sample_log: need at least 3 nodes");
  LogSamples s{std::log(u_min), (std::log(u_max) - std::log(u_min)) / static_cast<double>(n - 1),
               std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    s.u[i] = i + 1 == n ? u_max : std::exp(s.v0 + static_cast<double>(i) * s.dv);
    s.f[i] = f(s.u[i]);
    if (!std::isfinite(s.f[i]))
      throw GridError("sample_log: non-finite sample at u = " + std::to_string(s.u[i]));
  }
  return s;
}

// Trapezoid in v of f(e^v)·w(e^v)·e^v.
template <class W>
double log_trapezoid(const LogSamples& s, W&& weight) {
  CompensatedSum sum;
  const std::size_t n = s.u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s.f[i] * weight(s.u[i]) * s.u[i];
    sum.add(i == 0 || i + 1 == n ? 0.5 * t : t);
  }
  return sum.value() * s.dv;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}

// Local power exponent of f between two log nodes, when it is defined.
inline std::optional<double> local_power(double f0, double f1, double dv) {
  if (f0 == 0.0 || f1 == 0.0 || (f0 > 0.0) != (f1 > 0.0))
    return std::nullopt;
  return std::log(f1 / f0) / dv;
}

inline void check_truncation(const TransformValue& r, double tol, const char* who) {
  if (r.head_bound > tol || r.tail_bound > tol)
    throw TruncationError(std::string(who) + ": truncation bound exceeds tail_tol (head " +
                          std::to_string(r.head_bound) + ", tail " +
                          std::to_string(r.tail_bound) + ")");
}

inline TransformValue laplace_log(const LogSamples& s, double us) {
  const double value = log_trapezoid(s, [us](double u) { return std::exp(-us * u); });
  double head = std::abs(s.f.front()) * s.u.front();
  if (const auto q = local_power(s.f[0], s.f[1], s.dv); q && *q > -1.0)
    head /= *q + 1.0;
  else if (q)
    head = INFINITY;
  const double tail = std::exp(-us * s.u.back()) * max_abs(s.f);
  return {value, head, tail};
}

inline TransformValue mellin_log(const LogSamples& s, double sigma) {
  double value = log_trapezoid(s, [sigma](double u) { return std::pow(u, sigma - 1.0); });
  // Below u_min, f is modelled as f0·(u/u_min)^q with q fitted on the first
  // cell; the spread between two fits is the reported bound.
  double head = 0.0;
  const double f0 = s.f[0];
  const double umin_s = std::pow(s.u[0], sigma);
  if (f0 != 0.0) {
    const auto q0 = local_power(s.f[0], s.f[1], s.dv);
    const auto q1 = local_power(s.f[1], s.f[2], s.dv);
    if (!q0 || !q1 || !(sigma + *q0 > 0.0) || !(sigma + *q1 > 0.0)) {
      head = INFINITY;
    } else {
      const double c0 = f0 * umin_s / (sigma + *q0);
      const double c1 = f0 * umin_s / (sigma + *q1);
      value += c0;
      head = std::abs(c1 - c0);
    }
  }
  const double tail = std::abs(s.f.back()) * std::pow(s.u.back(), sigma);
  return {value, head, tail};
}

// ∫_a^{a+h} u^(σ-1)·[(1-t)·ga + t·gb] du with t = (u-a)/h, as weights (wa, wb).
inline std::pair<double, double> linear_cell_weights(double sigma, double a, double h) {
  const double b = a + h;
  if (a == 0.0) {
    if (!(sigma > 0.0))
      throw StripError("fractal_mellin: sigma <= 0 needs an origin power hint");
    // ∫_0^h u^(σ-1)(1-u/h) du = h^σ/σ - h^σ/(σ+1)
    const double hs = std::pow(h, sigma);
    const double wb = hs / (sigma + 1.0);
    return {hs / sigma - wb, wb};
  }
  const double x = h / a;
  if (x < 0.25) {
    // binomial series in x keeps the small cell width from cancelling
    double coef = 1.0; // binom(σ-1, k)
    double xk = 1.0;
    double s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < 60; ++k) {
      const double t1 = coef * xk / (k + 1.0);
      const double t2 = coef * xk / (k + 2.0);
      s1 += t1 - t2;
      s2 += t2;
      if (std::abs(t1) < 1e-18 * std::abs(s1 + s2) && k > 2)
        break;
      coef *= (sigma - 1.0 - k) / (k + 1.0);
      xk *= x;
    }
    const double scale = std::pow(a, sigma - 1.0) * h;
    return {scale * s1, scale * s2};
  }
  auto moment = [](double s, double lo, double hi) {
    if (s == 0.0)
      return std::log(hi / lo);
    return std::pow(lo, s) * std::expm1(s * std::log(hi / lo)) / s;
  };
  const double i0 = moment(sigma, a, b);
  const double i1 = moment(sigma + 1.0, a, b);
  return {(b * i0 - i1) / h, (i1 - a * i0) / h};
}

// Solves the 3x3 system M·x = r by Cramer's rule.
inline std::array<double, 3> solve3(const std::array<std::array<double, 3>, 3>& m,
                                    const std::array<double, 3>& r) {
  auto det = [](const std::array<std::array<double, 3>, 3>& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double d = det(m);
  if (d == 0.0)
    throw GridError("fractal_mellin: singular tail fit");
  std::array<double, 3> x{};
  for (int c = 0; c < 3; ++c) {
    auto mc = m;
    for (int r2 = 0; r2 < 3; ++r2)
      mc[r2][c] = r[r2];
    x[c] = det(mc) / d;
  }
  return x;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Laplace
// ---------------------------------------------------------------------------

/// Laplace transform of a function of u, integrated on [u_min, u_max] in the
/// variable v = ln u with n nodes.
template <class F>
  requires std::invocable<F&, double>
TransformValue fractal_laplace(F&& f, LaplacePoint p, const TruncationPolicy& trunc,
                               std::size_t n = 1 << 14) {
  p.validate();
  trunc.validate();
  const auto s = detail::sample_log(f, trunc.u_min, trunc.u_max, n);
  auto r = detail::laplace_log(s, p.us);
  detail::check_truncation(r, trunc.tail_tol, "fractal_laplace");
  return r;
}

/// Trapezoidal ∫ e^{-us·u} g(u) du over the grid, which should start at 0.
inline TransformValue fractal_laplace(const GridFunction& g, LaplacePoint p,
                                      const TruncationPolicy& trunc) {
  p.validate();
  trunc.validate();
  detail::CompensatedSum sum;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!std::isfinite(g[j]))
      throw GridError("fractal_laplace: non-finite sample at u = " + std::to_string(g.u(j)));
    const double t = std::exp(-p.us * g.u(j)) * g[j];
    sum.add(j == 0 || j + 1 == g.size() ? 0.5 * t : t);
  }
  TransformValue r{sum.value() * g.du(), 0.0,
                   std::exp(-p.us * g.u_end()) * detail::max_abs(g.samples())};
  detail::check_truncation(r, trunc.tail_tol, "fractal_laplace");
  return r;
}

// ---------------------------------------------------------------------------
// Mellin
// ---------------------------------------------------------------------------

/// Mellin transform of a function of u on [u_min, u_max], in v = ln u.
template <class F>
  requires std::invocable<F&, double>
TransformValue fractal_mellin(F&& f, const MellinPoint& p, const TruncationPolicy& trunc,
                              std::size_t n = 1 << 14) {
  p.validate();
  trunc.validate();
  const auto s = detail::sample_log(f, trunc.u_min, trunc.u_max, n);
  auto r = detail::mellin_log(s, p.sigma);
  detail::check_truncation(r, trunc.tail_tol, "fractal_mellin");
  return r;
}

/// Known asymptotic exponents of a grid function: g ~ u^origin_power near 0
/// and g ~ u^tail_power·(A + B/u + C/u²) at infinity.
struct MellinHints {
  std::optional<double> origin_power;
  std::optional<double> tail_power;
};

/// Mellin transform of a grid function starting at u = 0. The linear
/// interpolant is integrated exactly against u^(σ-1); with hints, the first
/// cell uses the origin power law and [u_end, ∞) an asymptotic fit.
inline TransformValue fractal_mellin(const GridFunction& g, const MellinPoint& p,
                                     const MellinHints& hints = {}, double tail_tol = INFINITY) {
  p.validate();
  const double sigma = p.sigma;
  const std::size_t n = g.size();
  if (n < 8)
    throw GridError("fractal_mellin: need at least 8 samples");
  if (g.u0() < 0.0)
    throw GridError("fractal_mellin: grid must lie in u >= 0");
  for (std::size_t j = hints.origin_power ? 1 : 0; j < n; ++j)
    if (!std::isfinite(g[j]))
      throw GridError("fractal_mellin: non-finite sample at u = " + std::to_string(g.u(j)));

  detail::CompensatedSum sum;
  std::size_t first = 0;
  if (hints.origin_power) {
    if (g.u0() != 0.0)
      throw GridError("fractal_mellin: origin hint needs a grid starting at 0");
    const double q = *hints.origin_power;
    if (!(sigma + q > 0.0))
      throw StripError("fractal_mellin: sigma + origin power must be positive");
    sum.add(g[1] * std::pow(g.u(1), sigma) / (sigma + q));
    first = 1;
  }
  for (std::size_t j = first; j + 1 < n; ++j) {
    const auto [wa, wb] = detail::linear_cell_weights(sigma, g.u(j), g.du());
    sum.add(wa * g[j] + wb * g[j + 1]);
  }

  const double big_u = g.u_end();
  double tail_bound = std::abs(g[n - 1]) * std::pow(big_u, sigma);
  if (hints.tail_power) {
    const double pw = *hints.tail_power;
    if (!(sigma + pw < 0.0))
      throw StripError("fractal_mellin: sigma + tail power must be negative");
    const std::array<std::size_t, 3> idx{n / 2, (3 * n) / 4, n - 1};
    std::array<std::array<double, 3>, 3> m{};
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i) {
      const double x = g.u(idx[i]) / big_u;
      for (int k = 0; k < 3; ++k)
        m[i][k] = std::pow(x, pw - k);
      r[i] = g[idx[i]];
    }
    const auto c = detail::solve3(m, r);
    // ∫_U^∞ u^(σ-1)·c_k·(u/U)^(pw-k) du = -c_k·U^σ/(σ+pw-k)
    double tail = 0.0;
    for (int k = 0; k < 3; ++k)
      tail += -c[k] * std::pow(big_u, sigma) / (sigma + pw - k);
    sum.add(tail);
    tail_bound = std::abs(c[2] * std::pow(big_u, sigma) / (sigma + pw - 2.0));
  }
  TransformValue out{sum.value(), 0.0, tail_bound};
  detail::check_truncation(out, tail_tol, "fractal_mellin");
  return out;
}

/// Quadrature for x^κ ∫_0^∞ t^τ f(x·t) h(t) dt, trapezoidal in ln t over
/// [t_min, t_max]. The h side is tabulated once. κ = τ = 0 is the Mellin
/// convolution.
class MellinConvolution {
public:
  template <class H>
  explicit MellinConvolution(H&& h, double kappa = 0.0, double tau = 0.0, double t_min = 1e-14,
                             double t_max = 80.0, std::size_t n = 2048)
      : kappa_(kappa), t_(n), w_(n) {
    if (n < 3 || !(t_min > 0.0) || !(t_max > t_min))
      throw DomainError("MellinConvolution: need n >= 3 and 0 < t_min < t_max");
    const double v0 = std::log(t_min);
    const double dv = (std::log(t_max) - v0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      t_[i] = std::exp(v0 + static_cast<double>(i) * dv);
      w_[i] = (i == 0 || i + 1 == n ? 0.5 : 1.0) * dv * std::pow(t_[i], tau + 1.0) * h(t_[i]);
    }
  }

  template <class F>
  double operator()(F&& f, double x) const {
    if (!(x >= 0.0))
      throw DomainError("MellinConvolution: x must be >= 0");
    detail::CompensatedSum sum;
    for (std::size_t i = 0; i < t_.size(); ++i)
      if (w_[i] != 0.0)
        sum.add(w_[i] * f(x * t_[i]));
    return (kappa_ == 0.0 ? 1.0 : std::pow(x, kappa_)) * sum.value();
  }

private:
  double kappa_;
  std::vector<double> t_;
  std::vector<double> w_;
};

template <class F, class H>
double mellin_convolution(F&& f, H&& h, double x, double kappa = 0.0, double tau = 0.0) {
  return MellinConvolution(h, kappa, tau)(f, x);
}

// ---------------------------------------------------------------------------
// Non-local ODE  D^β y - λy = h,  [D^(β-k) y]_0 = c_k
// ---------------------------------------------------------------------------

/// y = head + regular: head carries the terms of the homogeneous solution
/// with exponent below 1 exactly, regular is what is left on the grid.
struct NonlocalSolution {
  GridFunction y;
  PowerSum head;
  GridFunction regular;
};

namespace detail {

// Σ_m λ^m I^{β(m+1)} h by one product-trapezoid pass with combined weights.
inline std::vector<double> ml_convolution(const GridFunction& h, double beta, double lambda,
                                          const SeriesControl& ctl) {
  const std::size_t n = h.size();
  std::vector<double> lag(n, 0.0), first(n, 0.0);
  const double du = h.du();
  const double span = h.u_end() - h.u0();
  double lam_m = 1.0;
  int small_run = 0;
  double largest = 0.0;
  for (int m = 0; m < ctl.max_terms; ++m) {
    const double order = beta * (m + 1);
    const double scale = lam_m * std::pow(du, order) * rgamma(order + 2.0);
    const ProductWeights w(order, n);
    for (std::size_t k = 0; k < n; ++k) {
      lag[k] += scale * w.lag[k];
      first[k] += scale * w.first[k];
    }
    // bound on the m-th term's size over the grid
    const double size = std::abs(lam_m) * std::pow(span, order) * rgamma(order + 1.0);
    largest = std::max(largest, size);
    if (size <= ctl.rel_tol * largest) {
      if (++small_run == 2) {
        std::vector<double> out(n, 0.0);
        for (std::size_t j = 1; j < n; ++j) {
          double acc = first[j] * h[0] + lag[0] * h[j];
          for (std::size_t i = 1; i < j; ++i)
            acc += lag[j - i] * h[i];
          out[j] = acc;
        }
        return out;
      }
    } else {
      small_run = 0;
    }
    lam_m *= lambda;
  }
  throw ConvergenceError("solve_nonlocal_ode: kernel series did not converge");
}

} // namespace detail

/// Closed-form solution
///   y = Σ_k c_k u^(β-k) E_{β,β-k+1}(λu^β) + ∫_0^u (u-t)^(β-1) E_{β,β}(λ(u-t)^β) h(t) dt
/// on the nodes of h (or n nodes of [0, u_max] when h is absent).
inline NonlocalSolution solve_nonlocal_ode(const FracOrder& ord, double lambda,
                                           const std::vector<double>& c,
                                           const std::optional<GridFunction>& h,
                                           double u_max = 2.0, std::size_t n = 4096,
                                           const SeriesControl& ctl = {}) {
  ord.validate();
  const double beta = ord.beta;
  if (!(beta > 0.0))
    throw OrderError("solve_nonlocal_ode: beta must be positive");
  if (!(beta - ord.n + 1.0 > 0.0))
    throw OrderError("solve_nonlocal_ode: need beta - n + 1 > 0");
  if (c.size() != static_cast<std::size_t>(ord.n))
    throw DomainError("solve_nonlocal_ode: need exactly n initial values");
  if (!std::isfinite(lambda))
    throw DomainError("solve_nonlocal_ode: lambda must be finite");
  if (h && h->u0() != 0.0)
    throw GridError("solve_nonlocal_ode: h must be sampled from u = 0");

  const GridFunction grid =
      h ? *h : GridFunction::sample([](double) { return 0.0; }, 0.0, u_max, n);
  const std::size_t len = grid.size();

  PowerSum head{0.0, {}};
  for (int k = 1; k <= ord.n; ++k) {
    const double ck = c[static_cast<std::size_t>(k - 1)];
    if (ck == 0.0)
      continue;
    double lam_j = 1.0;
    for (int j = 0;; ++j) {
      const double power = beta * (j + 1) - k;
      if (power >= 1.0)
        break;
      const double coef = ck * lam_j * rgamma(power + 1.0);
      if (coef != 0.0)
        head.terms.push_back({coef, power});
      lam_j *= lambda;
    }
  }

  std::vector<double> y(len, 0.0), regular(len, 0.0);
  std::vector<double> particular(len, 0.0);
  if (h)
    particular = detail::ml_convolution(*h, beta, lambda, ctl);
  for (std::size_t j = 0; j < len; ++j) {
    const double u = grid.u(j);
    double hom = 0.0;
    if (j == 0) {
      hom = head.terms.empty() ? 0.0 : head(u);
    } else {
      for (int k = 1; k <= ord.n; ++k) {
        const double ck = c[static_cast<std::size_t>(k - 1)];
        if (ck != 0.0)
          hom += ck * std::pow(u, beta - k) *
                 mittag_leffler(beta, beta - k + 1.0, lambda * std::pow(u, beta), ctl);
      }
    }
    y[j] = hom + particular[j];
    regular[j] = j == 0 ? particular[j] : y[j] - (head.terms.empty() ? 0.0 : head(u));
  }
  return {grid.with_samples(std::move(y)), std::move(head), grid.with_samples(std::move(regular))};
}

/// D^β y - λy - h on the grid, with the head differentiated exactly.
inline GridFunction nonlocal_ode_residual(const NonlocalSolution& sol, const FracOrder& ord,
                                          double lambda, const std::optional<GridFunction>& h) {
  const auto d_regular = rl_derivative(sol.regular, ord);
  const auto d_head = rl_derivative(sol.head, ord.beta);
  std::vector<double> r(sol.y.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double u = sol.y.u(j);
    const double dh = d_head.terms.empty() || j == 0 ? 0.0 : d_head(u);
    r[j] = d_regular[j] + dh - lambda * sol.y[j] - (h ? (*h)[j] : 0.0);
  }
  return sol.y.with_samples(std::move(r));
}

} // namespace fractalcalc
