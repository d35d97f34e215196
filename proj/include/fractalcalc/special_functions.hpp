#pragma once

// Real-argument gamma, beta and Mittag-Leffler functions.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "fractalcalc/errors.hpp"

namespace fractalcalc {

/// Truncation policy for the Mittag-Leffler series.
struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 2000;
  double arg_cap = 50.0; ///< largest |x| the series is trusted with

  void validate() const {
    if (!(rel_tol > 0.0) || max_terms < 1 || !(arg_cap > 0.0))
      throw DomainError("SeriesControl: need rel_tol > 0, max_terms >= 1, arg_cap > 0");
  }
};

namespace detail {

inline bool is_nonpositive_integer(double x, double tol = 1e-12) {
  return x <= tol && std::abs(x - std::round(x)) <= tol;
}

} // namespace detail

/// Gamma function for real arguments. Negative non-integers go through the
/// reflection formula Γ(x)Γ(1-x) = π/sin(πx).
inline double gamma(double x) {
  if (!std::isfinite(x))
    throw DomainError("gamma: non-finite argument");
  if (detail::is_nonpositive_integer(x))
    throw PoleError("gamma: pole at x = " + std::to_string(x));
  if (x < 0.5) {
    // reflection keeps the accuracy of the positive branch
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * std::tgamma(1.0 - x));
  }
  return std::tgamma(x);
}

/// 1/Γ(x), extended by zero at the poles of Γ.
inline double rgamma(double x) {
  if (detail::is_nonpositive_integer(x))
    return 0.0;
  if (x > 171.0)
    return std::exp(-std::lgamma(x));
  return 1.0 / gamma(x);
}

inline double beta(double x, double v) {
  if (!(x > 0.0) || !(v > 0.0))
    throw DomainError("beta: arguments must be positive");
  if (x + v > 170.0)
    return std::exp(std::lgamma(x) + std::lgamma(v) - std::lgamma(x + v));
  // Γ(x)Γ(v) is symmetric under multiplication, so B(x,v) == B(v,x) bitwise.
  return gamma(x) * gamma(v) / gamma(x + v);
}

namespace detail {

struct SeriesValue {
  double value;
  double error; ///< absolute error estimate
};

// E_{η,μ}(-x) ~ Σ_{k>=1} (-1)^(k+1) x^-k / Γ(μ-ηk) for 0 < η < 1, cut at the
// smallest term. The envelope x^-k·Γ(1-y)/π bounds |x^-k/Γ(y)| for y < 0.
inline SeriesValue ml_negative_asymptotic(double eta, double mu, double x, int max_terms) {
  const double lx = std::log(x);
  double sum = 0.0;
  double prev = INFINITY;
  for (int k = 1; k <= max_terms; ++k) {
    const double y = mu - eta * k;
    const double env = y > 0.0 ? std::exp(-k * lx) * std::abs(rgamma(y))
                               : std::exp(std::lgamma(1.0 - y) - k * lx) / std::numbers::pi;
    if (y < 0.0 && env > prev)
      return {sum, prev};
    if (!std::isfinite(env))
      break;
    sum += (k % 2 ? 1.0 : -1.0) * std::exp(-k * lx) * rgamma(y);
    if (env <= std::numeric_limits<double>::epsilon() * std::abs(sum))
      return {sum, env};
    if (y < 0.0)
      prev = env;
  }
  return {sum, prev};
}

// Σ_k ((k+m)!/k!) x^k / Γ(ηk + ηm + μ), stopped once two consecutive terms
// fall below rel_tol times the running sum.
inline double ml_series(double eta, double mu, int m, double x, const SeriesControl& ctl,
                        const char* who) {
  ctl.validate();
  if (!(eta > 0.0) || !(mu > 0.0))
    throw DomainError(std::string(who) + ": need eta > 0 and mu > 0");
  if (m < 0)
    throw DomainError(std::string(who) + ": need m >= 0");
  if (!(std::abs(x) <= ctl.arg_cap))
    throw DomainError(std::string(who) + ": |x| exceeds arg_cap");

  const bool asymptotic_ok = x < 0.0 && m == 0 && eta < 1.0;
  std::optional<SeriesValue> asym;
  if (asymptotic_ok) {
    asym = ml_negative_asymptotic(eta, mu, -x, ctl.max_terms);
    if (asym->error <= ctl.rel_tol * std::abs(asym->value))
      return asym->value;
  }
  auto fallback = [&](double value, double lost, const char* why) {
    const SeriesValue best = asym && asym->error < lost ? *asym : SeriesValue{value, lost};
    if (best.error <= 1e-6 * std::max(1.0, std::abs(best.value)))
      return best.value;
    throw ConvergenceError(std::string(who) + why);
  };

  // long double keeps the alternating partial sums a few digits clear of rounding
  using real = long double;
  const real lx = x == 0.0 ? -INFINITY : std::log(std::abs(static_cast<real>(x)));
  real sum = 0.0L;
  real biggest = 0.0L;
  int small_run = 0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const real arg = static_cast<real>(eta) * (k + m) + mu;
    real term;
    if (k == 0) {
      term = std::exp(std::lgamma(static_cast<real>(m) + 1.0L) - std::lgamma(arg));
    } else if (x == 0.0) {
      term = 0.0L;
    } else {
      term = std::exp(k * lx + std::lgamma(static_cast<real>(k + m) + 1.0L) -
                      std::lgamma(static_cast<real>(k) + 1.0L) - std::lgamma(arg));
      if (x < 0.0 && (k % 2 == 1))
        term = -term;
    }
    biggest = std::max(biggest, std::abs(term));
    sum += term;
    if (std::abs(term) <= ctl.rel_tol * std::abs(sum)) {
      if (++small_run == 2) {
        const double value = static_cast<double>(sum);
        // alternating terms far larger than the result leave only rounding noise
        const double lost = static_cast<double>(biggest * 64 * std::numeric_limits<real>::epsilon());
        if (lost <= 1e-8 * std::max(1.0, std::abs(value)))
          return value;
        return fallback(value, lost, ": cancellation in the series destroys accuracy");
      }
    } else {
      small_run = 0;
    }
  }
  return fallback(NAN, INFINITY, ": max_terms reached before convergence");
}

} // namespace detail

/// Two-parameter Mittag-Leffler function E_{η,μ}(x); E_η(x) is mu = 1.
inline double mittag_leffler(double eta, double mu, double x, const SeriesControl& ctl = {}) {
  return detail::ml_series(eta, mu, 0, x, ctl, "mittag_leffler");
}

/// E^m_{η,μ}(x) = Σ_k ((k+m)!/k!) x^k / Γ(ηk+ηm+μ).
inline double mittag_leffler_m(double eta, double mu, int m, double x,
                               const SeriesControl& ctl = {}) {
  return detail::ml_series(eta, mu, m, x, ctl, "mittag_leffler_m");
}

} // namespace fractalcalc
