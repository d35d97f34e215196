#pragma once

// Numerical checks of the closed-form identities: the operator table, the
// Laplace table and operator rules, the Mellin rules, and the worked ODE
// examples. Every check compares a numerically computed left-hand side with
// a closed form and records the relative error against a tolerance.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/io.hpp"
#include "fractalcalc/local_calculus.hpp"
#include "fractalcalc/nonlocal_operators.hpp"
#include "fractalcalc/special_functions.hpp"
#include "fractalcalc/staircase_coords.hpp"
#include "fractalcalc/transforms.hpp"

namespace fractalcalc {

/// Runs independent tasks on up to `jobs` threads; results keep task order.
template <class T>
std::vector<T> run_jobs(const std::vector<std::function<T()>>& tasks, unsigned jobs) {
  std::vector<std::optional<T>> slots(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        slots[i].emplace(tasks[i]());
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& th : pool)
    th.join();
  std::vector<T> out;
  out.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (errors[i])
      std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

struct Param {
  std::string key;
  double value;
};

/// One identity at one parameter point.
struct CheckRecord {
  std::string identity;
  std::vector<Param> params;
  double x = 0.0; ///< σ or u_s, when the identity has one
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
  double tol = 0.0;
  std::string status; ///< pass, fail or skipped
  std::optional<double> erratum_err;

  bool failed() const { return status == "fail"; }
};

/// Relative error, or absolute when the reference is zero.
inline double rel_error(double got, double want) {
  if (std::isnan(got) || std::isnan(want))
    return INFINITY;
  if (want == 0.0)
    return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

inline CheckRecord make_check(std::string identity, std::vector<Param> params, double x,
                              double lhs, double rhs, double tol,
                              std::optional<double> erratum_err = std::nullopt) {
  CheckRecord r{std::move(identity), std::move(params), x, lhs, rhs, rel_error(lhs, rhs), tol,
                "", erratum_err};
  r.status = r.rel_err <= tol ? "pass" : "fail";
  return r;
}

/// Like make_check, but the residual is measured against max(|rhs|, scale),
/// for identities whose right side cancels between terms of size `scale`.
inline CheckRecord make_scaled_check(std::string identity, std::vector<Param> params, double x,
                                     double lhs, double rhs, double scale, double tol) {
  auto r = make_check(std::move(identity), std::move(params), x, lhs, rhs, tol);
  if (std::isfinite(lhs) && std::isfinite(rhs)) {
    r.rel_err = std::abs(lhs - rhs) / std::max(std::abs(rhs), std::abs(scale));
    r.status = r.rel_err <= tol ? "pass" : "fail";
  }
  return r;
}

inline CheckRecord skipped_check(std::string identity, std::vector<Param> params, double x) {
  CheckRecord r{std::move(identity), std::move(params), x, NAN, NAN, NAN, 0.0, "skipped", {}};
  return r;
}

template <class R>
bool all_passed(const std::vector<R>& records) {
  return std::none_of(records.begin(), records.end(), [](const R& r) { return r.failed(); });
}

enum class ErrorMode { Pointwise, Normwise };

/// Largest error of `got` against `exact` on nodes with u >= u_lo.
/// Pointwise is relative per node (absolute where exact is 0); Normwise
/// divides the largest absolute error by the largest |exact|.
template <class F>
double window_error(const GridFunction& got, F&& exact, double u_lo,
                    ErrorMode mode = ErrorMode::Pointwise) {
  double worst = 0.0, scale = 0.0, abs_worst = 0.0;
  bool any = false;
  for (std::size_t j = 0; j < got.size(); ++j) {
    const double u = got.u(j);
    if (u < u_lo)
      continue;
    any = true;
    const double e = exact(u);
    if (mode == ErrorMode::Pointwise) {
      worst = std::max(worst, rel_error(got[j], e));
    } else {
      if (!std::isfinite(got[j]))
        return INFINITY;
      abs_worst = std::max(abs_worst, std::abs(got[j] - e));
      scale = std::max(scale, std::abs(e));
    }
  }
  if (!any)
    throw GridError("window_error: empty comparison window");
  if (mode == ErrorMode::Normwise)
    return scale > 0.0 ? abs_worst / scale : abs_worst;
  return worst;
}

// ---------------------------------------------------------------------------
// Operator table
// ---------------------------------------------------------------------------

struct Table1Row {
  int row;
  std::string column;
  double beta;
  int m;
  double max_rel_err;
  double tail_bound; ///< omitted (-∞, -T) contribution, rows 7-9
  std::string status;

  bool failed() const { return status == "fail"; }
};

struct Table1Options {
  std::vector<double> betas; ///< empty: {0.25, 0.5, 0.75·α}
  std::vector<int> ms{0, 1, 2, 3};
  std::size_t grid_n = 4096;
  double a_point = 0.25;  ///< lower limit for rows 5-6, as a fraction of the domain
  double lambda = 1.0;    ///< rows 7 and 9
  double exp_trunc = 20.0;
  double cos_trunc = 4.0 * std::numbers::pi;
  double window = 0.1; ///< leading fraction of the range left out of the comparison
  double tol = 1e-3;
  double tail_tol = 1e-6;
  unsigned jobs = 1;
};

namespace detail {

// Γ(s, z) for complex z away from the negative real axis, by the Legendre
// continued fraction (modified Lentz).
inline std::complex<double> upper_gamma_cf(double s, std::complex<double> z) {
  using C = std::complex<double>;
  constexpr double tiny = 1e-300;
  C b = z + 1.0 - s;
  C c = 1.0 / tiny;
  C d = 1.0 / b;
  C h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny)
      d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny)
      c = tiny;
    d = 1.0 / d;
    const C del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15)
      return std::exp(-z + s * std::log(z)) * h;
  }
  throw NoConvergence("upper_gamma_cf: continued fraction did not converge");
}

} // namespace detail

/// Part of D^β cos(u) (lower limit -∞, 0 < β < 1) that comes from w < -T:
///   d/du (1/Γ(1-β)) ∫_{-∞}^{-T} (u-w)^(-β) cos(w) dw
/// = [-(u+T)^(-β) cos T - Im K(u)] / Γ(1-β),  K(u) = e^{iu} (-i)^(1-β) Γ(1-β, i(u+T)).
inline double cos_tail_derivative(double beta, double u, double trunc) {
  if (!(beta > 0.0 && beta < 1.0))
    throw OrderError("cos_tail_derivative: need 0 < beta < 1");
  if (!(u + trunc > 0.0))
    throw DomainError("cos_tail_derivative: need u > -T");
  using C = std::complex<double>;
  const double s = 1.0 - beta;
  const C rot = std::exp(C(0.0, -0.5 * std::numbers::pi * s));
  const C k = std::exp(C(0.0, u)) * rot * detail::upper_gamma_cf(s, C(0.0, u + trunc));
  return (-std::pow(u + trunc, -beta) * std::cos(trunc) - k.imag()) / gamma(s);
}

/// One operator-table row on one support.
inline Table1Row table1_row(const Staircase& s, double alpha, const std::string& column, int row,
                            double beta, int m, const Table1Options& opt) {
  const std::size_t n = opt.grid_n;
  if (n < 64)
    throw GridError("table1: grid_n must be >= 64");
  const double top = s.max_value();
  const double lo = s.min_value();
  const auto ord = FracOrder::make(alpha, beta);
  const double md = m;
  Table1Row out{row, column, beta, m, 0.0, 0.0, ""};

  auto power_grid = [&](double ua) {
    return to_grid([&](double z) { return std::pow(s(z) - ua, md); }, s, n, ua, top);
  };
  auto window_lo = [&](double ua) { return ua + opt.window * (top - ua); };

  switch (row) {
  case 1: {
    const auto g = cumulative_integral(power_grid(lo));
    out.max_rel_err = window_error(
        g, [&](double u) { return std::pow(u - lo, md + 1.0) / (md + 1.0); }, window_lo(lo));
    break;
  }
  case 2: {
    const auto d = falpha_derivative(power_grid(lo), s);
    out.max_rel_err = window_error(
        d, [&](double u) { return m == 0 ? 0.0 : md * std::pow(u - lo, md - 1.0); },
        window_lo(lo));
    break;
  }
  case 3:
  case 5: {
    const double ua = row == 3 ? lo : s(s.domain_lo() + opt.a_point * (s.domain_hi() - s.domain_lo()));
    const auto g = rl_integral(power_grid(ua), ord);
    const double c = gamma(md + 1.0) * rgamma(md + beta + 1.0);
    out.max_rel_err =
        window_error(g, [&](double u) { return c * std::pow(u - ua, md + beta); }, window_lo(ua));
    break;
  }
  case 4:
  case 6: {
    const double ua = row == 4 ? lo : s(s.domain_lo() + opt.a_point * (s.domain_hi() - s.domain_lo()));
    const auto g = rl_derivative(power_grid(ua), ord);
    const double c = gamma(md + 1.0) * rgamma(md - beta + 1.0);
    out.max_rel_err =
        window_error(g, [&](double u) { return c * std::pow(u - ua, md - beta); }, window_lo(ua));
    break;
  }
  case 7:
  case 9: {
    // [-T, top]: analytic continuation below the staircase range, transported samples above
    const double lam = opt.lambda;
    const double t = opt.exp_trunc;
    const auto g = GridFunction::sample(
        [&](double u) {
          return u < lo ? std::exp(lam * (u - lo)) : std::exp(lam * (s(pseudo_inverse(s, u)) - lo));
        },
        lo - t, top, n);
    GridFunction r = row == 7 ? rl_integral(g, ord) : rl_derivative(g, ord);
    const double c = row == 7 ? std::pow(lam, -beta) : std::pow(lam, beta);
    out.max_rel_err = window_error(
        r, [&](double u) { return c * std::exp(lam * (u - lo)); }, window_lo(lo));
    // omitted ∫_{-∞}^{-T}, relative to the smallest closed-form value
    out.tail_bound = row == 7 ? std::pow(t, beta - 1.0) * std::exp(-lam * t) *
                                    std::pow(lam, beta - 1.0) * rgamma(beta)
                              : beta * std::pow(t, -beta - 1.0) * std::exp(-lam * t) *
                                    std::pow(lam, -beta - 1.0) * rgamma(1.0 - beta);
    break;
  }
  case 8: {
    if (!(beta < 1.0))
      throw OrderError("table1 row 8: beta must be < 1");
    const double t = opt.cos_trunc;
    const auto g = GridFunction::sample(
        [&](double u) {
          return u < lo ? std::cos(u - lo) : std::cos(s(pseudo_inverse(s, u)) - lo);
        },
        lo - t, top, n);
    auto d = rl_derivative(g, ord).samples();
    double corr_max = 0.0;
    const double w_lo = window_lo(lo);
    for (std::size_t j = 0; j < n; ++j) {
      if (g.u(j) < w_lo)
        continue;
      const double u = g.u(j) - lo;
      const double c = cos_tail_derivative(beta, u, t);
      d[j] += c;
      corr_max = std::max(corr_max, std::abs(c));
    }
    out.max_rel_err = window_error(
        g.with_samples(std::move(d)),
        [&](double u) { return std::cos(u - lo + 0.5 * std::numbers::pi * beta); },
        window_lo(lo), ErrorMode::Normwise);
    // the tail is added in closed form; what remains is its evaluation error
    out.tail_bound = 1e-14 * std::max(1.0, corr_max);
    break;
  }
  default:
    throw DomainError("table1: row must be 1..9");
  }
  const bool ok = out.max_rel_err <= opt.tol && out.tail_bound <= opt.tail_tol;
  out.status = ok ? "pass" : "fail";
  return out;
}

/// All nine rows for every (β, m); rows 7-9 do not depend on m and use m = 0.
inline std::vector<Table1Row> verify_table1(const Staircase& s, double alpha,
                                            const std::string& column,
                                            const Table1Options& opt) {
  std::vector<double> betas = opt.betas;
  if (betas.empty())
    betas = {0.25, 0.5, 0.75 * alpha};
  std::vector<std::function<Table1Row()>> tasks;
  for (int row = 1; row <= 9; ++row)
    for (double beta : betas) {
      if (row >= 7) {
        tasks.emplace_back([=, &s, &opt] { return table1_row(s, alpha, column, row, beta, 0, opt); });
        continue;
      }
      for (int m : opt.ms)
        tasks.emplace_back([=, &s, &opt] { return table1_row(s, alpha, column, row, beta, m, opt); });
    }
  return run_jobs(tasks, opt.jobs);
}

// ---------------------------------------------------------------------------
// Laplace table
// ---------------------------------------------------------------------------

struct Table2Options {
  std::vector<double> us{1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  std::size_t grid_n = 1 << 14;
  double u_max = 60.0;
  double tol = 1e-3;
  double consistency_tol = 1e-6;
  unsigned jobs = 1;
};

namespace detail {

struct LaplacePair {
  std::string identity;
  std::vector<Param> params;
  std::function<double(double)> g;
  std::function<double(double)> transform;
  double eta; ///< pole at us^eta = a
  double a;
};

inline std::vector<LaplacePair> table2_pairs() {
  std::vector<LaplacePair> p;
  {
    const double b = 0.5;
    p.push_back({"table2.row1", {{"beta", b}},
                 [b](double u) { return std::pow(u, b - 1.0) * rgamma(b); },
                 [b](double us) { return std::pow(us, -b); }, 1.0, -INFINITY});
  }
  {
    const double b = 0.6, a = 0.5;
    p.push_back({"table2.row2", {{"beta", b}, {"a", a}},
                 [=](double u) {
                   return std::pow(u, b - 1.0) * mittag_leffler(b, b, a * std::pow(u, b));
                 },
                 [=](double us) { return 1.0 / (std::pow(us, b) - a); }, b, a});
  }
  {
    const double b = 0.6, a = 1.0;
    p.push_back({"table2.row3", {{"beta", b}, {"a", a}},
                 [=](double u) { return mittag_leffler(b, 1.0, -a * std::pow(u, b)); },
                 [=](double us) { return std::pow(us, b - 1.0) / (std::pow(us, b) + a); }, b,
                 -a});
    p.push_back({"table2.row4", {{"beta", b}, {"a", a}},
                 [=](double u) { return 1.0 - mittag_leffler(b, 1.0, -a * std::pow(u, b)); },
                 [=](double us) { return a / (us * (std::pow(us, b) + a)); }, b, -a});
  }
  {
    const double b = 0.5, a = 0.5;
    p.push_back({"table2.row5", {{"beta", b}, {"a", a}},
                 [=](double u) { return std::pow(u, b) * mittag_leffler(1.0, b + 1.0, a * u); },
                 [=](double us) { return 1.0 / (std::pow(us, b) * (us - a)); }, 1.0, a});
  }
  {
    const double nu = 0.7, b = 0.5, a = 0.5;
    p.push_back({"table2.row6", {{"nu", nu}, {"beta", b}, {"a", a}},
                 [=](double u) {
                   return std::pow(u, b - 1.0) * mittag_leffler(nu, b, a * std::pow(u, nu));
                 },
                 [=](double us) { return std::pow(us, nu - b) / (std::pow(us, nu) - a); }, nu,
                 a});
  }
  for (int m : {0, 1, 2}) {
    const double eta = 0.8, mu = 1.0, a = 0.5;
    const double md = m;
    p.push_back({"table2.row7", {{"eta", eta}, {"mu", mu}, {"m", md}, {"a", a}},
                 [=](double u) {
                   return std::pow(u, eta * md + mu - 1.0) *
                          mittag_leffler_m(eta, mu, m, a * std::pow(u, eta));
                 },
                 [=](double us) {
                   return std::tgamma(md + 1.0) * std::pow(us, eta - mu) /
                          std::pow(std::pow(us, eta) - a, md + 1.0);
                 },
                 eta, a});
  }
  return p;
}

} // namespace detail

/// Numerical transform of each row's u-space function against its closed form.
inline std::vector<CheckRecord> verify_table2(const Table2Options& opt) {
  for (double us : opt.us)
    LaplacePoint{us}.validate();
  const TruncationPolicy trunc{opt.u_max, 1e-16, 1e-6};
  const auto pairs = detail::table2_pairs();
  std::vector<std::function<std::vector<CheckRecord>()>> tasks;
  for (const auto& pr : pairs) {
    tasks.emplace_back([&pr, &opt, trunc] {
      for (double us : opt.us)
        if (std::pow(us, pr.eta) <= pr.a)
          throw PoleError(pr.identity + ": us^eta <= a");
      const auto samples = detail::sample_log(pr.g, trunc.u_min, trunc.u_max, opt.grid_n);
      std::vector<CheckRecord> out;
      for (double us : opt.us) {
        const auto v = detail::laplace_log(samples, us);
        detail::check_truncation(v, trunc.tail_tol, pr.identity.c_str());
        out.push_back(make_check(pr.identity, pr.params, us, v.value, pr.transform(us), opt.tol));
      }
      return out;
    });
  }
  const auto parts = run_jobs(tasks, opt.jobs);
  std::vector<CheckRecord> out;
  for (const auto& part : parts)
    out.insert(out.end(), part.begin(), part.end());

  // row 3 + row 4 transform 1 = E + (1 - E)
  std::vector<CheckRecord> sums;
  for (const auto& r3 : out) {
    if (r3.identity != "table2.row3")
      continue;
    for (const auto& r4 : out)
      if (r4.identity == "table2.row4" && r4.x == r3.x)
        sums.push_back(make_check("table2.row3+row4", r3.params, r3.x, r3.lhs + r4.lhs,
                                  1.0 / r3.x, opt.consistency_tol));
  }
  out.insert(out.end(), sums.begin(), sums.end());
  return out;
}

// ---------------------------------------------------------------------------
// Laplace rules for the non-local operators
// ---------------------------------------------------------------------------

namespace detail {

// [I^order g]_0 or [D^(-order) g]_0 for a power sum at its origin.
inline double power_sum_at_origin(const PowerSum& f, double order) {
  const PowerSum r = order > 0.0 ? rl_integral(f, order)
                     : order < 0.0 ? rl_derivative(f, -order)
                                   : f;
  double v = 0.0;
  for (const auto& t : r.terms) {
    if (t.power > 0.0)
      continue;
    if (t.power < 0.0)
      return t.coef > 0.0 ? INFINITY : -INFINITY;
    v += t.coef;
  }
  return v;
}

// k-th ordinary derivative of a power sum at its origin.
inline double power_sum_derivative_at_origin(const PowerSum& f, int k) {
  double v = 0.0;
  for (const auto& t : f.terms) {
    if (t.power == k)
      v += t.coef * std::tgamma(k + 1.0);
    else if (t.power < k && t.power != std::floor(t.power))
      return INFINITY;
  }
  return v;
}

} // namespace detail

/// RL derivative, Caputo derivative and RL integral rules at one u_s for the
/// power sum g, whose operator images are computed on a grid of n nodes over
/// [0, u_max]. The integral record carries the printed exponent variant
/// (u_s^β instead of u_s^-β) as its erratum error.
inline std::vector<CheckRecord> laplace_rl_identity_check(const PowerSum& g, const FracOrder& ord,
                                                          const std::vector<LaplacePoint>& points,
                                                          double u_max, std::size_t n,
                                                          double tol) {
  ord.validate();
  if (g.origin != 0.0)
    throw DomainError("laplace_rl_identity_check: power sum must be centred at 0");
  const auto grid = GridFunction::sample([&](double u) { return g(u); }, 0.0, u_max, n);
  const TruncationPolicy trunc{u_max, 1e-16, 1e-6};
  const double beta = ord.beta;
  std::vector<Param> params{{"alpha", ord.alpha}, {"beta", beta}, {"n", double(ord.n)}};
  for (std::size_t i = 0; i < g.terms.size(); ++i) {
    params.push_back({"c" + std::to_string(i), g.terms[i].coef});
    params.push_back({"p" + std::to_string(i), g.terms[i].power});
  }

  const auto d_rl = rl_derivative(grid, ord);
  const auto d_c = caputo_derivative(grid, ord);
  const auto i_rl = rl_integral(grid, ord);
  const bool rl_finite = std::all_of(d_rl.samples().begin(), d_rl.samples().end(),
                                     [](double v) { return std::isfinite(v); });

  std::vector<CheckRecord> out;
  for (const auto& p : points) {
    p.validate();
    const double us = p.us;
    const double f = fractal_laplace(grid, p, trunc).value;

    if (rl_finite) {
      double rhs = std::pow(us, beta) * f;
      double scale = std::abs(rhs);
      for (int k = 0; k < ord.n; ++k) {
        const double term = std::pow(us, k) * detail::power_sum_at_origin(g, k + 1.0 - beta);
        rhs -= term;
        scale = std::max(scale, std::abs(term));
      }
      out.push_back(make_scaled_check("laplace.rl_derivative", params, us,
                                      fractal_laplace(d_rl, p, trunc).value, rhs, scale, tol));
    } else {
      out.push_back(skipped_check("laplace.rl_derivative", params, us));
    }

    double rhs_c = std::pow(us, beta) * f;
    double scale_c = std::abs(rhs_c);
    for (int k = 0; k < ord.n; ++k) {
      const double term = std::pow(us, beta - k - 1.0) * detail::power_sum_derivative_at_origin(g, k);
      rhs_c -= term;
      scale_c = std::max(scale_c, std::abs(term));
    }
    out.push_back(make_scaled_check("laplace.caputo", params, us,
                                    fractal_laplace(d_c, p, trunc).value, rhs_c, scale_c, tol));

    const double lhs_i = fractal_laplace(i_rl, p, trunc).value;
    out.push_back(make_check("laplace.rl_integral", params, us, lhs_i, std::pow(us, -beta) * f,
                             tol, rel_error(lhs_i, std::pow(us, beta) * f)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Non-local ODE
// ---------------------------------------------------------------------------

struct NonlocalOdeOptions {
  double u_max = 2.0;
  std::size_t grid_n = 4096;
  double u_lo = 0.1;
  double tol = 5e-3;
};

/// sup |D^β y - λy - h| over [u_lo, u_max] for c = (1, 0, ...) and h = 0 or 1.
inline CheckRecord nonlocal_ode_check(double alpha, double beta, double lambda, bool unit_forcing,
                                      const NonlocalOdeOptions& opt) {
  const auto ord = FracOrder::make(alpha, beta);
  std::vector<double> c(static_cast<std::size_t>(ord.n), 0.0);
  c[0] = 1.0;
  std::optional<GridFunction> h;
  if (unit_forcing)
    h = GridFunction::sample([](double) { return 1.0; }, 0.0, opt.u_max, opt.grid_n);
  const auto sol = solve_nonlocal_ode(ord, lambda, c, h, opt.u_max, opt.grid_n);
  const auto r = nonlocal_ode_residual(sol, ord, lambda, h);
  double worst = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j)
    if (r.u(j) >= opt.u_lo)
      worst = std::max(worst, std::isfinite(r[j]) ? std::abs(r[j]) : INFINITY);
  return make_check("nonlocal_ode.residual",
                    {{"alpha", alpha}, {"beta", beta}, {"lambda", lambda},
                     {"h", unit_forcing ? 1.0 : 0.0}},
                    opt.u_max, worst, 0.0, opt.tol);
}

// ---------------------------------------------------------------------------
// Mellin rules
// ---------------------------------------------------------------------------

/// A decaying test function with its behaviour at the origin (f ~ u^a0) and
/// its exact Mellin transform.
struct MellinTestFunction {
  std::string name;
  std::function<double(double)> f;
  double a0;
  std::function<double(double)> exact;
};

inline std::vector<MellinTestFunction> mellin_battery() {
  return {
      {"exp(-u)", [](double u) { return std::exp(-u); }, 0.0,
       [](double s) { return gamma(s); }},
      {"u*exp(-u)", [](double u) { return u * std::exp(-u); }, 1.0,
       [](double s) { return gamma(s + 1.0); }},
      {"exp(-u^2)", [](double u) { return std::exp(-u * u); }, 0.0,
       [](double s) { return 0.5 * gamma(0.5 * s); }},
  };
}

struct MellinOptions {
  std::size_t grid_n = 1 << 14;
  double u_max = 40.0;
  std::size_t quad_n = 1 << 14; ///< log-grid nodes for callable transforms
  double shift_nu = 0.5;
  double kappa = 0.5;
  double tau = 0.5;
  std::vector<double> betas{0.5};
  double alpha = 1.0;
  double tol = 1e-2;
  unsigned jobs = 1;
};

namespace detail {

inline double mellin_of(const std::function<double(double)>& f, double sigma,
                        const MellinOptions& opt) {
  return fractal_mellin(f, MellinPoint{sigma}, TruncationPolicy{opt.u_max, 1e-10, 1e-6},
                        opt.quad_n)
      .value;
}

// Samples of the strip (lo, hi) at fixed fractions, so no sample sits on an
// endpoint.
inline std::vector<double> strip_samples(double lo, double hi) {
  return {lo + 0.3 * (hi - lo), lo + 0.7 * (hi - lo)};
}

inline bool gamma_args_ok(std::initializer_list<double> args) {
  return std::none_of(args.begin(), args.end(),
                      [](double x) { return is_nonpositive_integer(x, 1e-9); });
}

} // namespace detail

/// Shift, convolution, the scaled-convolution corollary, the n-th derivative
/// rule, and the RL integral / RL derivative / Caputo rules on the battery.
inline std::vector<CheckRecord> mellin_identity_suite(const MellinOptions& opt) {
  const auto battery = mellin_battery();
  const double big_u = opt.u_max;
  const std::size_t n = opt.grid_n;
  auto grid_of = [&](const std::function<double(double)>& f) {
    return GridFunction::sample(f, 0.0, big_u, n);
  };
  std::vector<std::function<std::vector<CheckRecord>()>> tasks;

  for (std::size_t fi = 0; fi < battery.size(); ++fi) {
    const auto& fn = battery[fi];

    // shift: M[u^ν f](σ) = M(σ+ν), the left side from u-grid samples
    tasks.emplace_back([&opt, fn, big_u, n] {
      std::vector<CheckRecord> out;
      const double nu = opt.shift_nu;
      const auto shifted = GridFunction::sample(
          [&](double u) { return std::pow(u, nu) * fn.f(u); }, 0.0, big_u, n);
      MellinHints hints;
      hints.origin_power = nu + fn.a0;
      for (double sigma : {0.5, 1.5}) {
        const MellinPoint p{sigma, -nu - fn.a0};
        out.push_back(make_check("mellin.shift", {{"nu", nu}}, sigma,
                                 fractal_mellin(shifted, p, hints).value,
                                 fn.exact(sigma + nu), opt.tol));
        out.back().identity += "[" + fn.name + "]";
      }
      return out;
    });

    // convolution with h ∈ {exp(-u), u exp(-u)}, and the corollary with κ, τ for h = exp(-u)
    for (std::size_t hi = 0; hi < 2; ++hi) {
      const auto hn = battery[hi];
      for (bool scaled : {false, true}) {
        if (scaled && hi != 0)
          continue;
        tasks.emplace_back([&opt, fn, hn, scaled, big_u, n] {
          const double kappa = scaled ? opt.kappa : 0.0;
          const double tau = scaled ? opt.tau : 0.0;
          const MellinConvolution quad(hn.f, kappa, tau);
          const auto conv =
              GridFunction::sample([&](double x) { return quad(fn.f, x); }, 0.0, big_u, n);
          MellinHints hints;
          hints.tail_power = kappa - 1.0 - tau - hn.a0;
          if (scaled)
            hints.origin_power = kappa + fn.a0;
          const double lo = -kappa - fn.a0;
          const double hi_s = 1.0 + hn.a0 + tau - kappa;
          std::vector<CheckRecord> out;
          const std::string id = std::string(scaled ? "mellin.scaled_convolution" : "mellin.convolution") +
                                 "[" + fn.name + "," + hn.name + "]";
          for (double sigma : detail::strip_samples(std::max(lo, 0.0), hi_s)) {
            const double lhs = fractal_mellin(conv, MellinPoint{sigma, lo, hi_s}, hints).value;
            const double rhs = detail::mellin_of(fn.f, sigma + kappa, opt) *
                               detail::mellin_of(hn.f, 1.0 - sigma - kappa + tau, opt);
            out.push_back(make_check(id, {{"kappa", kappa}, {"tau", tau}}, sigma, lhs, rhs, opt.tol));
          }
          return out;
        });
      }
    }

    // n-th derivative: Γ(1-σ+n)/Γ(1-σ) M(σ-n), σ > n
    tasks.emplace_back([&opt, fn, grid_of] {
      std::vector<CheckRecord> out;
      GridFunction d = grid_of(fn.f);
      for (int order = 1; order <= 2; ++order) {
        d = falpha_derivative(d);
        for (double sigma : {order + 0.5, order + 1.5}) {
          const double lhs = fractal_mellin(d, MellinPoint{sigma, double(order), INFINITY}).value;
          const double rhs = gamma(1.0 - sigma + order) / gamma(1.0 - sigma) *
                             detail::mellin_of(fn.f, sigma - order, opt);
          out.push_back(make_check("mellin.derivative[" + fn.name + "]", {{"n", double(order)}},
                                   sigma, lhs, rhs, opt.tol));
        }
      }
      return out;
    });

    for (double beta : opt.betas) {
      const auto ord = FracOrder::make(opt.alpha, beta);
      // RL integral: Γ(1-σ-β)/Γ(1-σ) M(σ+β), -β-a0 < σ < 1-β
      tasks.emplace_back([&opt, fn, grid_of, beta] {
        const auto g = rl_integral(grid_of(fn.f), beta);
        const MellinHints hints{beta + fn.a0, beta - 1.0};
        const double lo = -beta - fn.a0, hi = 1.0 - beta;
        std::vector<CheckRecord> out;
        const std::vector<Param> params{{"beta", beta}};
        for (double sigma : detail::strip_samples(lo, hi)) {
          const std::string id = "mellin.rl_integral[" + fn.name + "]";
          if (!detail::gamma_args_ok({1.0 - sigma - beta, 1.0 - sigma, sigma + beta + fn.a0})) {
            out.push_back(skipped_check(id, params, sigma));
            continue;
          }
          const double lhs = fractal_mellin(g, MellinPoint{sigma, lo, hi}, hints).value;
          const double rhs = gamma(1.0 - sigma - beta) / gamma(1.0 - sigma) *
                             detail::mellin_of(fn.f, sigma + beta, opt);
          out.push_back(make_check(id, params, sigma, lhs, rhs, opt.tol));
        }
        return out;
      });

      // RL derivative and Caputo: Γ(1-σ+β)/Γ(1-σ) M(σ-β); the variant with
      // Γ(1-σ-β) is reported as the erratum error.
      for (bool caputo : {false, true}) {
        tasks.emplace_back([&opt, fn, grid_of, ord, beta, caputo] {
          std::vector<CheckRecord> out;
          const std::vector<Param> params{{"alpha", ord.alpha}, {"beta", beta}};
          const std::string id =
              std::string(caputo ? "mellin.caputo" : "mellin.rl_derivative") + "[" + fn.name + "]";
          const double lo = caputo ? beta - 1.0 : beta - fn.a0;
          const double hi = beta + 1.0;
          if (caputo && fn.f(0.0) != 0.0) {
            // the rule drops the boundary term f(0)·u^(-β), so it needs f(0) = 0
            out.push_back(skipped_check(id, params, NAN));
            return out;
          }
          const auto grid = grid_of(fn.f);
          const auto g = caputo ? caputo_derivative(grid, ord) : rl_derivative(grid, ord);
          const MellinHints hints{fn.a0 - beta, -beta - 1.0};
          for (double sigma : detail::strip_samples(lo, hi)) {
            if (!detail::gamma_args_ok({1.0 - sigma + beta, 1.0 - sigma})) {
              out.push_back(skipped_check(id, params, sigma));
              continue;
            }
            const double m = detail::mellin_of(fn.f, sigma - beta, opt);
            const double lhs = fractal_mellin(g, MellinPoint{sigma, lo, hi}, hints).value;
            const double rhs = gamma(1.0 - sigma + beta) / gamma(1.0 - sigma) * m;
            std::optional<double> variant;
            if (detail::gamma_args_ok({1.0 - sigma - beta}))
              variant = rel_error(lhs, gamma(1.0 - sigma - beta) / gamma(1.0 - sigma) * m);
            out.push_back(make_check(id, params, sigma, lhs, rhs, opt.tol, variant));
          }
          return out;
        });
      }
    }
  }
  const auto parts = run_jobs(tasks, opt.jobs);
  std::vector<CheckRecord> out;
  for (const auto& part : parts)
    out.insert(out.end(), part.begin(), part.end());
  return out;
}

struct MellinOdeOptions {
  std::vector<double> sigmas{0.5, 1.0, 1.5, 2.5};
  double u_min = 1e-8;
  double u_max = 40.0;
  std::size_t quad_n = 1 << 14;
  double gamma_tol = 1e-4;
  double recurrence_tol = 1e-6;
  double deriv_u_max = 10.0;
  std::size_t deriv_grid_n = 1 << 14;
  double deriv_tol = 1e-6;
};

/// M[e^-u] = Γ, the recurrence M(σ) = (σ-1)M(σ-1) (printed form
/// M(σ-1) = σM(σ) as the erratum error), and the residual of D g + g.
inline std::vector<CheckRecord> mellin_ode_example_check(const MellinOdeOptions& opt) {
  const TruncationPolicy trunc{opt.u_max, opt.u_min, 1e-6};
  const auto samples =
      detail::sample_log([](double u) { return std::exp(-u); }, opt.u_min, opt.u_max, opt.quad_n);
  auto m = [&](double sigma) {
    MellinPoint{sigma, 0.0, INFINITY}.validate();
    auto v = detail::mellin_log(samples, sigma);
    detail::check_truncation(v, trunc.tail_tol, "mellin_ode_example_check");
    return v.value;
  };
  std::vector<CheckRecord> out;
  for (double sigma : opt.sigmas)
    out.push_back(make_check("mellin_ode.gamma", {}, sigma, m(sigma), gamma(sigma), opt.gamma_tol));
  for (double sigma : opt.sigmas) {
    if (!(sigma > 1.0))
      continue;
    const double lhs = m(sigma);
    const double rhs = (sigma - 1.0) * m(sigma - 1.0);
    out.push_back(make_check("mellin_ode.recurrence", {}, sigma, lhs, rhs, opt.recurrence_tol,
                             rel_error(m(sigma - 1.0), sigma * lhs)));
  }
  const auto g = GridFunction::sample([](double u) { return std::exp(-u); }, 0.0,
                                      opt.deriv_u_max, opt.deriv_grid_n);
  const auto d = falpha_derivative(g);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j)
    worst = std::max(worst, std::abs(d[j] + g[j]));
  out.push_back(make_check("mellin_ode.residual", {}, opt.deriv_u_max, worst, 0.0, opt.deriv_tol));
  return out;
}

// ---------------------------------------------------------------------------
// Worked examples on the supports
// ---------------------------------------------------------------------------

/// Staircase exactness: S(end) = Γ(α+1) on a self-similar set, J(end) =
/// 1/Γ(α+1) on a self-similar curve whose generator segments all have length
/// r with N·r^α = 1.
inline CheckRecord staircase_total_check(const Support& sup, double tol) {
  const double want = sup.kind == SupportKind::Set ? gamma(sup.alpha + 1.0)
                                                   : rgamma(sup.alpha + 1.0);
  return make_check(std::string("staircase.total[") + sup.column() + "]",
                    {{"alpha", sup.alpha}, {"depth", double(sup.depth)}}, 0.0,
                    sup.staircase.total(), want, tol);
}

/// D y = 2y - 4, y(0) = 5 on the support: sup |D y - 2y + 4| on the u-grid.
inline CheckRecord figure_example_check(const Support& sup, std::size_t grid_n, double tol) {
  const auto y = solve_linear_fractal_ode(2.0, -4.0, 5.0, sup.staircase, grid_n);
  const auto d = falpha_derivative(y, sup.staircase);
  double worst = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j)
    worst = std::max(worst, std::abs(d[j] - 2.0 * y[j] + 4.0));
  return make_check(std::string("example.linear_ode[") + sup.column() + "]",
                    {{"alpha", sup.alpha}, {"depth", double(sup.depth)}}, 0.0, worst, 0.0, tol);
}

/// (z, y) samples of y = 2 + 3 exp(2 S(z)) on n equispaced points of the
/// staircase domain.
inline std::vector<std::pair<double, double>> figure_example_samples(const Support& sup,
                                                                     std::size_t n) {
  if (n < 2)
    throw GridError("figure_example_samples: need n >= 2");
  const auto& s = sup.staircase;
  std::vector<std::pair<double, double>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = i + 1 == n ? s.domain_hi()
                                : s.domain_lo() + (s.domain_hi() - s.domain_lo()) *
                                                      static_cast<double>(i) /
                                                      static_cast<double>(n - 1);
    out[i] = {z, 2.0 + 3.0 * std::exp(2.0 * (s(z) - s.min_value()))};
  }
  return out;
}

/// I^β (u - u_a)^ν against Γ(ν+1)/Γ(β+ν+1)(u - u_a)^(β+ν) on [u_a, S_max].
inline CheckRecord power_rule_check(const Staircase& s, double alpha, double a_point, double nu,
                                    double beta, std::size_t grid_n, double tol) {
  const double ua = s(s.domain_lo() + a_point * (s.domain_hi() - s.domain_lo()));
  const double top = s.max_value();
  const auto g = to_grid([&](double z) { return std::pow(std::max(s(z) - ua, 0.0), nu); }, s,
                         grid_n, ua, top);
  const auto r = rl_integral(g, beta);
  const double c = gamma(nu + 1.0) * rgamma(beta + nu + 1.0);
  const double err =
      window_error(r, [&](double u) { return c * std::pow(u - ua, beta + nu); }, ua + 0.1 * (top - ua));
  auto rec = make_check("example.power_rule", {{"alpha", alpha}, {"nu", nu}, {"beta", beta}}, ua,
                        err, 0.0, tol);
  return rec;
}

} // namespace fractalcalc
