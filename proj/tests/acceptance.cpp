// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fractalcalc/fractalcalc.hpp"

namespace fc = fractalcalc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& what, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", n, what.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.ok)
    ++failures;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double worst_of(const std::vector<fc::CheckRecord>& v) {
  double w = 0.0;
  for (const auto& r : v)
    if (r.status != "skipped")
      w = std::max(w, r.rel_err);
  return w;
}

std::size_t count_failed(const std::vector<fc::CheckRecord>& v) {
  std::size_t n = 0;
  for (const auto& r : v)
    n += r.failed();
  return n;
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

fc::Support support(const char* name, int depth = -1) {
  auto spec = fc::load_support_spec(name);
  if (depth >= 0)
    spec.depth = depth;
  return fc::build_support(spec);
}

template <class F>
double window_rel(const fc::GridFunction& got, F&& want, double u_lo) {
  return fc::window_error(got, want, u_lo);
}

fc::GridFunction power(double p, double u_end, std::size_t n) {
  return fc::GridFunction::sample([p](double u) { return std::pow(u, p); }, 0.0, u_end, n);
}

Outcome staircases() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool ok = true;
  for (int d = 1; d <= 12; ++d) {
    const auto r = fc::staircase_total_check(support("cantor", d), 1e-12);
    ok &= !r.failed();
    worst = std::max(worst, r.rel_err);
  }
  for (int g = 1; g <= 8; ++g) {
    const auto r = fc::staircase_total_check(support("koch", g), 1e-12);
    ok &= !r.failed();
    worst = std::max(worst, r.rel_err);
  }
  const double t = seconds_since(t0);
  return {ok && t < 1.0, "max rel err " + num(worst) + ", " + num(t) + " s"};
}

Outcome table1() {
  const auto t0 = Clock::now();
  fc::Table1Options opt;
  opt.grid_n = 1 << 12;
  double worst = 0.0, tail = 0.0;
  std::size_t rows = 0, bad = 0;
  for (const char* name : {"cantor", "koch"}) {
    const auto sup = support(name);
    for (const auto& r : fc::verify_table1(sup.staircase, sup.alpha, sup.column(), opt)) {
      ++rows;
      worst = std::max(worst, r.max_rel_err);
      if (r.row >= 7)
        tail = std::max(tail, r.tail_bound);
      bad += r.failed() || r.max_rel_err > 1e-3;
    }
  }
  const double t = seconds_since(t0);
  return {bad == 0 && tail <= 1e-6 && t < 30.0,
          std::to_string(rows) + " rows, " + std::to_string(bad) + " failed, max err " + num(worst) +
              ", tail " + num(tail) + ", " + num(t) + " s"};
}

Outcome power_rule() {
  double worst = 0.0;
  bool ok = true;
  for (const char* name : {"cantor", "koch"}) {
    const auto sup = support(name);
    for (double nu : {0.5, 1.0, 2.0})
      for (double beta : {0.3, 0.6}) {
        const auto r = fc::power_rule_check(sup.staircase, sup.alpha, 0.25, nu, beta, 1 << 13, 1e-3);
        ok &= !r.failed();
        worst = std::max(worst, r.lhs);
      }
  }
  return {ok, "max rel err " + num(worst)};
}

Outcome table2() {
  const auto t0 = Clock::now();
  fc::Table2Options opt;
  const auto v = fc::verify_table2(opt);
  bool has_row7 = false;
  for (const auto& r : v)
    has_row7 |= r.identity == "table2.row7";
  const double t = seconds_since(t0);
  return {count_failed(v) == 0 && has_row7 && t < 60.0,
          std::to_string(v.size()) + " checks, " + std::to_string(count_failed(v)) +
              " failed, max err " + num(worst_of(v)) + ", " + num(t) + " s"};
}

Outcome laplace_rules() {
  const std::vector<fc::LaplacePoint> points{{1.5}, {2.5}, {4.0}};
  std::vector<fc::CheckRecord> all;
  for (double m : {1.0, 2.0, 3.0})
    for (double beta : {0.5, 0.75}) {
      auto v = fc::laplace_rl_identity_check(fc::PowerSum{0.0, {{1.0, m}}},
                                             fc::FracOrder::make(0.63, beta), points, 40.0, 1 << 14,
                                             1e-3);
      all.insert(all.end(), v.begin(), v.end());
    }
  std::size_t rl = 0, cap = 0;
  double printed = INFINITY;
  for (const auto& r : all) {
    rl += r.identity == "laplace.rl_derivative" && r.status == "pass";
    cap += r.identity == "laplace.caputo" && r.status == "pass";
    if (r.identity == "laplace.rl_integral")
      printed = std::min(printed, r.erratum_err.value_or(0.0));
  }
  return {count_failed(all) == 0 && rl > 0 && cap > 0 && printed > 0.1,
          std::to_string(all.size()) + " checks, max residual " + num(worst_of(all)) +
              ", printed-exponent variant min residual " + num(printed)};
}

Outcome nonlocal() {
  fc::NonlocalOdeOptions opt;
  double worst = 0.0;
  bool ok = true;
  for (auto [beta, lambda] : {std::pair{0.6, 0.5}, std::pair{0.5, -1.0}})
    for (bool h : {false, true}) {
      const auto r = fc::nonlocal_ode_check(1.0, beta, lambda, h, opt);
      ok &= !r.failed();
      worst = std::max(worst, r.lhs);
    }
  return {ok, "sup residual " + num(worst) + " on [" + num(opt.u_lo) + ", " + num(opt.u_max) + "]"};
}

Outcome mellin_rules() {
  fc::MellinOptions opt;
  const auto v = fc::mellin_identity_suite(opt);
  bool ok = count_failed(v) == 0;
  std::vector<std::string> needed{"mellin.shift",          "mellin.convolution",
                                  "mellin.scaled_convolution", "mellin.derivative",
                                  "mellin.rl_integral",    "mellin.rl_derivative",
                                  "mellin.caputo"};
  for (const auto& id : needed) {
    bool seen = false;
    for (const auto& r : v)
      seen |= starts_with(r.identity, id) && r.status == "pass";
    ok &= seen;
  }
  std::size_t variants = 0;
  double variant_min = INFINITY;
  for (const auto& r : v)
    if (r.erratum_err && r.status == "pass") {
      ++variants;
      variant_min = std::min(variant_min, *r.erratum_err);
    }
  ok &= variants > 0 && variant_min > opt.tol;
  return {ok, std::to_string(v.size()) + " checks, " + std::to_string(count_failed(v)) +
                  " failed, max err " + num(worst_of(v)) + ", " + std::to_string(variants) +
                  " statement variants reported (min residual " + num(variant_min) + ")"};
}

Outcome mellin_ode() {
  const auto v = fc::mellin_ode_example_check(fc::MellinOdeOptions{});
  return {count_failed(v) == 0 && v.size() >= 6,
          std::to_string(v.size()) + " checks, max err " + num(worst_of(v))};
}

Outcome figures() {
  bool ok = true;
  double worst = 0.0;
  for (const char* name : {"cantor", "koch"}) {
    const auto sup = support(name);
    const auto pts = fc::figure_example_samples(sup, 4096);
    ok &= pts.front().second == 5.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      ok &= pts[i].second >= pts[i - 1].second;
      if (sup.staircase(pts[i].first) == sup.staircase(pts[i - 1].first))
        ok &= pts[i].second == pts[i - 1].second;
    }
    const auto r = fc::figure_example_check(sup, 1 << 12, 1e-3);
    ok &= !r.failed();
    worst = std::max(worst, r.lhs);
  }
  return {ok, "max |D y - 2y + 4| " + num(worst)};
}

Outcome properties() {
  std::vector<std::string> bad;
  // special functions
  {
    bool ok = true;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(0.1, 20.0), e(0.5, 2.0), xx(-3.0, 5.0);
    for (int i = 0; i < 100; ++i) {
      const double x = d(rng);
      ok &= fc::rel_error(fc::gamma(x + 1.0), x * fc::gamma(x)) < 1e-13;
      const double y = 0.3 + std::fmod(x, 4.0);
      ok &= fc::beta(x, y) == fc::beta(y, x);
      const double eta = e(rng), mu = e(rng), z = xx(rng);
      const double lhs = fc::mittag_leffler(eta, mu, z);
      ok &= std::abs(lhs - fc::rgamma(mu) - z * fc::mittag_leffler(eta, mu + eta, z)) <=
            1e-11 * std::max(1.0, std::abs(lhs));
    }
    for (double x : {-0.5, -1.3, -2.7})
      ok &= fc::rel_error(fc::gamma(x), M_PI / (std::sin(M_PI * x) * fc::gamma(1.0 - x))) < 1e-13;
    if (!ok)
      bad.push_back("special functions");
  }
  // semigroup on powers
  {
    bool ok = true;
    for (double p : {1.0, 2.0})
      for (auto [a, b] : {std::pair{0.3, 0.4}, std::pair{0.5, 0.5}, std::pair{0.25, 1.1}}) {
        const auto g = power(p, 2.0, 4097);
        const auto two = fc::rl_integral(fc::rl_integral(g, a), b);
        const auto one = fc::rl_integral(g, a + b);
        const double c = fc::gamma(p + 1.0) / fc::gamma(p + a + b + 1.0);
        auto exact = [&](double u) { return c * std::pow(u, p + a + b); };
        ok &= window_rel(two, exact, 0.2) < 1e-4 && window_rel(one, exact, 0.2) < 1e-5;
      }
    if (!ok)
      bad.push_back("semigroup");
  }
  // left/right mirror
  {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::vector<double> s(513);
    for (double& x : s)
      x = c(rng);
    const fc::GridFunction g(0.0, 1.0 / 512, s);
    const fc::GridFunction m(0.0, 1.0 / 512, std::vector<double>(s.rbegin(), s.rend()));
    const auto ord = fc::FracOrder::make(1.0, 0.4);
    const auto r = fc::rl_integral(g, ord, fc::Side::Right);
    const auto l = fc::rl_integral(m, ord, fc::Side::Left);
    bool ok = true;
    for (std::size_t j = 0; j < s.size(); ++j)
      ok &= r[j] == l[s.size() - 1 - j];
    if (!ok)
      bad.push_back("mirror");
  }
  // linearity
  {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    const auto f = power(1.5, 1.0, 801);
    const auto h = fc::GridFunction::sample([](double u) { return std::sin(4 * u); }, 0.0, 1.0, 801);
    const auto ord = fc::FracOrder::make(1.0, 0.35);
    const auto df = fc::rl_derivative(f, ord), dh = fc::rl_derivative(h, ord);
    bool ok = true;
    for (int i = 0; i < 5; ++i) {
      const double a = c(rng), b = c(rng);
      std::vector<double> mix(f.size());
      for (std::size_t j = 0; j < mix.size(); ++j)
        mix[j] = a * f[j] + b * h[j];
      const auto lhs = fc::rl_derivative(f.with_samples(mix), ord);
      for (std::size_t j = 1; j < mix.size(); ++j)
        ok &= std::abs(lhs[j] - a * df[j] - b * dh[j]) <= 1e-10 * (1 + std::abs(lhs[j]));
    }
    if (!ok)
      bad.push_back("linearity");
  }
  // grid doubling 2^12 -> 2^15
  {
    bool ok = true;
    double prev_i = INFINITY, prev_d = INFINITY;
    const double c_i = fc::gamma(1.5) / fc::gamma(2.1), c_d = fc::gamma(2.5) / fc::gamma(1.9);
    for (std::size_t n : {4097, 8193, 16385, 32769}) {
      const double ei = window_rel(fc::rl_integral(power(0.5, 1.0, n), 0.6),
                                   [&](double u) { return c_i * std::pow(u, 1.1); }, 0.1);
      const double ed = window_rel(fc::rl_derivative(power(1.5, 1.0, n), fc::FracOrder::make(1.0, 0.6)),
                                   [&](double u) { return c_d * std::pow(u, 0.9); }, 0.1);
      ok &= ei < prev_i && ed < prev_d;
      prev_i = ei;
      prev_d = ed;
    }
    if (!ok)
      bad.push_back("grid doubling");
  }
  // verify all
  const auto t0 = Clock::now();
  std::size_t failed_suites = 0;
  for (const auto& name : fc::suite_names())
    failed_suites += !fc::run_suite(name, fc::SuiteConfig{}).passed();
  const double t = seconds_since(t0);
  if (failed_suites)
    bad.push_back(std::to_string(failed_suites) + " verify suites");
  if (t >= 300.0)
    bad.push_back("verify all too slow");
  std::string detail = bad.empty() ? "all properties hold" : "broken:";
  for (const auto& b : bad)
    detail += " " + b;
  return {bad.empty(), detail + ", verify all " + num(t) + " s"};
}

} // namespace

int main() {
  report(1, "staircase totals", staircases);
  report(2, "operator table on set and curve", table1);
  report(3, "power rule from a lower limit", power_rule);
  report(4, "Laplace table and Mittag-Leffler rule", table2);
  report(5, "Laplace rules for RL and Caputo operators", laplace_rules);
  report(6, "non-local ODE residual", nonlocal);
  report(7, "Mellin rules", mellin_rules);
  report(8, "Mellin ODE example", mellin_ode);
  report(9, "first-order example on both supports", figures);
  report(10, "properties and full verification", properties);
  return failures == 0 ? 0 : 1;
}
