#pragma once

// Default verification batteries behind `fractalcalc verify`.

#include <cstdlib>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/io.hpp"
#include "fractalcalc/verification.hpp"

namespace fractalcalc {

struct SuiteConfig {
  std::vector<Support> supports; ///< empty: triadic Cantor (depth 10) and von Koch (gen 6)
  std::size_t table1_grid = 4096;
  unsigned jobs = 1;
};

struct SuiteResult {
  std::vector<Table1Row> table1;
  std::vector<CheckRecord> checks;

  bool passed() const { return all_passed(table1) && all_passed(checks); }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"table1", "table2", "laplace-ode", "mellin",
                                              "examples"};
  return names;
}

namespace detail {

inline std::vector<Support> default_supports(const SuiteConfig& cfg) {
  if (!cfg.supports.empty())
    return cfg.supports;
  return {build_support(load_support_spec("cantor")), build_support(load_support_spec("koch"))};
}

} // namespace detail

inline SuiteResult run_table1_suite(const SuiteConfig& cfg) {
  SuiteResult r;
  Table1Options opt;
  opt.grid_n = cfg.table1_grid;
  opt.tol = report_tolerance(opt.tol);
  opt.jobs = cfg.jobs;
  for (const auto& sup : detail::default_supports(cfg)) {
    auto rows = verify_table1(sup.staircase, sup.alpha, sup.column(), opt);
    r.table1.insert(r.table1.end(), rows.begin(), rows.end());
  }
  return r;
}

inline SuiteResult run_table2_suite(const SuiteConfig& cfg) {
  Table2Options opt;
  opt.tol = report_tolerance(opt.tol);
  opt.jobs = cfg.jobs;
  return {{}, verify_table2(opt)};
}

/// Laplace rules for the RL/Caputo operators on powers, and the non-local ODE.
inline SuiteResult run_laplace_ode_suite(const SuiteConfig& cfg) {
  const double tol = report_tolerance(1e-3);
  const double alpha = 0.63; // β = 0.5 gives n = 1, β = 0.75 gives n = 2
  const std::vector<LaplacePoint> points{{1.5}, {2.5}, {4.0}};
  std::vector<std::function<std::vector<CheckRecord>()>> tasks;
  for (double m : {1.0, 2.0, 3.0})
    for (double beta : {0.5, 0.75})
      tasks.emplace_back([=] {
        return laplace_rl_identity_check(PowerSum{0.0, {{1.0, m}}}, FracOrder::make(alpha, beta),
                                         points, 40.0, 1 << 14, tol);
      });
  tasks.emplace_back([=] {
    return laplace_rl_identity_check(PowerSum{0.0, {{1.0, 0.0}}}, FracOrder::make(alpha, 0.5),
                                     points, 40.0, 1 << 14, tol);
  });
  NonlocalOdeOptions ode;
  ode.tol = report_tolerance(ode.tol);
  for (auto [beta, lambda] : {std::pair{0.6, 0.5}, std::pair{0.5, -1.0}})
    for (bool forcing : {false, true})
      tasks.emplace_back([=] {
        return std::vector<CheckRecord>{nonlocal_ode_check(1.0, beta, lambda, forcing, ode)};
      });
  SuiteResult r;
  for (auto& part : run_jobs(tasks, cfg.jobs))
    r.checks.insert(r.checks.end(), part.begin(), part.end());
  return r;
}

inline SuiteResult run_mellin_suite(const SuiteConfig& cfg) {
  MellinOptions opt;
  opt.tol = report_tolerance(opt.tol);
  opt.jobs = cfg.jobs;
  SuiteResult r{{}, mellin_identity_suite(opt)};
  MellinOdeOptions ode;
  if (std::getenv("FRACTALCALC_TOL") != nullptr)
    ode.gamma_tol = ode.recurrence_tol = ode.deriv_tol = report_tolerance(ode.gamma_tol);
  auto more = mellin_ode_example_check(ode);
  r.checks.insert(r.checks.end(), more.begin(), more.end());
  return r;
}

/// Staircase totals, the first-order example on both supports, and the
/// power rule from a lower limit a.
inline SuiteResult run_examples_suite(const SuiteConfig& cfg) {
  SuiteResult r;
  const double total_tol = report_tolerance(1e-12);
  for (int depth = 1; depth <= 12; ++depth) {
    auto spec = load_support_spec("cantor");
    spec.depth = depth;
    r.checks.push_back(staircase_total_check(build_support(spec), total_tol));
  }
  for (int gen = 1; gen <= 8; ++gen) {
    auto spec = load_support_spec("koch");
    spec.depth = gen;
    r.checks.push_back(staircase_total_check(build_support(spec), total_tol));
  }
  const double ode_tol = report_tolerance(1e-3);
  const auto supports = detail::default_supports(cfg);
  for (const auto& sup : supports)
    r.checks.push_back(figure_example_check(sup, 4096, ode_tol));
  std::vector<std::function<CheckRecord()>> tasks;
  const Support& set = supports.front();
  for (double nu : {0.5, 1.0, 2.0})
    for (double beta : {0.3, 0.6})
      tasks.emplace_back([&set, nu, beta, ode_tol] {
        return power_rule_check(set.staircase, set.alpha, 0.25, nu, beta, 1 << 13, ode_tol);
      });
  for (auto& c : run_jobs(tasks, cfg.jobs))
    r.checks.push_back(std::move(c));
  return r;
}

inline SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "table1")
    return run_table1_suite(cfg);
  if (name == "table2")
    return run_table2_suite(cfg);
  if (name == "laplace-ode")
    return run_laplace_ode_suite(cfg);
  if (name == "mellin")
    return run_mellin_suite(cfg);
  if (name == "examples")
    return run_examples_suite(cfg);
  throw SpecError("unknown suite '" + name + "'");
}

} // namespace fractalcalc
