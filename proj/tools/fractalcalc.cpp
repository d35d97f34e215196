// fractalcalc: staircases, operators, transforms and the verification battery
// from the command line. Every data file is CSV with a header row.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fractalcalc/fractalcalc.hpp"

namespace fc = fractalcalc;
namespace fs = std::filesystem;

namespace {

struct Config {
  std::string spec = "cantor";
  std::optional<int> depth;
  std::string alpha = "auto";
  double beta = 0.5;
  std::size_t grid = 4096;
  double umax = 60.0;
  std::string out = ".";
  unsigned jobs = 1;

  std::string func = "power:1";
  std::string in;
  std::string side = "left";
  std::vector<double> points;
  double lambda = 0.5;
  std::vector<double> c{1.0};
  std::string forcing = "zero";
  std::vector<std::string> suites;
};

fc::SupportSpec spec_from(const Config& cfg, const std::string& which) {
  auto spec = fc::load_support_spec(which);
  if (cfg.depth)
    spec.depth = *cfg.depth;
  if (cfg.alpha != "auto")
    spec.alpha = fc::parse_number(cfg.alpha);
  return spec;
}

fc::Support support_from(const Config& cfg) { return fc::build_support(spec_from(cfg, cfg.spec)); }

std::ofstream open_out(const Config& cfg, const std::string& file) {
  fs::create_directories(cfg.out);
  const fs::path path = fs::path(cfg.out) / file;
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw fc::Error("cannot write " + path.string());
  std::cout << "wrote " << path.string() << '\n';
  return out;
}

/// Functions of the staircase coordinate, measured from the start of the grid:
/// power:P, exp:L, cos, one, gauss (e^{-u²}), uexp (u·e^{-u}).
std::function<double(double)> parse_function(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const double arg = colon == std::string::npos ? 1.0 : fc::parse_number(text.substr(colon + 1));
  if (name == "power")
    return [arg](double u) { return std::pow(u, arg); };
  if (name == "exp")
    return [arg](double u) { return std::exp(arg * u); };
  if (name == "cos")
    return [](double u) { return std::cos(u); };
  if (name == "one")
    return [](double) { return 1.0; };
  if (name == "gauss")
    return [](double u) { return std::exp(-u * u); };
  if (name == "uexp")
    return [](double u) { return u * std::exp(-u); };
  throw fc::SpecError("unknown function '" + text + "'");
}

/// The operator input: a `u,g` CSV when --in is given, otherwise --func
/// transported through the support's staircase.
fc::GridFunction operator_input(const Config& cfg) {
  if (!cfg.in.empty()) {
    std::ifstream in(cfg.in);
    if (!in)
      throw fc::Error("cannot open " + cfg.in);
    return fc::read_grid_csv(in);
  }
  const auto sup = support_from(cfg);
  const auto f = parse_function(cfg.func);
  const auto& s = sup.staircase;
  const double lo = s.min_value();
  return fc::to_grid([&](double z) { return f(s(z) - lo); }, s, cfg.grid);
}

fc::Side parse_side(const std::string& side) {
  if (side == "left")
    return fc::Side::Left;
  if (side == "right")
    return fc::Side::Right;
  throw fc::SpecError("side must be left or right");
}

double operator_alpha(const Config& cfg) {
  if (cfg.alpha != "auto")
    return fc::parse_number(cfg.alpha);
  if (!cfg.in.empty())
    return 1.0;
  return support_from(cfg).alpha;
}

int cmd_staircase(const Config& cfg) {
  const auto sup = support_from(cfg);
  const bool set = sup.kind == fc::SupportKind::Set;
  auto out = open_out(cfg, sup.name + "_staircase.csv");
  fc::write_staircase_csv(out, sup.staircase, set ? "S" : "J");
  const auto dim = set ? fc::estimate_dimension(*sup.set) : fc::estimate_dimension(*sup.curve);
  std::printf("support %s (%s), depth %d, alpha %.17g\n", sup.name.c_str(), sup.column(), sup.depth,
              sup.alpha);
  std::printf("total mass %.17g\n", sup.staircase.total());
  std::printf("dimension estimate %.17g (similarity %.17g)\n", dim.estimate, dim.similarity);
  return 0;
}

int cmd_solve_example(const Config& cfg, bool spec_given) {
  std::vector<std::string> which;
  if (spec_given)
    which.push_back(cfg.spec);
  else
    which = {"cantor", "koch"};
  for (const auto& w : which) {
    const auto sup = fc::build_support(spec_from(cfg, w));
    const bool set = sup.kind == fc::SupportKind::Set;
    auto out = open_out(cfg, set ? "fig1_" + sup.name + ".csv" : "fig2_" + sup.name + ".csv");
    out << (set ? "z,y\n" : "t,y\n");
    for (const auto& [z, y] : fc::figure_example_samples(sup, cfg.grid))
      out << fc::fmt17(z) << ',' << fc::fmt17(y) << '\n';
    const auto check = fc::figure_example_check(sup, cfg.grid, fc::report_tolerance(1e-3));
    std::printf("%s: sup |D y - 2y + 4| = %.3e (%s)\n", sup.name.c_str(), check.lhs,
                check.status.c_str());
  }
  return 0;
}

int cmd_operator(const Config& cfg, const std::string& name) {
  const auto g = operator_input(cfg);
  const auto side = parse_side(cfg.side);
  std::optional<fc::GridFunction> r;
  if (name == "deriv") {
    r = fc::falpha_derivative(g);
  } else if (name == "integrate") {
    r = fc::cumulative_integral(g);
    const auto total = fc::integrate_u(g, g.u0(), g.u_end());
    std::printf("integral %.17g  lower %.17g  upper %.17g\n", total.value, total.lower, total.upper);
  } else {
    const auto ord = fc::FracOrder::make(operator_alpha(cfg), cfg.beta);
    if (name == "rl-int")
      r = fc::rl_integral(g, ord, side);
    else if (name == "rl-deriv")
      r = fc::rl_derivative(g, ord, side);
    else
      r = fc::caputo_derivative(g, ord, side);
  }
  auto out = open_out(cfg, name + ".csv");
  fc::write_grid_csv(out, *r);
  return 0;
}

int cmd_transform(const Config& cfg, bool laplace) {
  std::vector<double> pts = cfg.points;
  if (pts.empty())
    pts = laplace ? std::vector<double>{1.5, 2.0, 3.0, 4.0} : std::vector<double>{0.5, 1.0, 1.5};
  auto out = open_out(cfg, laplace ? "laplace.csv" : "mellin.csv");
  out << (laplace ? "us" : "sigma") << ",value,head_bound,tail_bound\n";
  std::optional<fc::GridFunction> grid;
  if (!cfg.in.empty())
    grid = operator_input(cfg);
  const auto f = grid ? std::function<double(double)>{} : parse_function(cfg.func);
  for (double p : pts) {
    fc::TransformValue v{};
    if (laplace) {
      const fc::TruncationPolicy trunc{grid ? grid->u_end() : cfg.umax, 1e-16,
                                       fc::report_tolerance(1e-6)};
      v = grid ? fc::fractal_laplace(*grid, fc::LaplacePoint{p}, trunc)
               : fc::fractal_laplace(f, fc::LaplacePoint{p}, trunc);
    } else {
      v = grid ? fc::fractal_mellin(*grid, fc::MellinPoint{p})
               : fc::fractal_mellin(f, fc::MellinPoint{p},
                                    fc::TruncationPolicy{cfg.umax, 1e-10,
                                                         fc::report_tolerance(1e-6)});
    }
    out << fc::fmt17(p) << ',' << fc::fmt17(v.value) << ',' << fc::fmt17(v.head_bound) << ','
        << fc::fmt17(v.tail_bound) << '\n';
  }
  return 0;
}

int cmd_solve_nonlocal(const Config& cfg) {
  const double alpha = cfg.alpha == "auto" ? 1.0 : fc::parse_number(cfg.alpha);
  const auto ord = fc::FracOrder::make(alpha, cfg.beta);
  std::optional<fc::GridFunction> h;
  if (cfg.forcing == "one")
    h = fc::GridFunction::sample([](double) { return 1.0; }, 0.0, cfg.umax, cfg.grid);
  else if (cfg.forcing != "zero")
    throw fc::SpecError("--forcing must be zero or one");
  const auto sol = fc::solve_nonlocal_ode(ord, cfg.lambda, cfg.c, h, cfg.umax, cfg.grid);
  auto out = open_out(cfg, "nonlocal.csv");
  fc::write_grid_csv(out, sol.y, "y");
  return 0;
}

int cmd_verify(const Config& cfg, bool spec_given) {
  std::vector<std::string> suites;
  for (const auto& s : cfg.suites) {
    if (s == "all")
      suites.insert(suites.end(), fc::suite_names().begin(), fc::suite_names().end());
    else
      suites.push_back(s);
  }
  if (suites.empty())
    suites = fc::suite_names();
  fc::SuiteConfig sc;
  sc.table1_grid = cfg.grid;
  sc.jobs = cfg.jobs;
  if (spec_given)
    sc.supports.push_back(support_from(cfg));
  bool ok = true;
  for (const auto& name : suites) {
    const auto r = fc::run_suite(name, sc);
    std::string file = name;
    for (auto& ch : file)
      if (ch == '-')
        ch = '_';
    auto out = open_out(cfg, file + ".csv");
    if (name == "table1")
      fc::write_table1_csv(out, r.table1);
    else
      fc::write_checks_csv(out, r.checks);
    std::size_t failed = 0, skipped = 0, total = r.table1.size() + r.checks.size();
    for (const auto& t : r.table1)
      failed += t.failed();
    for (const auto& c : r.checks) {
      failed += c.failed();
      skipped += c.status == "skipped";
    }
    std::printf("%-12s %4zu checks  %zu failed  %zu skipped\n", name.c_str(), total, failed,
                skipped);
    ok = ok && r.passed();
  }
  return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractal calculus on self-similar sets and curves"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--spec", cfg.spec, "support spec file, or cantor / koch");
    sub->add_option("--depth", cfg.depth, "approximation depth (generation for curves)")
        ->check(CLI::Range(0, 40));
    sub->add_option("--alpha", cfg.alpha, "order: auto or a number");
    sub->add_option("--grid", cfg.grid, "grid nodes")->check(CLI::Range(64, 1 << 24));
    sub->add_option("--out", cfg.out, "output directory");
  };
  auto op_flags = [&](CLI::App* sub) {
    sub->add_option("--func", cfg.func, "power:P, exp:L, cos, one, gauss or uexp");
    sub->add_option("--in", cfg.in, "input grid function CSV (u,g)");
  };

  auto* staircase = app.add_subcommand("staircase", "dump the staircase or rise function");
  common(staircase);
  auto* example = app.add_subcommand("solve-example", "D y = 2y - 4, y(0) = 5 on the supports");
  common(example);

  std::vector<std::pair<std::string, CLI::App*>> ops;
  for (const auto& [name, help] :
       std::vector<std::pair<std::string, std::string>>{
           {"deriv", "local derivative"},
           {"integrate", "running local integral"},
           {"rl-int", "Riemann-Liouville integral"},
           {"rl-deriv", "Riemann-Liouville derivative"},
           {"caputo", "Caputo derivative"}}) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    op_flags(sub);
    if (name != "deriv" && name != "integrate") {
      sub->add_option("--beta", cfg.beta, "operator order");
      sub->add_option("--side", cfg.side, "left or right");
    }
    ops.emplace_back(name, sub);
  }

  auto* laplace = app.add_subcommand("laplace", "Laplace transform at u_s values");
  auto* mellin = app.add_subcommand("mellin", "Mellin transform at sigma values");
  for (auto* sub : {laplace, mellin}) {
    sub->add_option("--func", cfg.func, "power:P, exp:L, cos, one, gauss or uexp");
    sub->add_option("--in", cfg.in, "input grid function CSV (u,g)");
    sub->add_option("--at", cfg.points, "transform variable values");
    sub->add_option("--umax", cfg.umax, "upper integration limit");
    sub->add_option("--out", cfg.out, "output directory");
  }

  auto* nonlocal = app.add_subcommand("solve-nonlocal", "D^beta y - lambda y = h in closed form");
  nonlocal->add_option("--alpha", cfg.alpha, "support order (auto means 1)");
  nonlocal->add_option("--beta", cfg.beta, "operator order");
  nonlocal->add_option("--lambda", cfg.lambda, "lambda");
  nonlocal->add_option("--c", cfg.c, "initial values c_1..c_n");
  nonlocal->add_option("--forcing", cfg.forcing, "right-hand side h: zero or one");
  nonlocal->add_option("--umax", cfg.umax, "grid end");
  nonlocal->add_option("--grid", cfg.grid, "grid nodes")->check(CLI::Range(64, 1 << 24));
  nonlocal->add_option("--out", cfg.out, "output directory");

  auto* verify = app.add_subcommand("verify", "run verification suites; exit 0 iff all pass");
  common(verify);
  verify->add_option("suite", cfg.suites, "table1, table2, laplace-ode, mellin, examples or all")
      ->check(CLI::IsMember({"table1", "table2", "laplace-ode", "mellin", "examples", "all"}));
  verify->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::Range(1u, 256u));

  CLI11_PARSE(app, argc, argv);

  try {
    if (staircase->parsed())
      return cmd_staircase(cfg);
    if (example->parsed())
      return cmd_solve_example(cfg, example->count("--spec") > 0);
    for (const auto& [name, sub] : ops)
      if (sub->parsed())
        return cmd_operator(cfg, name);
    if (laplace->parsed())
      return cmd_transform(cfg, true);
    if (mellin->parsed())
      return cmd_transform(cfg, false);
    if (nonlocal->parsed())
      return cmd_solve_nonlocal(cfg);
    if (verify->parsed())
      return cmd_verify(cfg, verify->count("--spec") > 0);
  } catch (const fc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
