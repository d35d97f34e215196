#pragma once

// Support spec files, CSV formatting and the FRACTALCALC_TOL override.
//
// Spec files are key=value lines; '#' starts a comment. Numbers may be
// written as fractions ("1/3").
//
//   kind=set                        kind=curve
//   maps=1/3:0, 1/3:2/3             generator=0,0; 1/3,0; 0.5,0.2886751345948129; 2/3,0; 1,0
//   depth=10                        depth=6
//   alpha=auto                      alpha=auto

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/fractal_support.hpp"

namespace fractalcalc {

enum class SupportKind { Set, Curve };

struct SupportSpec {
  SupportKind kind = SupportKind::Set;
  std::string name;
  IfsSetSpec set;
  CurveGeneratorSpec curve;
  int depth = 10;
  std::optional<double> alpha; ///< empty means auto
};

/// A built support: the staircase (set) or rise function (curve) plus the
/// approximation it came from.
struct Support {
  SupportKind kind;
  std::string name;
  double alpha;
  int depth;
  Staircase staircase;
  std::optional<FractalSetApprox> set;
  std::optional<FractalCurveApprox> curve;

  const char* column() const { return kind == SupportKind::Set ? "set" : "curve"; }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    out.push_back(trim(item));
  return out;
}

} // namespace detail

/// Parses "0.25", "-1e-3" or "2/3".
inline double parse_number(const std::string& text) {
  const std::string t = detail::trim(text);
  const auto slash = t.find('/');
  auto one = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw SpecError("not a number: '" + text + "'");
    }
    if (used != part.size())
      throw SpecError("not a number: '" + text + "'");
    return v;
  };
  if (slash == std::string::npos)
    return one(t);
  const double den = one(detail::trim(t.substr(slash + 1)));
  if (den == 0.0)
    throw SpecError("zero denominator in '" + text + "'");
  return one(detail::trim(t.substr(0, slash))) / den;
}

inline SupportSpec parse_support_spec(std::istream& in, const std::string& name = "spec") {
  SupportSpec spec;
  spec.name = name;
  bool have_kind = false, have_maps = false, have_gen = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecError(name + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key == "kind") {
      if (val == "set")
        spec.kind = SupportKind::Set;
      else if (val == "curve")
        spec.kind = SupportKind::Curve;
      else
        throw SpecError(name + ": kind must be set or curve");
      have_kind = true;
    } else if (key == "maps") {
      spec.set.maps.clear();
      for (const auto& item : detail::split(val, ',')) {
        const auto parts = detail::split(item, ':');
        if (parts.size() != 2)
          throw SpecError(name + ": maps entries are ratio:offset");
        spec.set.maps.push_back({parse_number(parts[0]), parse_number(parts[1])});
      }
      have_maps = true;
    } else if (key == "generator") {
      spec.curve.generator.clear();
      for (const auto& item : detail::split(val, ';')) {
        Point p;
        for (const auto& c : detail::split(item, ','))
          p.push_back(parse_number(c));
        spec.curve.generator.push_back(std::move(p));
      }
      have_gen = true;
    } else if (key == "depth") {
      const double d = parse_number(val);
      if (d != std::floor(d) || d < 0 || d > 40)
        throw SpecError(name + ": depth must be an integer in [0, 40]");
      spec.depth = static_cast<int>(d);
    } else if (key == "alpha") {
      if (val == "auto")
        spec.alpha.reset();
      else
        spec.alpha = parse_number(val);
    } else if (key == "name") {
      spec.name = val;
    } else {
      throw SpecError(name + ": unknown key '" + key + "'");
    }
  }
  if (!have_kind)
    throw SpecError(name + ": missing kind=");
  if (spec.kind == SupportKind::Set && !have_maps)
    throw SpecError(name + ": kind=set needs maps=");
  if (spec.kind == SupportKind::Curve && !have_gen)
    throw SpecError(name + ": kind=curve needs generator=");
  spec.set.name = spec.name;
  spec.curve.name = spec.name;
  return spec;
}

/// Built-in specs "cantor" and "koch"; anything else is read as a file.
inline SupportSpec load_support_spec(const std::string& path_or_name) {
  if (path_or_name == "cantor") {
    SupportSpec s;
    s.kind = SupportKind::Set;
    s.name = "cantor";
    s.set = IfsSetSpec::triadic_cantor();
    s.depth = 10;
    return s;
  }
  if (path_or_name == "koch") {
    SupportSpec s;
    s.kind = SupportKind::Curve;
    s.name = "koch";
    s.curve = CurveGeneratorSpec::von_koch();
    s.depth = 6;
    return s;
  }
  std::ifstream in(path_or_name);
  if (!in)
    throw SpecError("cannot open spec file '" + path_or_name + "'");
  return parse_support_spec(in, path_or_name);
}

inline Support build_support(const SupportSpec& spec) {
  if (spec.kind == SupportKind::Set) {
    auto set = build_set(spec.set, spec.depth);
    const double alpha = spec.alpha ? *spec.alpha : estimate_dimension(set).similarity;
    auto s = staircase_of_set(set, alpha);
    return {spec.kind, spec.name, alpha, spec.depth, std::move(s), std::move(set), std::nullopt};
  }
  auto curve = build_curve(spec.curve, spec.depth);
  const double alpha = spec.alpha ? *spec.alpha : estimate_dimension(curve).similarity;
  auto j = rise_function(curve, alpha);
  return {spec.kind, spec.name, alpha, spec.depth, std::move(j), std::nullopt, std::move(curve)};
}

/// %.17g, which round-trips every double.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Tolerance from FRACTALCALC_TOL when set to a positive number, else the default.
inline double report_tolerance(double fallback) {
  const char* env = std::getenv("FRACTALCALC_TOL");
  if (env == nullptr || *env == '\0')
    return fallback;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0.0))
    throw SpecError("FRACTALCALC_TOL must be a positive number");
  return v;
}

/// Writes the two columns of a staircase; header is "z,<label>".
inline void write_staircase_csv(std::ostream& out, const Staircase& s, const std::string& label) {
  out << "z," << label << '\n';
  const auto& z = s.breakpoints();
  const auto& v = s.values();
  for (std::size_t i = 0; i < z.size(); ++i)
    out << fmt17(z[i]) << ',' << fmt17(v[i]) << '\n';
}

} // namespace fractalcalc
