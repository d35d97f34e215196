#pragma once

// Pre-fractal approximations of fractal sets in [0,1] and of fractal curves in
// R^d, together with their mass functions, staircases and dimension estimates.
//
// Sets follow the coarse-grained mass convention Γ(α+1)·Δz^α per occupied
// cell; curves follow the mass-function convention |Δv|^α / Γ(α+1). Both are
// kept exactly as defined, so the two staircases differ by a Γ(α+1)² factor
// for the same geometry.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fractalcalc/errors.hpp"
#include "fractalcalc/special_functions.hpp"

namespace fractalcalc {

namespace detail {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Staircase
// ---------------------------------------------------------------------------

/// Monotone piecewise-linear map, used for both the integral staircase of a
/// set and the rise function of a curve. Constant outside its domain.
class Staircase {
public:
  Staircase(std::vector<double> breakpoints, std::vector<double> values)
      : z_(std::move(breakpoints)), s_(std::move(values)) {
    if (z_.size() < 2 || z_.size() != s_.size())
      throw DomainError("Staircase: need >= 2 matching breakpoints and values");
    for (std::size_t i = 1; i < z_.size(); ++i) {
      if (!(z_[i] > z_[i - 1]))
        throw DomainError("Staircase: breakpoints must be strictly increasing");
      if (s_[i] < s_[i - 1])
        throw DomainError("Staircase: values must be non-decreasing");
    }
  }

  double operator()(double z) const {
    if (z <= z_.front())
      return s_.front();
    if (z >= z_.back())
      return s_.back();
    const auto it = std::upper_bound(z_.begin(), z_.end(), z);
    const std::size_t k = static_cast<std::size_t>(it - z_.begin());
    const double t = (z - z_[k - 1]) / (z_[k] - z_[k - 1]);
    return s_[k - 1] + t * (s_[k] - s_[k - 1]);
  }

  const std::vector<double>& breakpoints() const { return z_; }
  const std::vector<double>& values() const { return s_; }
  double domain_lo() const { return z_.front(); }
  double domain_hi() const { return z_.back(); }
  double min_value() const { return s_.front(); }
  double max_value() const { return s_.back(); }
  double total() const { return s_.back() - s_.front(); }

private:
  std::vector<double> z_;
  std::vector<double> s_;
};

// ---------------------------------------------------------------------------
// Fractal sets
// ---------------------------------------------------------------------------

/// z ↦ ratio·z + offset on [0,1].
struct AffineMap {
  double ratio;
  double offset;
};

struct IfsSetSpec {
  std::vector<AffineMap> maps;
  std::string name;

  /// Checks contraction ratios, containment in [0,1] and the open-set
  /// condition (images meet at most in endpoints). Sorts maps by offset.
  void validate() {
    if (maps.size() < 2)
      throw SpecError("IfsSetSpec '" + name + "': need at least 2 maps");
    for (const auto& m : maps) {
      if (!(m.ratio > 0.0 && m.ratio < 1.0))
        throw SpecError("IfsSetSpec '" + name + "': ratios must lie in (0,1)");
      if (m.offset < -1e-12 || m.offset + m.ratio > 1.0 + 1e-12)
        throw SpecError("IfsSetSpec '" + name + "': map image leaves [0,1]");
    }
    std::sort(maps.begin(), maps.end(),
              [](const AffineMap& a, const AffineMap& b) { return a.offset < b.offset; });
    for (std::size_t i = 1; i < maps.size(); ++i) {
      if (maps[i].offset < maps[i - 1].offset + maps[i - 1].ratio - 1e-12)
        throw SpecError("IfsSetSpec '" + name + "': open-set condition fails (images overlap)");
    }
  }

  static IfsSetSpec triadic_cantor() {
    return {{{1.0 / 3.0, 0.0}, {1.0 / 3.0, 2.0 / 3.0}}, "triadic-cantor"};
  }
};

/// Closed interval stored by left end and exact length. Lengths are products
/// of contraction ratios, which keeps α-powers free of endpoint cancellation.
struct Interval {
  double lo;
  double length;
  double hi() const { return lo + length; }
};

struct FractalSetApprox {
  std::vector<Interval> intervals;
  int depth = 0;
  IfsSetSpec spec;
};

inline FractalSetApprox build_set(IfsSetSpec spec, int depth) {
  if (depth < 0)
    throw DomainError("build_set: depth must be >= 0");
  spec.validate();
  std::vector<Interval> cur{{0.0, 1.0}};
  for (int d = 0; d < depth; ++d) {
    std::vector<Interval> next;
    next.reserve(cur.size() * spec.maps.size());
    for (const auto& m : spec.maps)
      for (const auto& iv : cur)
        next.push_back({m.ratio * iv.lo + m.offset, m.ratio * iv.length});
    cur = std::move(next);
  }
  return {std::move(cur), depth, std::move(spec)};
}

inline void check_set_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("set order alpha must lie in (0,1]");
}

/// Coarse-grained mass of F ∩ [c1,c2] over the natural subdivision of the
/// approximation: occupied cells contribute Γ(α+1)·Δz^α, gaps contribute 0.
inline double coarse_mass(const FractalSetApprox& set, double alpha, double c1, double c2) {
  check_set_alpha(alpha);
  if (c1 < -1e-15 || c2 > 1.0 + 1e-15 || c1 > c2)
    throw DomainError("coarse_mass: [c1,c2] must be an interval inside [0,1]");
  const double g = gamma(alpha + 1.0);
  detail::CompensatedSum sum;
  for (const auto& iv : set.intervals) {
    if (iv.hi() <= c1 || iv.lo >= c2)
      continue;
    const double len =
        (iv.lo >= c1 && iv.hi() <= c2) ? iv.length : std::min(iv.hi(), c2) - std::max(iv.lo, c1);
    if (len > 0.0)
      sum.add(g * std::pow(len, alpha));
  }
  return sum.value();
}

/// Integral staircase S_F^α(z) = ξ^α(F, 0, z): breakpoints at every interval
/// endpoint, linear inside intervals, flat across gaps.
inline Staircase staircase_of_set(const FractalSetApprox& set, double alpha) {
  check_set_alpha(alpha);
  const double g = gamma(alpha + 1.0);
  std::vector<double> z;
  std::vector<double> s;
  z.reserve(2 * set.intervals.size() + 2);
  s.reserve(2 * set.intervals.size() + 2);
  detail::CompensatedSum cum;
  auto push = [&](double zz, double ss) {
    if (!z.empty() && zz <= z.back()) {
      s.back() = std::max(s.back(), ss);
      return;
    }
    z.push_back(zz);
    s.push_back(ss);
  };
  if (set.intervals.empty() || set.intervals.front().lo > 0.0)
    push(0.0, 0.0);
  for (const auto& iv : set.intervals) {
    push(iv.lo, cum.value());
    cum.add(g * std::pow(iv.length, alpha));
    push(iv.hi(), cum.value());
  }
  if (z.back() < 1.0)
    push(1.0, cum.value());
  return Staircase(std::move(z), std::move(s));
}

// ---------------------------------------------------------------------------
// Fractal curves
// ---------------------------------------------------------------------------

using Point = std::vector<double>;

namespace detail {

inline double norm(const Point& p) {
  double s = 0.0;
  for (double x : p)
    s += x * x;
  return std::sqrt(s);
}

inline Point sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = a[i] - b[i];
  return r;
}

// Proper rotation in the plane spanned by e1 and w that takes e1 to the unit
// vector w; identity on the orthogonal complement.
class PlaneRotation {
public:
  explicit PlaneRotation(const Point& w) : c_(w[0]), n_(w.size(), 0.0) {
    for (std::size_t i = 1; i < w.size(); ++i)
      n_[i] = w[i];
    s_ = norm(n_);
    if (s_ > 1e-300) {
      for (double& x : n_)
        x /= s_;
    } else {
      // w = ±e1; use e2 as the companion axis for the half-turn
      n_.assign(w.size(), 0.0);
      n_[1] = 1.0;
      s_ = 0.0;
    }
  }

  Point apply(const Point& x) const {
    const double x0 = x[0];
    double xn = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      xn += x[i] * n_[i];
    Point r = x;
    r[0] += (c_ - 1.0) * x0 - s_ * xn;
    for (std::size_t i = 0; i < x.size(); ++i)
      r[i] += ((c_ - 1.0) * xn + s_ * x0) * n_[i];
    return r;
  }

private:
  double c_;
  double s_ = 0.0;
  Point n_;
};

} // namespace detail

struct CurveGeneratorSpec {
  std::vector<Point> generator; ///< polyline from the origin to e1
  std::string name;

  void validate() const {
    if (generator.size() < 3)
      throw SpecError("CurveGeneratorSpec '" + name + "': need at least 2 segments");
    const std::size_t d = generator.front().size();
    if (d < 2)
      throw SpecError("CurveGeneratorSpec '" + name + "': dimension must be >= 2");
    for (const auto& p : generator)
      if (p.size() != d)
        throw SpecError("CurveGeneratorSpec '" + name + "': inconsistent point dimension");
    Point e1(d, 0.0);
    e1[0] = 1.0;
    if (detail::norm(generator.front()) > 1e-12 ||
        detail::norm(detail::sub(generator.back(), e1)) > 1e-12)
      throw SpecError("CurveGeneratorSpec '" + name + "': generator must run from 0 to e1");
    for (std::size_t i = 1; i < generator.size(); ++i) {
      const double len = detail::norm(detail::sub(generator[i], generator[i - 1]));
      if (!(len > 0.0 && len < 1.0))
        throw SpecError("CurveGeneratorSpec '" + name +
                        "': every segment must be non-degenerate and shorter than 1");
    }
  }

  std::size_t dimension() const { return generator.front().size(); }

  static CurveGeneratorSpec von_koch() {
    return {{{0.0, 0.0},
             {1.0 / 3.0, 0.0},
             {0.5, std::sqrt(3.0) / 6.0},
             {2.0 / 3.0, 0.0},
             {1.0, 0.0}},
            "von-koch"};
  }
};

struct FractalCurveApprox {
  std::vector<Point> vertices;
  std::vector<double> params; ///< uniform in vertex index on [0,1]
  int generation = 0;
  CurveGeneratorSpec spec;
};

inline FractalCurveApprox build_curve(CurveGeneratorSpec spec, int generation) {
  if (generation < 0)
    throw DomainError("build_curve: generation must be >= 0");
  spec.validate();
  const std::size_t d = spec.dimension();
  Point e1(d, 0.0);
  e1[0] = 1.0;
  std::vector<Point> cur{Point(d, 0.0), e1};
  for (int g = 0; g < generation; ++g) {
    std::vector<Point> next;
    next.reserve((cur.size() - 1) * (spec.generator.size() - 1) + 1);
    next.push_back(cur.front());
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const Point seg = detail::sub(cur[i + 1], cur[i]);
      const double len = detail::norm(seg);
      Point w = seg;
      for (double& x : w)
        x /= len;
      const detail::PlaneRotation rot(w);
      for (std::size_t k = 1; k + 1 < spec.generator.size(); ++k) {
        Point p = rot.apply(spec.generator[k]);
        for (std::size_t j = 0; j < d; ++j)
          p[j] = cur[i][j] + len * p[j];
        next.push_back(std::move(p));
      }
      next.push_back(cur[i + 1]);
    }
    cur = std::move(next);
  }
  std::vector<double> params(cur.size());
  const double last = static_cast<double>(cur.size() - 1);
  for (std::size_t i = 0; i < cur.size(); ++i)
    params[i] = static_cast<double>(i) / last;
  params.back() = 1.0;
  return {std::move(cur), std::move(params), generation, std::move(spec)};
}

/// Rise function J: cumulative |Δv|^α / Γ(α+1) along the polyline.
inline Staircase rise_function(const FractalCurveApprox& curve, double alpha) {
  const double d = static_cast<double>(curve.vertices.front().size());
  if (!(alpha >= 1.0 && alpha <= d))
    throw DomainError("rise_function: alpha must lie in [1, d]");
  const double g = gamma(alpha + 1.0);
  std::vector<double> values(curve.vertices.size());
  detail::CompensatedSum cum;
  values[0] = 0.0;
  for (std::size_t i = 1; i < curve.vertices.size(); ++i) {
    cum.add(std::pow(detail::norm(detail::sub(curve.vertices[i], curve.vertices[i - 1])), alpha) /
            g);
    values[i] = cum.value();
  }
  return Staircase(curve.params, std::move(values));
}

/// |v(z)| for the polyline interpolated at parameter z.
inline double euclidean_reach(const FractalCurveApprox& curve, double z) {
  const auto& t = curve.params;
  if (z < t.front() || z > t.back())
    throw DomainError("euclidean_reach: z outside the parameter range");
  auto it = std::upper_bound(t.begin(), t.end(), z);
  std::size_t k = static_cast<std::size_t>(it - t.begin());
  if (k >= t.size())
    return detail::norm(curve.vertices.back());
  const double u = (z - t[k - 1]) / (t[k] - t[k - 1]);
  Point p = curve.vertices[k - 1];
  for (std::size_t j = 0; j < p.size(); ++j)
    p[j] += u * (curve.vertices[k][j] - p[j]);
  return detail::norm(p);
}

// ---------------------------------------------------------------------------
// Dimension estimates
// ---------------------------------------------------------------------------

struct DimensionEstimate {
  double estimate;   ///< α where the natural-subdivision mass stops changing with depth
  double similarity; ///< root of Σ r_i^α = 1 from the generating spec
};

namespace detail {

inline double log_power_sum(const std::vector<double>& lengths, double alpha) {
  double mx = -INFINITY;
  for (double l : lengths)
    mx = std::max(mx, alpha * std::log(l));
  double s = 0.0;
  for (double l : lengths)
    s += std::exp(alpha * std::log(l) - mx);
  return mx + std::log(s);
}

// Bisection for a decreasing function on [lo, hi].
inline double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi,
                                double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (std::abs(fhi) <= tol)
    return hi;
  if (std::abs(flo) <= tol)
    return lo;
  if (!(flo > 0.0 && fhi < 0.0))
    throw NoConvergence("estimate_dimension: no sign change on the search bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (hi - lo < 1e-13 || fm == 0.0)
      return mid;
    (fm > 0.0 ? lo : hi) = mid;
  }
  if (std::abs(f(0.5 * (lo + hi))) <= tol)
    return 0.5 * (lo + hi);
  throw NoConvergence("estimate_dimension: bisection did not converge in 200 iterations");
}

inline double scale_invariant_alpha(const std::vector<double>& fine,
                                    const std::vector<double>& coarse, double hi) {
  auto f = [&](double a) { return log_power_sum(fine, a) - log_power_sum(coarse, a); };
  return bisect_decreasing(f, 1e-9, hi, 1e-6);
}

inline std::vector<double> halves(const std::vector<double>& lengths) {
  std::vector<double> out;
  out.reserve(2 * lengths.size());
  for (double l : lengths) {
    out.push_back(0.5 * l);
    out.push_back(0.5 * l);
  }
  return out;
}

inline double moran_root(const std::vector<double>& ratios, double hi) {
  auto f = [&](double a) {
    double s = 0.0;
    for (double r : ratios)
      s += std::pow(r, a);
    return std::log(s);
  };
  bool equal = std::all_of(ratios.begin(), ratios.end(),
                           [&](double r) { return r == ratios.front(); });
  if (equal)
    return std::log(static_cast<double>(ratios.size())) / std::log(1.0 / ratios.front());
  return bisect_decreasing(f, 1e-9, std::max(hi, 1.0) * 4.0, 1e-14);
}

inline std::vector<double> segment_lengths(const std::vector<Point>& v) {
  std::vector<double> out;
  out.reserve(v.size() - 1);
  for (std::size_t i = 1; i < v.size(); ++i)
    out.push_back(norm(sub(v[i], v[i - 1])));
  return out;
}

} // namespace detail

/// Depth 0 has no coarser ancestor, so it is compared with its own uniform
/// bisection instead; that comparison is scale invariant exactly at α = 1.
inline DimensionEstimate estimate_dimension(const FractalSetApprox& set) {
  std::vector<double> fine;
  for (const auto& iv : set.intervals)
    fine.push_back(iv.length);
  std::vector<double> ratios;
  for (const auto& m : set.spec.maps)
    ratios.push_back(m.ratio);
  const double sim = ratios.empty() ? 1.0 : detail::moran_root(ratios, 1.0);
  if (set.depth == 0)
    return {detail::scale_invariant_alpha(detail::halves(fine), fine, 1.0), sim};
  const auto parent = build_set(set.spec, set.depth - 1);
  std::vector<double> coarse;
  for (const auto& iv : parent.intervals)
    coarse.push_back(iv.length);
  return {detail::scale_invariant_alpha(fine, coarse, 1.0), sim};
}

inline DimensionEstimate estimate_dimension(const FractalCurveApprox& curve) {
  const double d = static_cast<double>(curve.vertices.front().size());
  const auto fine = detail::segment_lengths(curve.vertices);
  const double sim = detail::moran_root(detail::segment_lengths(curve.spec.generator), d);
  if (curve.generation == 0)
    return {detail::scale_invariant_alpha(detail::halves(fine), fine, d), sim};
  const auto parent = build_curve(curve.spec, curve.generation - 1);
  return {detail::scale_invariant_alpha(fine, detail::segment_lengths(parent.vertices), d), sim};
}

} // namespace fractalcalc
