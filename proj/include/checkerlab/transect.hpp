#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "checkerlab/coloring.hpp"
#include "checkerlab/geometry.hpp"
#include "checkerlab/polygon.hpp"

namespace checkerlab {

/// The line {t*u + s*u_perp : s real} with u = (cos theta, sin theta),
/// theta in [0, pi). The offset t is measured along u, so the line integral
/// of a coloring over this line, as a function of t, is the projection of f
/// onto direction u.
struct LineSpec {
  double theta = 0.0;
  double offset = 0.0;

  Vec2 u() const { return {std::cos(theta), std::sin(theta)}; }
  Vec2 u_perp() const { return {-std::sin(theta), std::cos(theta)}; }
  Vec2 point_at(double s) const { return u() * offset + u_perp() * s; }

  /// Wrap theta into [0, pi); theta + pi describes the same line with the
  /// offset negated.
  static LineSpec canonical(double theta, double offset) {
    double th = std::fmod(theta, kPi);
    if (th < 0) th += kPi;
    const double flips = std::round((theta - th) / kPi);
    const bool odd = std::fmod(std::abs(flips), 2.0) == 1.0;
    return {th, odd ? -offset : offset};
  }
};

struct Segment {
  LineSpec line;
  double s0 = 0.0;
  double s1 = 0.0;

  Segment() = default;
  Segment(LineSpec l, double a, double b) : line(l), s0(a), s1(b) {
    if (!(s0 < s1)) throw Error("segment needs s0 < s1");
  }
  double length() const { return s1 - s0; }
};

/// Piecewise-constant restriction of a coloring to a line: breakpoints
/// s_0 < ... < s_n and the value on each open interval. Zero outside
/// [s_0, s_n]. Integrals are exact sums in this representation.
class TransectProfile {
 public:
  TransectProfile() = default;
  TransectProfile(LineSpec line, std::vector<double> breaks, std::vector<Complex> values,
                  bool degenerate = false)
      : line_(line),
        breaks_(std::move(breaks)),
        values_(std::move(values)),
        degenerate_(degenerate) {
    if (!degenerate_ && !breaks_.empty() && breaks_.size() != values_.size() + 1)
      throw Error("breakpoint/value size mismatch");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
      if (!(breaks_[i - 1] < breaks_[i])) throw Error("breakpoints not increasing");
  }

  const LineSpec& line() const { return line_; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<Complex>& values() const { return values_; }
  bool degenerate() const { return degenerate_; }
  bool empty() const { return values_.empty(); }

  double support_length() const {
    double len = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (std::abs(values_[i]) > 0.0) len += breaks_[i + 1] - breaks_[i];
    return len;
  }

  /// Support length outside [a, b] (used for the boundary-overflow set).
  double support_length_outside(double a, double b) const {
    double len = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (std::abs(values_[i]) == 0.0) continue;
      const double lo = breaks_[i], hi = breaks_[i + 1];
      len += std::max(0.0, std::min(a, hi) - lo);
      len += std::max(0.0, hi - std::max(b, lo));
    }
    return len;
  }

  Complex integral() const {
    require_measurable();
    Complex acc{};
    for (std::size_t i = 0; i < values_.size(); ++i)
      acc += values_[i] * (breaks_[i + 1] - breaks_[i]);
    return acc;
  }

  /// Integral over [a, b], splitting boundary intervals proportionally.
  Complex integral(double a, double b) const {
    require_measurable();
    if (!(a < b)) throw Error("segment needs s0 < s1");
    Complex acc{};
    for (std::size_t i = 0; i < values_.size(); ++i) {
      const double lo = std::max(a, breaks_[i]);
      const double hi = std::min(b, breaks_[i + 1]);
      if (hi > lo) acc += values_[i] * (hi - lo);
    }
    return acc;
  }

  /// Largest |integral| over subsegments with endpoints at breakpoints (the
  /// maximum is attained there). Real-valued profiles use prefix extrema;
  /// complex ones scan all breakpoint pairs.
  std::pair<Segment, double> max_subsegment() const {
    require_measurable();
    if (values_.empty()) return {Segment(line_, 0.0, 1.0), 0.0};
    const std::size_t n = values_.size();
    std::vector<Complex> prefix(n + 1);
    bool real = true;
    for (std::size_t i = 0; i < n; ++i) {
      prefix[i + 1] = prefix[i] + values_[i] * (breaks_[i + 1] - breaks_[i]);
      if (values_[i].imag() != 0.0) real = false;
    }
    std::size_t bi = 0, bj = 1;
    if (real) {
      std::size_t imin = 0, imax = 0;
      for (std::size_t i = 1; i <= n; ++i) {
        if (prefix[i].real() < prefix[imin].real()) imin = i;
        if (prefix[i].real() > prefix[imax].real()) imax = i;
      }
      bi = std::min(imin, imax);
      bj = std::max(imin, imax);
    } else {
      double best = -1.0;
      for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
          const double v = std::abs(prefix[j] - prefix[i]);
          if (v > best) {
            best = v;
            bi = i;
            bj = j;
          }
        }
      }
    }
    if (bi == bj) return {Segment(line_, breaks_.front(), breaks_.back()), 0.0};
    return {Segment(line_, breaks_[bi], breaks_[bj]), std::abs(prefix[bj] - prefix[bi])};
  }

 private:
  void require_measurable() const {
    if (degenerate_) throw NonMeasurableTransect();
  }

  LineSpec line_;
  std::vector<double> breaks_;
  std::vector<Complex> values_;
  bool degenerate_ = false;
};

namespace detail {

/// s-intervals of {p0 + s*dir} inside a simple polygon. Crossings come from
/// raw edge intersections; interval interiors are classified by a midpoint
/// test, so vertex contacts never double-count. Throws NonMeasurableTransect
/// when the line runs along an edge.
inline void line_polygon_intervals(const std::vector<Vec2>& poly, Vec2 p0, Vec2 dir,
                                   double scale, std::vector<std::pair<double, double>>& out) {
  const std::size_t n = poly.size();
  const double collinear_tol = 1e-12 * scale;
  thread_local std::vector<double> hits;
  hits.clear();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j];
    const Vec2 e = poly[i] - a;
    const Vec2 w = a - p0;
    const double den = cross(dir, e);
    if (std::abs(den) <= 1e-14 * norm(e)) {
      // parallel edge: collinear and of positive length means the transect
      // is not measurable
      if (std::abs(cross(dir, w)) <= collinear_tol && norm(e) > collinear_tol)
        throw NonMeasurableTransect();
      continue;
    }
    const double t = cross(w, dir) / den;
    if (t < -1e-12 || t > 1.0 + 1e-12) continue;
    hits.push_back(cross(w, e) / den);
  }
  if (hits.size() < 2) return;
  std::sort(hits.begin(), hits.end());
  const double min_len = 1e-12 * scale;
  for (std::size_t i = 0; i + 1 < hits.size(); ++i) {
    const double lo = hits[i], hi = hits[i + 1];
    if (hi - lo <= min_len) continue;
    const Vec2 mid = p0 + dir * (0.5 * (lo + hi));
    if (point_in_polygon(poly, mid)) {
      if (!out.empty() && out.back().second >= lo - min_len)
        out.back().second = hi;  // stitch across a vertex contact
      else
        out.emplace_back(lo, hi);
    }
  }
}

}  // namespace detail

/// Restriction of the coloring to a line. Clips the line against every
/// support tile near it and merges the resulting weighted intervals into one
/// breakpoint list. Throws NonMeasurableTransect when the line contains a
/// tile edge of positive length.
inline TransectProfile profile(const FiniteColoring& col, LineSpec line) {
  const PolygonDomain& q = col.domain();
  const Lattice2D& lat = col.lattice();
  const Vec2 u = line.u();
  const Vec2 dir = line.u_perp();
  const Vec2 p0 = u * line.offset;
  const double reach = q.bounding_radius() + 1e-9 * q.diameter();
  const double scale = q.diameter();

  struct Interval {
    double s0, s1;
    Complex z;
  };
  std::vector<Interval> cells;
  std::vector<std::pair<double, double>> spans;
  const auto& support = col.support();
  const auto& weights = col.weights();
  for (std::size_t k = 0; k < support.size(); ++k) {
    const Vec2 g = lat.point(support[k]);
    if (std::abs(dot(g + q.centroid(), u) - line.offset) > reach) continue;
    spans.clear();
    detail::line_polygon_intervals(q.vertices(), p0 - g, dir, scale, spans);
    for (const auto& [a, b] : spans) cells.push_back({a, b, weights[k]});
  }
  if (cells.empty()) return TransectProfile(line, {}, {});

  // sweep: +z at entry, -z at exit; snap events closer than the clip tolerance
  struct Event {
    double s;
    Complex dz;
  };
  std::vector<Event> events;
  events.reserve(2 * cells.size());
  for (const Interval& c : cells) {
    events.push_back({c.s0, c.z});
    events.push_back({c.s1, -c.z});
  }
  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.s < b.s; });
  const double snap = 1e-12 * scale;
  std::vector<double> breaks;
  std::vector<Complex> values;
  Complex running{};
  std::size_t i = 0;
  while (i < events.size()) {
    const double s = events[i].s;
    Complex delta{};
    while (i < events.size() && events[i].s <= s + snap) delta += events[i++].dz;
    if (!breaks.empty()) values.push_back(running);
    breaks.push_back(s);
    running += delta;
  }
  // trim zero-valued fringes
  std::size_t lo = 0, hi = values.size();
  while (lo < hi && std::abs(values[lo]) == 0.0) ++lo;
  while (hi > lo && std::abs(values[hi - 1]) == 0.0) --hi;
  if (lo >= hi) return TransectProfile(line, {}, {});
  return TransectProfile(line,
                         {breaks.begin() + static_cast<std::ptrdiff_t>(lo),
                          breaks.begin() + static_cast<std::ptrdiff_t>(hi + 1)},
                         {values.begin() + static_cast<std::ptrdiff_t>(lo),
                          values.begin() + static_cast<std::ptrdiff_t>(hi)});
}

inline Complex line_integral(const TransectProfile& p) { return p.integral(); }

inline Complex segment_integral(const TransectProfile& p, double s0, double s1) {
  return p.integral(s0, s1);
}

struct ProjectionSamples {
  double theta = 0.0;
  std::vector<double> requested_offsets;
  std::vector<double> used_offsets;  // after degeneracy perturbation
  std::vector<Complex> values;
  std::size_t perturbed_count = 0;
};

/// Evaluate a transect through the coloring, retrying a degenerate offset
/// with nudges of 1e-9 * diam(Q). Returns the profile and the offset used.
inline std::pair<TransectProfile, double> profile_with_retry(const FiniteColoring& col,
                                                             double theta, double offset,
                                                             std::size_t* perturbations = nullptr,
                                                             double jitter = 0.0) {
  const double step = 1e-9 * col.domain().diameter();
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double t =
        offset + (attempt == 0 ? 0.0 : step * attempt * (1.0 + jitter));
    try {
      return {profile(col, LineSpec{theta, t}), t};
    } catch (const NonMeasurableTransect&) {
      if (perturbations) ++(*perturbations);
    }
  }
  throw NonMeasurableTransect();
}

/// CSV rows "s_break,value_re,value_im": one row per breakpoint carrying the
/// value on the interval that starts there (zero on the final row).
inline std::string to_csv(const TransectProfile& p) {
  std::string out = "s_break,value_re,value_im\n";
  char buf[128];
  for (std::size_t i = 0; i < p.breakpoints().size(); ++i) {
    const Complex v = i < p.values().size() ? p.values()[i] : Complex{};
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.breakpoints()[i], v.real(),
                  v.imag());
    out += buf;
  }
  return out;
}

/// The projection of f onto direction u(theta), sampled at a strictly
/// increasing offset grid.
inline ProjectionSamples projection_samples(const FiniteColoring& col, double theta,
                                            std::span<const double> t_grid) {
  ProjectionSamples out;
  out.theta = theta;
  out.requested_offsets.assign(t_grid.begin(), t_grid.end());
  for (std::size_t i = 1; i < out.requested_offsets.size(); ++i)
    if (!(out.requested_offsets[i - 1] < out.requested_offsets[i]))
      throw Error("offset grid must be strictly increasing");
  out.used_offsets.reserve(t_grid.size());
  out.values.reserve(t_grid.size());
  for (const double t : t_grid) {
    auto [prof, used] = profile_with_retry(col, theta, t, &out.perturbed_count);
    out.used_offsets.push_back(used);
    out.values.push_back(prof.integral());
  }
  return out;
}

/// CSV rows "theta,t,value_re,value_im" (t is the requested offset).
inline std::string to_csv(const ProjectionSamples& p) {
  std::string out = "theta,t,value_re,value_im\n";
  char buf[160];
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.theta,
                  p.requested_offsets[i], p.values[i].real(), p.values[i].imag());
    out += buf;
  }
  return out;
}

}  // namespace checkerlab
