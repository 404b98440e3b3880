#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "checkerlab/lattice.hpp"
#include "checkerlab/polygon.hpp"

namespace checkerlab {

struct TilingReport {
  bool area_match = false;
  double area_residual = 0.0;
  double overlap_area_max = 0.0;
  std::int64_t coverage_miss_count = 0;
  bool pass = false;
};

namespace detail {

/// Integer coefficient window: all (m, n) whose embedding can lie within
/// `reach` of x.
struct CoeffWindow {
  std::int64_t m0, m1, n0, n1;
};

inline CoeffWindow coeff_window(const Lattice2D& lat, Vec2 x, double reach) {
  const Lattice2D d = lat.dual();
  const Vec2 c = lat.coefficients(x);
  const double rm = norm(d.b1()) * reach + 1.0;
  const double rn = norm(d.b2()) * reach + 1.0;
  return {static_cast<std::int64_t>(std::floor(c.x - rm)),
          static_cast<std::int64_t>(std::ceil(c.x + rm)),
          static_cast<std::int64_t>(std::floor(c.y - rn)),
          static_cast<std::int64_t>(std::ceil(c.y + rn))};
}

}  // namespace detail

/// The unique t with x in t+Q under the half-open boundary convention.
/// Assumes the tiling has been validated; throws LocationFailure otherwise.
inline LatticePoint locate(const PolygonDomain& q, const Lattice2D& lat, Vec2 x) {
  const auto w = detail::coeff_window(lat, x - q.centroid(), q.bounding_radius());
  bool found = false;
  LatticePoint hit{};
  for (std::int64_t m = w.m0; m <= w.m1; ++m) {
    for (std::int64_t n = w.n0; n <= w.n1; ++n) {
      if (q.contains_halfopen(x - lat.point(m, n))) {
        if (found) throw LocationFailure(x);  // overlapping tiles
        found = true;
        hit = {m, n};
      }
    }
  }
  if (!found) throw LocationFailure(x);
  return hit;
}

/// Checks that Q tiles the plane under lat: area == covolume, no pairwise
/// overlap of nearby translates (polygon clipping), and a deterministic
/// >= 10^4-point grid in a covolume-sized box covered exactly once each.
inline TilingReport validate_tiling(const PolygonDomain& q, const Lattice2D& lat) {
  TilingReport rep;
  const double covol = lat.covolume();
  rep.area_residual = std::abs(q.area() - covol);
  rep.area_match = rep.area_residual < 1e-9 * covol;

  const double reach = 2.0 * q.diameter();
  for (const LatticePoint& t : lat.enumerate_points(reach)) {
    if (t.m == 0 && t.n == 0) continue;
    const Vec2 shift = lat.point(t);
    if (norm(shift) > 2.0 * q.bounding_radius() + 1e-12) continue;  // disjoint bounding disks
    const double a = intersection_area(q, q, shift);
    rep.overlap_area_max = std::max(rep.overlap_area_max, a);
  }

  // coverage: 101 x 101 interior grid of a sqrt(covol)-sized box
  const double side = std::sqrt(covol);
  const int grid = 101;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 p{side * (i + 0.5) / grid, side * (j + 0.5) / grid};
      const auto w = detail::coeff_window(lat, p - q.centroid(), q.bounding_radius());
      int covered = 0;
      for (std::int64_t m = w.m0; m <= w.m1; ++m)
        for (std::int64_t n = w.n0; n <= w.n1; ++n)
          if (q.contains_halfopen(p - lat.point(m, n))) ++covered;
      if (covered != 1) ++rep.coverage_miss_count;
    }
  }

  rep.pass = rep.area_match && rep.overlap_area_max < 1e-9 && rep.coverage_miss_count == 0;
  return rep;
}

}  // namespace checkerlab
