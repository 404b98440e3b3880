#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <compare>
#include <vector>

#include "checkerlab/geometry.hpp"
#include "checkerlab/polygon.hpp"

namespace checkerlab {

/// Integer coordinates of a lattice point; the embedding is m*b1 + n*b2.
struct LatticePoint {
  std::int64_t m = 0;
  std::int64_t n = 0;
  auto operator<=>(const LatticePoint&) const = default;
};

/// Rank-2 lattice given by a real basis (b1, b2), |det| > 1e-12.
class Lattice2D {
 public:
  Lattice2D(Vec2 b1, Vec2 b2) : b1_(b1), b2_(b2) {
    det_ = cross(b1_, b2_);
    if (!std::isfinite(det_) || std::abs(det_) <= 1e-12) throw DegenerateLatticeError();
  }

  Vec2 b1() const { return b1_; }
  Vec2 b2() const { return b2_; }
  double covolume() const { return std::abs(det_); }

  Vec2 point(LatticePoint p) const { return point(p.m, p.n); }
  Vec2 point(std::int64_t m, std::int64_t n) const {
    return {static_cast<double>(m) * b1_.x + static_cast<double>(n) * b2_.x,
            static_cast<double>(m) * b1_.y + static_cast<double>(n) * b2_.y};
  }

  /// Real coordinates of x in the basis: solves (b1 | b2) c = x.
  Vec2 coefficients(Vec2 x) const {
    return {(x.x * b2_.y - x.y * b2_.x) / det_, (x.y * b1_.x - x.x * b1_.y) / det_};
  }

  /// Dual lattice: basis is the inverse-transpose of (b1 | b2), so that
  /// <b_i, b*_j> = delta_ij and dual(dual(L)) == L.
  Lattice2D dual() const {
    return Lattice2D({b2_.y / det_, -b2_.x / det_}, {-b1_.y / det_, b1_.x / det_});
  }

  Lattice2D scaled(double s) const { return Lattice2D(b1_ * s, b2_ * s); }

  /// Rescale to covolume 1 (basis times covolume^(-1/2)).
  Lattice2D normalized() const { return scaled(1.0 / std::sqrt(covolume())); }

  /// All lattice points with |embedding| <= radius, sorted by (m, n).
  std::vector<LatticePoint> enumerate_points(double radius) const {
    std::vector<LatticePoint> out;
    if (radius < 0) return out;
    const Lattice2D d = dual();
    // |coeff_i(x)| <= |row_i| * |x| with rows of the inverse basis matrix
    const double rm = norm(d.b1()) * radius;
    const double rn = norm(d.b2()) * radius;
    const auto mmax = static_cast<std::int64_t>(std::floor(rm + 1e-9));
    const auto nmax = static_cast<std::int64_t>(std::floor(rn + 1e-9));
    const double r2 = radius * radius;
    for (std::int64_t m = -mmax; m <= mmax; ++m)
      for (std::int64_t n = -nmax; n <= nmax; ++n)
        if (norm2(point(m, n)) <= r2) out.push_back({m, n});
    return out;  // scan order is already sorted by (m, n)
  }

  /// Gauss-reduced copy of the basis (shortest, then next-shortest vector).
  std::pair<Vec2, Vec2> reduced_basis() const {
    Vec2 v1 = b1_, v2 = b2_;
    for (int iter = 0; iter < 64; ++iter) {
      if (norm2(v2) < norm2(v1)) std::swap(v1, v2);
      const double mu = std::round(dot(v1, v2) / norm2(v1));
      if (mu == 0.0) break;
      v2 -= v1 * mu;
    }
    if (norm2(v2) < norm2(v1)) std::swap(v1, v2);
    return {v1, v2};
  }

  double shortest_vector_norm() const { return norm(reduced_basis().first); }

  /// Voronoi cell of the lattice around the origin: intersection of the
  /// half-planes <x, v> <= |v|^2 / 2 over nearby nonzero lattice vectors of
  /// the reduced basis. Centrally symmetric, area = covolume.
  PolygonDomain voronoi_cell() const {
    const auto [v1, v2] = reduced_basis();
    const double big = 4.0 * (norm(v1) + norm(v2));
    std::vector<Vec2> cell{{-big, -big}, {big, -big}, {big, big}, {-big, big}};
    struct Cand {
      double n2;
      int m, n;
      Vec2 v;
    };
    std::vector<Cand> cands;
    for (int m = -2; m <= 2; ++m)
      for (int n = -2; n <= 2; ++n) {
        if (m == 0 && n == 0) continue;
        const Vec2 v = v1 * m + v2 * n;
        cands.push_back({norm2(v), m, n, v});
      }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return a.n2 < b.n2 || (a.n2 == b.n2 && (a.m < b.m || (a.m == b.m && a.n < b.n)));
    });
    for (const Cand& c : cands) {
      cell = clip_halfplane(cell, c.v, 0.5 * c.n2, 1e-12 * c.n2);
      if (cell.size() < 3) throw Error("voronoi cell collapsed");
    }
    // merge duplicate corners introduced by planes through a common vertex
    std::vector<Vec2> dedup;
    const double tol = 1e-9 * (norm(v1) + norm(v2));
    for (const Vec2& v : cell) {
      if (dedup.empty() || dist(dedup.back(), v) > tol) dedup.push_back(v);
    }
    while (dedup.size() > 1 && dist(dedup.front(), dedup.back()) <= tol) dedup.pop_back();
    return PolygonDomain(std::move(dedup));
  }

 private:
  Vec2 b1_, b2_;
  double det_ = 0;
};

inline double covolume(const Lattice2D& lat) { return lat.covolume(); }

/// Bounded fundamental domain of the dual lattice: its Voronoi cell.
inline PolygonDomain dual_fundamental_domain(const Lattice2D& lat) {
  return lat.dual().voronoi_cell();
}

/// R' = R + circumradius(B): every |xi| > R' lies in some t* + B with |t*| > R.
inline double containment_radius(const PolygonDomain& B, double R) {
  return R + B.circumradius();
}

/// Scale a (lattice, domain) pair to covolume 1.
inline std::pair<Lattice2D, PolygonDomain> normalize_pair(const Lattice2D& lat,
                                                          const PolygonDomain& q) {
  const double c = 1.0 / std::sqrt(lat.covolume());
  return {lat.scaled(c), q.scaled(c)};
}

}  // namespace checkerlab
