#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <utility>
#include <vector>

#include "checkerlab/geometry.hpp"

namespace checkerlab {

// --- raw polygon helpers (vertex lists, CCW) --------------------------------

inline double polygon_signed_area(const std::vector<Vec2>& vs) {
  double a = 0.0;
  const std::size_t n = vs.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) a += cross(vs[j], vs[i]);
  return 0.5 * a;
}

/// Crossing-number test; boundary behaviour unspecified (callers perturb).
inline bool point_in_polygon(const std::vector<Vec2>& vs, Vec2 p) {
  bool in = false;
  const std::size_t n = vs.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if ((vs[i].y > p.y) != (vs[j].y > p.y)) {
      const double t = (p.y - vs[j].y) / (vs[i].y - vs[j].y);
      if (p.x < vs[j].x + t * (vs[i].x - vs[j].x)) in = !in;
    }
  }
  return in;
}

/// One Sutherland-Hodgman step: keep the side with dot(p - anchor, normal) <= bound.
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 normal,
                                        double bound, double eps) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 2);
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[j];
    const Vec2 b = poly[i];
    const double da = dot(a, normal) - bound;
    const double db = dot(b, normal) - bound;
    const bool ina = da <= eps;
    const bool inb = db <= eps;
    if (ina != inb) {
      const double t = da / (da - db);
      out.push_back(a + (b - a) * t);
    }
    if (inb) out.push_back(b);
  }
  return out;
}

/// Intersection of an arbitrary subject polygon with a convex clip polygon (CCW).
inline std::vector<Vec2> clip_convex(const std::vector<Vec2>& subject,
                                     const std::vector<Vec2>& convex_clip,
                                     double eps = 1e-12) {
  std::vector<Vec2> cur = subject;
  const std::size_t n = convex_clip.size();
  for (std::size_t i = 0, j = n - 1; i < n && !cur.empty(); j = i++) {
    const Vec2 a = convex_clip[j];
    const Vec2 b = convex_clip[i];
    const Vec2 d = b - a;
    // interior of a CCW polygon is left of each edge; outward normal (dy, -dx)
    const Vec2 nrm{d.y, -d.x};
    cur = clip_halfplane(cur, nrm, dot(a, nrm), eps);
  }
  return cur;
}

/// Fan/ear triangulation of a simple CCW polygon.
inline std::vector<std::array<Vec2, 3>> triangulate(std::vector<Vec2> vs) {
  std::vector<std::array<Vec2, 3>> tris;
  if (vs.size() < 3) return tris;
  tris.reserve(vs.size() - 2);
  auto is_ear = [&](std::size_t i) {
    const std::size_t n = vs.size();
    const Vec2 a = vs[(i + n - 1) % n], b = vs[i], c = vs[(i + 1) % n];
    const double ear2 = cross(b - a, c - b);
    if (ear2 <= 0) return false;  // reflex or collinear
    // block on vertices inside or on the candidate triangle; clipping past a
    // boundary vertex would pinch the remaining polygon
    const double eps = 1e-9 * ear2;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == (i + n - 1) % n || k == (i + 1) % n) continue;
      const Vec2 p = vs[k];
      const double s1 = cross(b - a, p - a);
      const double s2 = cross(c - b, p - b);
      const double s3 = cross(a - c, p - c);
      if (s1 >= -eps && s2 >= -eps && s3 >= -eps) return false;
    }
    return true;
  };
  std::size_t guard = 0;
  while (vs.size() > 3 && guard++ < 10000) {
    bool clipped = false;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (is_ear(i)) {
        const std::size_t n = vs.size();
        tris.push_back({vs[(i + n - 1) % n], vs[i], vs[(i + 1) % n]});
        vs.erase(vs.begin() + static_cast<std::ptrdiff_t>(i));
        clipped = true;
        break;
      }
    }
    if (!clipped) throw Error("triangulation failed (polygon not simple?)");
  }
  if (vs.size() == 3) tris.push_back({vs[0], vs[1], vs[2]});
  return tris;
}

// --- PolygonDomain -----------------------------------------------------------

/// A simple polygon with CCW vertices and positive area, used as a fundamental
/// domain. Point membership follows a half-open convention so that lattice
/// translates partition the plane: a boundary point belongs to the tile it
/// falls into after an infinitesimal nudge in the fixed direction w = (1, d),
/// 0 < d << 1. Equivalently, edges whose inward normal has positive x (or zero
/// x and positive y) are closed, the others open.
class PolygonDomain {
 public:
  explicit PolygonDomain(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3) throw Error("polygon needs at least 3 vertices");
    for (const Vec2& v : verts_)
      if (!std::isfinite(v.x) || !std::isfinite(v.y))
        throw Error("polygon vertex not finite");
    area_ = polygon_signed_area(verts_);
    if (area_ <= 0.0) throw Error("polygon must be counterclockwise with positive area");
    check_simple();
    diameter_ = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
      for (std::size_t j = i + 1; j < verts_.size(); ++j)
        diameter_ = std::max(diameter_, dist(verts_[i], verts_[j]));
    centroid_ = compute_centroid();
    bound_radius_ = 0.0;
    origin_radius_ = 0.0;
    for (const Vec2& v : verts_) {
      bound_radius_ = std::max(bound_radius_, dist(v, centroid_));
      origin_radius_ = std::max(origin_radius_, norm(v));
    }
  }

  const std::vector<Vec2>& vertices() const { return verts_; }
  double area() const { return area_; }
  double diameter() const { return diameter_; }
  Vec2 centroid() const { return centroid_; }
  /// Radius of the smallest centroid-centred disk containing the polygon.
  double bounding_radius() const { return bound_radius_; }
  /// Max vertex norm; the circumradius used for containment radii when the
  /// polygon is centred at the origin (e.g. Voronoi cells).
  double circumradius() const { return origin_radius_; }

  bool contains_halfopen(Vec2 p) const {
    const double eta = 1e-7 * diameter_;
    return point_in_polygon(verts_, p + kNudge * eta);
  }

  PolygonDomain translated(Vec2 t) const {
    std::vector<Vec2> vs = verts_;
    for (Vec2& v : vs) v += t;
    return PolygonDomain(std::move(vs));
  }

  PolygonDomain scaled(double s) const {
    if (!(s > 0)) throw Error("scale factor must be positive");
    std::vector<Vec2> vs = verts_;
    for (Vec2& v : vs) v = v * s;
    return PolygonDomain(std::move(vs));
  }

  std::pair<Vec2, Vec2> bounding_box() const {
    Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Vec2 hi = -lo;
    for (const Vec2& v : verts_) {
      lo.x = std::min(lo.x, v.x);
      lo.y = std::min(lo.y, v.y);
      hi.x = std::max(hi.x, v.x);
      hi.y = std::max(hi.y, v.y);
    }
    return {lo, hi};
  }

 private:
  // slope is an arbitrary small irrational-ish number; no preset edge is
  // parallel to the nudge direction.
  static constexpr Vec2 kNudge{1.0, 3.1803398874989485e-05};

  Vec2 compute_centroid() const {
    double cx = 0, cy = 0;
    const std::size_t n = verts_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const double c = cross(verts_[j], verts_[i]);
      cx += (verts_[j].x + verts_[i].x) * c;
      cy += (verts_[j].y + verts_[i].y) * c;
    }
    return Vec2{cx, cy} / (6.0 * area_);
  }

  void check_simple() const {
    const std::size_t n = verts_.size();
    auto seg = [&](std::size_t i) {
      return std::pair<Vec2, Vec2>{verts_[i], verts_[(i + 1) % n]};
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent
        auto [a, b] = seg(i);
        auto [c, d] = seg(j);
        const double d1 = cross(b - a, c - a);
        const double d2 = cross(b - a, d - a);
        const double d3 = cross(d - c, a - c);
        const double d4 = cross(d - c, b - c);
        if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)))
          throw Error("polygon self-intersects");
      }
    }
  }

  std::vector<Vec2> verts_;
  double area_ = 0;
  double diameter_ = 0;
  Vec2 centroid_;
  double bound_radius_ = 0;
  double origin_radius_ = 0;
};

/// Overlap area of two simple polygons (second one shifted by `offset_b`).
/// Both are triangulated; each triangle pair is clipped convex-vs-convex.
inline double intersection_area(const PolygonDomain& a, const PolygonDomain& b,
                                Vec2 offset_b = {}) {
  const auto ta = triangulate(a.vertices());
  auto tb = triangulate(b.vertices());
  for (auto& t : tb)
    for (Vec2& v : t) v += offset_b;
  double total = 0.0;
  for (const auto& x : ta) {
    for (const auto& y : tb) {
      const std::vector<Vec2> sub{x[0], x[1], x[2]};
      const std::vector<Vec2> clp{y[0], y[1], y[2]};
      const auto inter = clip_convex(sub, clp);
      if (inter.size() >= 3) total += std::abs(polygon_signed_area(inter));
    }
  }
  return total;
}

/// Diameter of a point cloud via convex hull + pairwise scan on the hull.
inline double diameter_of_points(std::vector<Vec2> pts) {
  if (pts.size() < 2) return 0.0;
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {  // lower
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {  // upper
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  double best = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i)
    for (std::size_t j = i + 1; j < hull.size(); ++j)
      best = std::max(best, dist(hull[i], hull[j]));
  return best;
}

}  // namespace checkerlab
