#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "checkerlab/coloring.hpp"
#include "checkerlab/lattice.hpp"
#include "checkerlab/polygon.hpp"
#include "checkerlab/quadrature.hpp"
#include "checkerlab/transect.hpp"

namespace checkerlab {

/// Closed-form Fourier transform of a polygon indicator,
///   chi_hat(xi) = integral over Q of exp(-2 pi i xi.x) dx.
/// The area integral reduces, via the divergence theorem with the vector
/// field xi/(-2 pi i |xi|^2) e^{-2 pi i xi.x}, to a sum over edges:
///   chi_hat(xi) = i/(2 pi |xi|^2) * sum_e cross(xi, d_e) e^{-2 pi i xi.m_e}
///                 sinc(pi xi.d_e),
/// with d_e the edge vector and m_e its midpoint. The only singular point is
/// xi = 0; tiny |xi| switch to a second-order moment expansion to avoid
/// cancellation. Directions orthogonal to an edge are regular here (the sinc
/// handles them), unlike vertex-based formulas.
class PolygonFT {
 public:
  explicit PolygonFT(PolygonDomain q) : domain_(std::move(q)) {
    const auto& vs = domain_.vertices();
    const std::size_t n = vs.size();
    edges_.reserve(n);
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
      edges_.push_back({(vs[j] + vs[i]) * 0.5, vs[i] - vs[j]});
    area_ = domain_.area();
    // polygon moments for the small-|xi| expansion
    double mx = 0, my = 0, mxx = 0, mxy = 0, myy = 0;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 a = vs[j], b = vs[i];
      const double c = cross(a, b);
      mx += c * (a.x + b.x);
      my += c * (a.y + b.y);
      mxx += c * (a.x * a.x + a.x * b.x + b.x * b.x);
      myy += c * (a.y * a.y + a.y * b.y + b.y * b.y);
      mxy += c * (2 * a.x * a.y + a.x * b.y + b.x * a.y + 2 * b.x * b.y);
    }
    m1_ = {mx / 6.0, my / 6.0};
    m2_xx_ = mxx / 12.0;
    m2_yy_ = myy / 12.0;
    m2_xy_ = mxy / 24.0;
    small_ = 1e-6 / (1.0 + domain_.diameter());
  }

  const PolygonDomain& domain() const { return domain_; }
  double area() const { return area_; }

  Complex chi_hat(Vec2 xi) const {
    const double n2 = norm2(xi);
    if (n2 <= small_ * small_) {
      // area - 2 pi i <xi, m1> - 2 pi^2 <xi, M2 xi> + O(|xi|^3)
      const double q2 = xi.x * xi.x * m2_xx_ + 2.0 * xi.x * xi.y * m2_xy_ +
                        xi.y * xi.y * m2_yy_;
      return Complex{area_ - 2.0 * kPi * kPi * q2, -kTwoPi * dot(xi, m1_)};
    }
    Complex acc{};
    for (const Edge& e : edges_)
      acc += cross(xi, e.d) * cis_neg(dot(xi, e.mid)) * sinc(kPi * dot(xi, e.d));
    return acc * Complex{0.0, 1.0} / (kTwoPi * n2);
  }

  /// g(xi) = |chi_hat(xi)|^2. Only meaningful for area-1 domains where
  /// integral of g is 1; callers must normalize first.
  double power_density(Vec2 xi) const {
    if (std::abs(area_ - 1.0) > 1e-9) throw Error("normalize first");
    return std::norm(chi_hat(xi));
  }

 private:
  struct Edge {
    Vec2 mid;
    Vec2 d;
  };

  static double sinc(double z) {
    if (std::abs(z) < 1e-4) {
      const double z2 = z * z;
      return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0);
    }
    return std::sin(z) / z;
  }

  PolygonDomain domain_;
  std::vector<Edge> edges_;
  double area_ = 0;
  Vec2 m1_;
  double m2_xx_ = 0, m2_yy_ = 0, m2_xy_ = 0;
  double small_ = 1e-6;
};

/// phi(xi) = sum over g in G of z_g exp(-2 pi i <g, xi>); T*-periodic.
inline Complex phi(const FiniteColoring& col, Vec2 xi) {
  Complex acc{};
  const auto& sup = col.support();
  const auto& w = col.weights();
  for (std::size_t i = 0; i < sup.size(); ++i)
    acc += w[i] * cis_neg(dot(col.lattice().point(sup[i]), xi));
  return acc;
}

/// f_hat(xi) = chi_hat(xi) * phi(xi).
inline Complex f_hat(const FiniteColoring& col, const PolygonFT& ftq, Vec2 xi) {
  return ftq.chi_hat(xi) * phi(col, xi);
}

namespace detail {

/// Dual points with |t*| <= radius sorted by (norm, m, n); deterministic
/// summation order for reproducible partial sums.
inline std::vector<Vec2> sorted_dual_points(const Lattice2D& dual_lat, double radius) {
  auto pts = dual_lat.enumerate_points(radius);
  std::vector<std::pair<double, Vec2>> keyed;
  keyed.reserve(pts.size());
  for (const auto& p : pts) {
    const Vec2 v = dual_lat.point(p);
    keyed.emplace_back(norm2(v), v);
  }
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Vec2> out;
  out.reserve(keyed.size());
  for (const auto& [n2, v] : keyed) out.push_back(v);
  return out;
}

}  // namespace detail

/// Partial sum of the spectral tiling identity sum_{t*} g(xi - t*) = 1 over
/// |t*| <= R_trunc. Nonnegative terms: nondecreasing in R_trunc, bounded by 1
/// for genuine covolume-1 tilings.
inline double tiling_sum(const PolygonFT& ftq, const Lattice2D& dual_lat, Vec2 xi,
                         double R_trunc) {
  double acc = 0.0;
  for (const Vec2& t : detail::sorted_dual_points(dual_lat, R_trunc))
    acc += ftq.power_density(xi - t);
  return acc;
}

/// Partial sums at several truncation radii (radii must be increasing).
inline std::vector<double> tiling_sum_profile(const PolygonFT& ftq, const Lattice2D& dual_lat,
                                              Vec2 xi, std::span<const double> radii) {
  std::vector<double> out;
  if (radii.empty()) return out;
  const auto pts = detail::sorted_dual_points(dual_lat, radii.back());
  out.reserve(radii.size());
  double acc = 0.0;
  std::size_t i = 0;
  for (const double r : radii) {
    while (i < pts.size() && norm2(pts[i]) <= r * r) acc += ftq.power_density(xi - pts[i++]);
    out.push_back(acc);
  }
  return out;
}

/// Smallest schedule radius R such that the truncated head sum
/// sum_{|t*| <= R} g(xi - t*) exceeds 1 - eps on a dense sample of B, with a
/// numerically estimated continuity margin. Doubling until certified, then
/// bisection. Relies on the tiling identity (total = 1); inputs that do not
/// tile make the schedule run away, reported as TailConvergenceError.
inline double tail_radius(const PolygonFT& ftq, const Lattice2D& dual_lat,
                          const PolygonDomain& B, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error("eps must be in (0, 1)");
  const auto [lo, hi] = B.bounding_box();
  const double step = B.diameter() / 64.0;
  std::vector<Vec2> samples;
  for (double x = lo.x; x <= hi.x + 0.5 * step; x += step)
    for (double y = lo.y; y <= hi.y + 0.5 * step; y += step)
      if (B.contains_halfopen({x, y})) samples.push_back({x, y});
  for (const Vec2& v : B.vertices()) samples.push_back(v);  // worst points sit on the rim

  const double r0 = std::max(dual_lat.shortest_vector_norm(), 1e-3);
  const double target = 1.0 - eps;

  auto min_head = [&](double R) {
    const auto pts = detail::sorted_dual_points(dual_lat, R);
    double worst = std::numeric_limits<double>::infinity();
    for (const Vec2& s : samples) {
      double acc = 0.0;
      for (const Vec2& t : pts) acc += ftq.power_density(s - t);
      worst = std::min(worst, acc);
    }
    return worst;
  };

  // one fixed margin: continuity of the head estimated by central differences
  // at a few sample points, scaled to half a grid diagonal
  double margin = -1.0;
  auto compute_margin = [&](double R) {
    const auto pts = detail::sorted_dual_points(dual_lat, R);
    auto head_at = [&](Vec2 s) {
      double acc = 0.0;
      for (const Vec2& t : pts) acc += ftq.power_density(s - t);
      return acc;
    };
    const double h = step / 16.0;
    double grad_max = 0.0;
    for (std::size_t k = 0; k < samples.size(); k += std::max<std::size_t>(1, samples.size() / 9)) {
      const Vec2 s = samples[k];
      const double gx = (head_at({s.x + h, s.y}) - head_at({s.x - h, s.y})) / (2 * h);
      const double gy = (head_at({s.x, s.y + h}) - head_at({s.x, s.y - h})) / (2 * h);
      grad_max = std::max(grad_max, std::hypot(gx, gy));
    }
    return 1.5 * grad_max * (step * 0.70710678118654752440);
  };

  double R = r0;
  double prev = 0.0;
  bool certified = false;
  while (R <= 1e4) {
    if (margin < 0.0 && min_head(R) > target) margin = compute_margin(R);
    if (margin >= 0.0 && min_head(R) - margin > target) {
      certified = true;
      break;
    }
    prev = R;
    R *= 2.0;
  }
  if (!certified) throw TailConvergenceError();

  double bad = prev, good = R;
  for (int iter = 0; iter < 40 && good - bad > 1e-9 * good; ++iter) {
    const double mid = 0.5 * (bad + good);
    if (min_head(mid) - margin > target)
      good = mid;
    else
      bad = mid;
  }
  return good;
}

struct ParsevalCheck {
  double lhs = 0.0;  // quadrature of |phi|^2 over the dual fundamental domain
  double rhs = 0.0;  // sum of squared weight moduli
  double residual = 0.0;
};

/// Parseval on a fundamental domain of T*: integral of |phi|^2 over B equals
/// the weight energy. lhs by adaptive quadrature, rhs exact.
inline ParsevalCheck parseval_phi_check(const FiniteColoring& col, const PolygonDomain& B_dual,
                                        double rel_tol = 1e-6,
                                        std::size_t max_evals = 10'000'000) {
  ParsevalCheck out;
  out.rhs = col.energy();
  const double abs_tol = rel_tol * std::max(out.rhs, 1e-12);
  auto r = integrate_polygon(
      [&](Vec2 xi) { return Complex{std::norm(phi(col, xi)), 0.0}; }, B_dual, abs_tol,
      max_evals);
  out.lhs = r.value.real();
  out.residual = std::abs(out.lhs - out.rhs) / std::max(out.rhs, 1e-300);
  if (!r.converged) throw QuadratureError(out.residual);
  return out;
}

/// Projection-slice identity: the 1-D transform of the projection onto
/// u(theta) equals f_hat on the line R*u. Samples the projection on a fine
/// offset grid, transforms numerically, compares on the frequency grid, and
/// returns the max residual.
inline double projection_slice_check(const FiniteColoring& col, const PolygonFT& ftq,
                                     double theta, std::span<const double> freq_grid,
                                     std::size_t samples = 8192) {
  const Vec2 u{std::cos(theta), std::sin(theta)};
  // exact projection support bounds from per-tile bounding disks
  double lo = -1.0, hi = 1.0;
  const double r = col.domain().bounding_radius();
  for (std::size_t i = 0; i < col.size(); ++i) {
    const double c = dot(col.lattice().point(col.support()[i]) + col.domain().centroid(), u);
    if (i == 0) {
      lo = c - r;
      hi = c + r;
    } else {
      lo = std::min(lo, c - r);
      hi = std::max(hi, c + r);
    }
  }
  lo -= 0.5;
  hi += 0.5;
  const double h = (hi - lo) / static_cast<double>(samples - 1);
  std::vector<double> grid(samples);
  for (std::size_t i = 0; i < samples; ++i) grid[i] = lo + h * static_cast<double>(i);
  const ProjectionSamples proj = projection_samples(col, theta, grid);
  double worst = 0.0;
  for (const double nu : freq_grid) {
    Complex dft{};
    for (std::size_t i = 0; i < samples; ++i) {
      const double trap = (i == 0 || i + 1 == samples) ? 0.5 : 1.0;
      dft += trap * proj.values[i] * cis_neg(nu * grid[i]);
    }
    dft *= h;
    worst = std::max(worst, std::abs(dft - f_hat(col, ftq, u * nu)));
  }
  return worst;
}

/// Explicit lower-bound certificate for the extremal projection value M:
///   M >= sqrt( energy / (4 pi R' (D + diam Q)) ),
/// where R is the eps = 1/2 tail radius on the dual Voronoi cell B and
/// R' = R + circumradius(B). `empirical_m` is filled by the search harness.
struct Certificate {
  double support_diameter = 0.0;   // D
  double domain_diameter = 0.0;    // diam Q
  double tail_R = 0.0;             // R at eps = 1/2
  double containment_Rprime = 0.0; // R' = R + circumradius(B)
  double energy = 0.0;             // sum |z_g|^2
  double bound = 0.0;
  double empirical_m = 0.0;
  double margin = 0.0;

  bool passed() const { return empirical_m >= bound; }
};

/// Bound-only part of the certificate (no search). Requires a validated
/// covolume-1 tiling and a nonempty coloring.
inline Certificate certificate_bound(const FiniteColoring& col) {
  if (std::abs(col.lattice().covolume() - 1.0) > 1e-9) throw Error("normalize first");
  if (!(col.energy() > 0.0)) throw Error("coloring has zero energy");
  Certificate cert;
  cert.support_diameter = col.support_diameter();
  cert.domain_diameter = col.domain().diameter();
  cert.energy = col.energy();
  const PolygonFT ftq(col.domain());
  const Lattice2D dual = col.lattice().dual();
  const PolygonDomain B = dual.voronoi_cell();
  cert.tail_R = tail_radius(ftq, dual, B, 0.5);
  cert.containment_Rprime = containment_radius(B, cert.tail_R);
  cert.bound = std::sqrt(cert.energy / (4.0 * kPi * cert.containment_Rprime *
                                        (cert.support_diameter + cert.domain_diameter)));
  return cert;
}

}  // namespace checkerlab
