#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "checkerlab/geometry.hpp"
#include "checkerlab/polygon.hpp"

namespace checkerlab {

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(n - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
  }
  return {x, w};
}

template <class F>
Complex integrate_interval(F&& f, double a, double b, int n) {
  const auto [x, w] = gauss_legendre(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Complex acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(mid + half * x[i]);
  return acc * half;
}

struct QuadratureResult {
  Complex value{};
  bool converged = true;
  std::size_t evaluations = 0;
};

namespace detail {

// Dunavant degree-5 rule, 7 points, weights sum to 1.
struct TriRule {
  static constexpr int kN = 7;
  static constexpr std::array<std::array<double, 3>, kN> bary{{
      {1.0 / 3, 1.0 / 3, 1.0 / 3},
      {0.059715871789770, 0.470142064105115, 0.470142064105115},
      {0.470142064105115, 0.059715871789770, 0.470142064105115},
      {0.470142064105115, 0.470142064105115, 0.059715871789770},
      {0.797426985353087, 0.101286507323456, 0.101286507323456},
      {0.101286507323456, 0.797426985353087, 0.101286507323456},
      {0.101286507323456, 0.101286507323456, 0.797426985353087},
  }};
  static constexpr std::array<double, kN> wt{
      0.225,
      0.132394152788506, 0.132394152788506, 0.132394152788506,
      0.125939180544827, 0.125939180544827, 0.125939180544827,
  };
};

template <class F>
Complex tri_rule(F&& f, Vec2 a, Vec2 b, Vec2 c, std::size_t& evals) {
  const double area = 0.5 * std::abs(cross(b - a, c - a));
  Complex acc{};
  for (int i = 0; i < TriRule::kN; ++i) {
    const auto& l = TriRule::bary[static_cast<std::size_t>(i)];
    acc += TriRule::wt[static_cast<std::size_t>(i)] * f(a * l[0] + b * l[1] + c * l[2]);
  }
  evals += TriRule::kN;
  return acc * area;
}

template <class F>
Complex tri_adaptive(F&& f, Vec2 a, Vec2 b, Vec2 c, double tol, int depth, int min_depth,
                     std::size_t& evals, std::size_t max_evals, bool& ok) {
  const Complex coarse = tri_rule(f, a, b, c, evals);
  const Vec2 ab = (a + b) * 0.5, bc = (b + c) * 0.5, ca = (c + a) * 0.5;
  const Complex fine = tri_rule(f, a, ab, ca, evals) + tri_rule(f, ab, b, bc, evals) +
                       tri_rule(f, ca, bc, c, evals) + tri_rule(f, ab, bc, ca, evals);
  if (depth >= min_depth && std::abs(fine - coarse) <= tol) return fine;
  if (evals >= max_evals || depth >= 24) {
    ok = ok && std::abs(fine - coarse) <= tol;
    return fine;
  }
  const double t4 = tol / 4.0;
  return tri_adaptive(f, a, ab, ca, t4, depth + 1, min_depth, evals, max_evals, ok) +
         tri_adaptive(f, ab, b, bc, t4, depth + 1, min_depth, evals, max_evals, ok) +
         tri_adaptive(f, ca, bc, c, t4, depth + 1, min_depth, evals, max_evals, ok) +
         tri_adaptive(f, ab, bc, ca, t4, depth + 1, min_depth, evals, max_evals, ok);
}

}  // namespace detail

template <class F>
QuadratureResult integrate_triangle(F&& f, Vec2 a, Vec2 b, Vec2 c, double abs_tol,
                                    std::size_t max_evals = 10'000'000) {
  QuadratureResult r;
  bool ok = true;
  r.value = detail::tri_adaptive(f, a, b, c, abs_tol, 0, 2, r.evaluations, max_evals, ok);
  r.converged = ok;
  return r;
}

/// Adaptive integral of f over a simple polygon (triangulated).
template <class F>
QuadratureResult integrate_polygon(F&& f, const PolygonDomain& poly, double abs_tol,
                                   std::size_t max_evals = 10'000'000) {
  const auto tris = triangulate(poly.vertices());
  QuadratureResult total;
  const double per_tri = abs_tol / static_cast<double>(tris.size());
  for (const auto& t : tris) {
    auto r = integrate_triangle(f, t[0], t[1], t[2], per_tri, max_evals - total.evaluations);
    total.value += r.value;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
    if (total.evaluations >= max_evals) break;
  }
  return total;
}

/// Tensor Gauss rule over an annulus r0 <= |x| <= r1 in polar coordinates.
/// Node counts are the caller's problem (pick them from the integrand's
/// frequency content).
template <class F>
Complex integrate_polar(F&& f, double r0, double r1, int n_r, int n_theta) {
  const auto [xr, wr] = gauss_legendre(n_r);
  const auto [xt, wt] = gauss_legendre(n_theta);
  const double rmid = 0.5 * (r0 + r1), rhalf = 0.5 * (r1 - r0);
  Complex acc{};
  for (std::size_t i = 0; i < xr.size(); ++i) {
    const double r = rmid + rhalf * xr[i];
    Complex ring{};
    for (std::size_t j = 0; j < xt.size(); ++j) {
      const double th = kPi * (xt[j] + 1.0);  // [0, 2pi)
      ring += wt[j] * f(Vec2{r * std::cos(th), r * std::sin(th)});
    }
    acc += wr[i] * ring * (r * kPi);
  }
  return acc * rhalf;
}

}  // namespace checkerlab
