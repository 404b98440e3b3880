#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace checkerlab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

/// exp(-2*pi*i*t)
inline Complex cis_neg(double t) {
  const double a = -kTwoPi * t;
  return {std::cos(a), std::sin(a)};
}

// --- error types -----------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateLatticeError : Error {
  DegenerateLatticeError() : Error("degenerate lattice") {}
};

struct LocationFailure : Error {
  Vec2 point;
  explicit LocationFailure(Vec2 p)
      : Error("location failure at (" + std::to_string(p.x) + ", " +
              std::to_string(p.y) + ")"),
        point(p) {}
};

struct NonMeasurableTransect : Error {
  NonMeasurableTransect() : Error("non-measurable transect") {}
};

struct TailConvergenceError : Error {
  TailConvergenceError() : Error("tail did not converge") {}
};

struct QuadratureError : Error {
  double achieved_residual;
  explicit QuadratureError(double residual)
      : Error("quadrature did not converge; achieved residual " +
              std::to_string(residual)),
        achieved_residual(residual) {}
};

}  // namespace checkerlab
