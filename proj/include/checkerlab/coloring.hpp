#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "checkerlab/lattice.hpp"
#include "checkerlab/polygon.hpp"
#include "checkerlab/tiling.hpp"

namespace checkerlab {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_point(std::uint64_t seed, std::int64_t m, std::int64_t n) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ static_cast<std::uint64_t>(m));
  h = mix64(h ^ static_cast<std::uint64_t>(n));
  return h;
}

inline double u01(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Deterministic weight rule over all lattice points. The random kind is
/// counter-based: the value at (m, n) depends only on (seed, m, n), so
/// evaluation order and parallelism cannot change a coloring.
class ColoringRule {
 public:
  enum class Kind { Parity, Random, Constant, Table };

  static ColoringRule parity() { return ColoringRule(Kind::Parity); }

  static ColoringRule random(std::uint64_t seed, double bias = 0.5) {
    ColoringRule r(Kind::Random);
    r.seed_ = seed;
    r.bias_ = bias;
    return r;
  }

  static ColoringRule constant(Complex c) {
    ColoringRule r(Kind::Constant);
    r.constant_ = c;
    return r;
  }

  /// One weight per line: "m n re im", '#' starts a comment.
  static ColoringRule table_from_stream(std::istream& in) {
    ColoringRule r(Kind::Table);
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::int64_t m, n;
      double re, im;
      if (ls >> m >> n >> re >> im) r.table_[{m, n}] = Complex{re, im};
    }
    return r;
  }

  static ColoringRule table_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open coloring table: " + path);
    return table_from_stream(in);
  }

  Complex operator()(LatticePoint p) const {
    switch (kind_) {
      case Kind::Parity:
        return ((p.m + p.n) % 2 == 0) ? Complex{1, 0} : Complex{-1, 0};
      case Kind::Random:
        return detail::u01(detail::hash_point(seed_, p.m, p.n)) < bias_ ? Complex{1, 0}
                                                                        : Complex{-1, 0};
      case Kind::Constant:
        return constant_;
      case Kind::Table: {
        const auto it = table_.find(p);
        return it == table_.end() ? Complex{0, 0} : it->second;
      }
    }
    return {};
  }

  Kind kind() const { return kind_; }
  const std::map<LatticePoint, Complex>& table() const { return table_; }
  ColoringRule with_seed(std::uint64_t seed) const {
    ColoringRule r = *this;
    r.seed_ = seed;
    return r;
  }

 private:
  explicit ColoringRule(Kind k) : kind_(k) {}

  Kind kind_;
  std::uint64_t seed_ = 0;
  double bias_ = 0.5;
  Complex constant_{1, 0};
  std::map<LatticePoint, Complex> table_;
};

/// f(x) = sum over g in G of z_g * chi_Q(x - g): finite support G (sorted,
/// duplicate-free) with complex weights, plus the lattice/domain pair.
class FiniteColoring {
 public:
  FiniteColoring(Lattice2D lattice, PolygonDomain domain,
                 std::vector<std::pair<LatticePoint, Complex>> weights)
      : lattice_(std::move(lattice)), domain_(std::move(domain)) {
    std::sort(weights.begin(), weights.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    support_.reserve(weights.size());
    weights_.reserve(weights.size());
    for (const auto& [p, z] : weights) {
      if (!support_.empty() && support_.back() == p) throw Error("duplicate support point");
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error("weight not finite");
      support_.push_back(p);
      weights_.push_back(z);
    }
    energy_ = 0.0;
    max_modulus_ = 0.0;
    real_valued_ = true;
    std::vector<Vec2> emb;
    emb.reserve(support_.size());
    Vec2 acc{};
    for (std::size_t i = 0; i < support_.size(); ++i) {
      energy_ += std::norm(weights_[i]);
      max_modulus_ = std::max(max_modulus_, std::abs(weights_[i]));
      if (std::abs(weights_[i].imag()) > 1e-12 * (1.0 + std::abs(weights_[i].real())))
        real_valued_ = false;
      emb.push_back(lattice_.point(support_[i]));
      acc += emb.back();
    }
    diameter_ = diameter_of_points(emb);
    centroid_ = support_.empty() ? domain_.centroid()
                                 : acc / static_cast<double>(support_.size()) + domain_.centroid();
  }

  const Lattice2D& lattice() const { return lattice_; }
  const PolygonDomain& domain() const { return domain_; }
  const std::vector<LatticePoint>& support() const { return support_; }
  const std::vector<Complex>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

  std::optional<Complex> weight_at(LatticePoint p) const {
    const auto it = std::lower_bound(support_.begin(), support_.end(), p);
    if (it == support_.end() || *it != p) return std::nullopt;
    return weights_[static_cast<std::size_t>(it - support_.begin())];
  }

  /// Sum of squared weight moduli.
  double energy() const { return energy_; }
  double max_weight_modulus() const { return max_modulus_; }
  bool real_valued() const { return real_valued_; }
  /// diam(G) over embeddings.
  double support_diameter() const { return diameter_; }
  /// Mean support embedding shifted by the domain centroid.
  Vec2 support_centroid() const { return centroid_; }

  /// f(x): weight of the tile containing x, or 0 if that tile is uncolored.
  Complex evaluate(Vec2 x) const {
    const LatticePoint t = locate(domain_, lattice_, x);
    const auto z = weight_at(t);
    return z ? *z : Complex{0, 0};
  }

  /// Everything (basis, domain, embeddings) scaled by lambda; weights kept.
  FiniteColoring scaled(double lambda) const {
    std::vector<std::pair<LatticePoint, Complex>> w;
    w.reserve(support_.size());
    for (std::size_t i = 0; i < support_.size(); ++i) w.emplace_back(support_[i], weights_[i]);
    return FiniteColoring(lattice_.scaled(lambda), domain_.scaled(lambda), std::move(w));
  }

 private:
  Lattice2D lattice_;
  PolygonDomain domain_;
  std::vector<LatticePoint> support_;
  std::vector<Complex> weights_;
  double energy_ = 0;
  double max_modulus_ = 0;
  bool real_valued_ = true;
  double diameter_ = 0;
  Vec2 centroid_;
};

/// G = all t whose (half-open) tile t+Q meets the closed box [0,R]^2, with
/// weights from the rule. Exact polygon-box clipping; degenerate (zero-area)
/// contacts count when a contact point belongs to the half-open tile.
inline FiniteColoring restrict_to_box(const ColoringRule& rule, const Lattice2D& lat,
                                      const PolygonDomain& q, double R) {
  if (!(R > 0)) throw Error("box size must be positive");
  const std::vector<Vec2> box{{0, 0}, {R, 0}, {R, R}, {0, R}};
  const Vec2 box_center{R / 2, R / 2};
  const double box_radius = R * 0.70710678118654752440 + q.bounding_radius() + 1.0;
  const auto w = detail::coeff_window(lat, box_center - q.centroid(), box_radius);
  const double area_tol = 1e-12 * q.area();
  std::vector<std::pair<LatticePoint, Complex>> weights;
  for (std::int64_t m = w.m0; m <= w.m1; ++m) {
    for (std::int64_t n = w.n0; n <= w.n1; ++n) {
      const Vec2 t = lat.point(m, n);
      std::vector<Vec2> tile = q.vertices();
      for (Vec2& v : tile) v += t;
      const auto inter = clip_convex(tile, box);
      if (inter.empty()) continue;
      bool in = false;
      if (inter.size() >= 3 && std::abs(polygon_signed_area(inter)) > area_tol) {
        in = true;
      } else {
        // contact of measure zero: keep only if some contact point lies in
        // the half-open tile
        for (const Vec2& p : inter) {
          if (q.contains_halfopen(p - t)) {
            in = true;
            break;
          }
        }
      }
      if (in) weights.emplace_back(LatticePoint{m, n}, rule(LatticePoint{m, n}));
    }
  }
  return FiniteColoring(lat, q, std::move(weights));
}

}  // namespace checkerlab
