#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "checkerlab/coloring.hpp"
#include "checkerlab/fourier.hpp"
#include "checkerlab/lattice.hpp"
#include "checkerlab/polygon.hpp"
#include "checkerlab/search.hpp"
#include "checkerlab/tiling.hpp"

namespace checkerlab {

// --- presets -----------------------------------------------------------------

inline Lattice2D square_lattice() { return Lattice2D({1, 0}, {0, 1}); }

/// Hexagonal lattice scaled to covolume 1.
inline Lattice2D hexagonal_lattice() {
  const double a = std::sqrt(2.0 / std::sqrt(3.0));
  return Lattice2D({a, 0}, {0.5 * a, a * std::sqrt(3.0) / 2.0});
}

/// L-tromino cells {(0,0),(1,0),(0,1)} tile the square grid under the index-3
/// sublattice {x == y (mod 3)}; scaling by 3^(-1/2) normalizes both to
/// area/covolume 1.
inline Lattice2D l_tromino_lattice() {
  const double s = 1.0 / std::sqrt(3.0);
  return Lattice2D({s, s}, {-s, 2.0 * s});
}

inline PolygonDomain unit_square_domain() {
  return PolygonDomain({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

inline PolygonDomain l_tromino_domain() {
  const double s = 1.0 / std::sqrt(3.0);
  return PolygonDomain(
      {{0, 0}, {2 * s, 0}, {2 * s, s}, {s, s}, {s, 2 * s}, {0, 2 * s}});
}

inline PolygonDomain hexagon_domain() { return hexagonal_lattice().voronoi_cell(); }

/// Paired (lattice, domain) presets; every pair is a validated covolume-1
/// tiling.
inline std::pair<Lattice2D, PolygonDomain> preset_pair(const std::string& name) {
  if (name == "unit_square") return {square_lattice(), unit_square_domain()};
  if (name == "l_tromino_norm") return {l_tromino_lattice(), l_tromino_domain()};
  if (name == "hexagon_norm") return {hexagonal_lattice(), hexagon_domain()};
  throw Error("unknown preset: " + name);
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"unit_square", "l_tromino_norm",
                                              "hexagon_norm"};
  return names;
}

// --- config file -------------------------------------------------------------

struct Tolerances {
  double quadrature_rel = 1e-4;  // Parseval quadrature target
  double tail_eps = 0.5;         // tail radius epsilon for reports
};

struct ProblemConfig {
  Lattice2D lattice;
  PolygonDomain domain;
  FiniteColoring coloring;
  std::optional<ColoringRule> rule;  // present for rule-based colorings
  double box = 0.0;                  // restriction box size (rule colorings)
  Tolerances tolerances;
};

namespace detail {

inline Vec2 parse_vec(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("expected [x, y] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

/// Config schema:
///   {"lattice": {"preset": "square"|"hexagonal"} | {"basis": [[..],[..]]},
///    "domain":  {"preset": "unit_square"|"l_tromino_norm"|"hexagon_norm"}
///               | {"vertices": [[..],..]},
///    "coloring": {"kind": "parity"|"random"|"constant"|"table",
///                 "seed": int, "bias": float, "value": [re,im],
///                 "path": str, "box": float}}
/// A domain preset with no lattice block implies the paired lattice.
inline ProblemConfig parse_config(const nlohmann::json& j) {
  std::optional<Lattice2D> lat;
  std::optional<PolygonDomain> dom;

  if (j.contains("domain") && j["domain"].contains("preset")) {
    auto [pl, pd] = preset_pair(j["domain"]["preset"].get<std::string>());
    lat = pl;
    dom = pd;
  } else if (j.contains("domain") && j["domain"].contains("vertices")) {
    std::vector<Vec2> vs;
    for (const auto& v : j["domain"]["vertices"]) vs.push_back(detail::parse_vec(v));
    dom = PolygonDomain(std::move(vs));
  }
  if (j.contains("lattice")) {
    const auto& jl = j["lattice"];
    if (jl.contains("preset")) {
      const auto name = jl["preset"].get<std::string>();
      if (name == "square")
        lat = square_lattice();
      else if (name == "hexagonal")
        lat = hexagonal_lattice();
      else
        throw Error("unknown lattice preset: " + name);
    } else if (jl.contains("basis")) {
      lat = Lattice2D(detail::parse_vec(jl["basis"][0]), detail::parse_vec(jl["basis"][1]));
    }
  }
  if (!lat || !dom) throw Error("config needs lattice and domain");

  Tolerances tol;
  if (j.contains("tolerances")) {
    tol.quadrature_rel = j["tolerances"].value("quadrature_rel", tol.quadrature_rel);
    tol.tail_eps = j["tolerances"].value("tail_eps", tol.tail_eps);
  }

  if (!j.contains("coloring")) throw Error("config needs a coloring");
  const auto& jc = j["coloring"];
  const auto kind = jc.value("kind", std::string("parity"));
  std::optional<ColoringRule> rule;
  double box = jc.value("box", 0.0);
  if (kind == "parity") {
    rule = ColoringRule::parity();
  } else if (kind == "random") {
    rule = ColoringRule::random(jc.value("seed", 0ULL), jc.value("bias", 0.5));
  } else if (kind == "constant") {
    Complex c{1, 0};
    if (jc.contains("value")) {
      const auto& v = jc["value"];
      c = Complex{v[0].get<double>(), v.size() > 1 ? v[1].get<double>() : 0.0};
    }
    rule = ColoringRule::constant(c);
  } else if (kind == "table") {
    if (!jc.contains("path")) throw Error("table coloring needs a path");
    const ColoringRule table = ColoringRule::table_from_file(jc["path"].get<std::string>());
    std::vector<std::pair<LatticePoint, Complex>> w(table.table().begin(),
                                                    table.table().end());
    return ProblemConfig{*lat, *dom, FiniteColoring(*lat, *dom, std::move(w)),
                         std::nullopt, 0.0, tol};
  } else {
    throw Error("unknown coloring kind: " + kind);
  }
  if (!(box > 0.0)) throw Error("coloring.box required for rule-based colorings");
  return ProblemConfig{*lat, *dom, restrict_to_box(*rule, *lat, *dom, box), rule, box, tol};
}

inline ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

// --- JSON emission -----------------------------------------------------------

inline nlohmann::json to_json(const TilingReport& r) {
  return {{"area_match", r.area_match},
          {"area_residual", r.area_residual},
          {"overlap_area_max", r.overlap_area_max},
          {"coverage_miss_count", r.coverage_miss_count},
          {"verdict", r.pass ? "pass" : "fail"}};
}

inline nlohmann::json to_json(const Certificate& c) {
  return {{"D", c.support_diameter},
          {"diamQ", c.domain_diameter},
          {"R", c.tail_R},
          {"Rprime", c.containment_Rprime},
          {"energy", c.energy},
          {"bound", c.bound},
          {"empirical_M", c.empirical_m},
          {"margin", c.margin},
          {"pass", c.passed()}};
}

inline nlohmann::json to_json(const ScanResult& r) {
  return {{"best_line", {{"theta", r.best_line.theta}, {"offset", r.best_line.offset}}},
          {"best_line_value", r.best_line_value},
          {"best_segment",
           {{"theta", r.best_segment.line.theta},
            {"offset", r.best_segment.line.offset},
            {"s0", r.best_segment.s0},
            {"s1", r.best_segment.s1}}},
          {"best_segment_value", r.best_segment_value},
          {"degenerate_perturbations", r.degenerate_perturbations},
          {"scanned", r.scanned}};
}

}  // namespace checkerlab
