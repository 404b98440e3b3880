#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "checkerlab/config.hpp"
#include "checkerlab/search.hpp"
#include "checkerlab/svg.hpp"

using namespace checkerlab;

namespace {

FiniteColoring ones_grid(int n) {
  std::vector<std::pair<LatticePoint, Complex>> w;
  for (std::int64_t m = 0; m < n; ++m)
    for (std::int64_t k = 0; k < n; ++k) w.push_back({{m, k}, {1, 0}});
  return FiniteColoring(square_lattice(), unit_square_domain(), std::move(w));
}

FiniteColoring parity_box(double R) {
  return restrict_to_box(ColoringRule::parity(), square_lattice(), unit_square_domain(), R);
}

ScanConfig small_cfg(int thetas = 48, int offsets = 64, int refine = 2,
                     std::uint64_t seed = 5) {
  ScanConfig cfg;
  cfg.theta_count = thetas;
  cfg.offsets_per_theta = offsets;
  cfg.refine_rounds = refine;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("scan finds the axis transect of the all-ones board") {
  const int n = 5;
  const ScanResult r = scan(ones_grid(n), small_cfg());
  CHECK(r.best_line_value >= n - 1e-9);
  CHECK(r.best_segment_value >= n - 1e-9);
  CHECK(r.scanned == 48u * 64u);
}

TEST_CASE("scan of the zero coloring returns zeros") {
  const FiniteColoring zero(square_lattice(), unit_square_domain(),
                            {{{0, 0}, {0, 0}}, {{1, 0}, {0, 0}}});
  const ScanResult r = scan(zero, small_cfg());
  CHECK(r.best_line_value == 0.0);
  CHECK(r.best_segment_value == 0.0);
}

TEST_CASE("scan finds the +1 diagonal of the parity board") {
  // cells (i,i) are all +1; the (0,0)-(n,n) diagonal scores n*sqrt(2)
  const int n = 4;
  const FiniteColoring col = parity_box(static_cast<double>(n) - 0.5);
  REQUIRE(col.size() == n * n);
  const double diag = n * std::sqrt(2.0);
  // the exact diagonal transect attains it
  const auto on_diag = profile(col, LineSpec{0.75 * kPi, 0.0}).max_subsegment();
  CHECK_THAT(on_diag.second, Catch::Matchers::WithinAbs(diag, 1e-12));
  // and the scan must get within refinement precision of it
  ScanConfig cfg = small_cfg(180, 0, 3, 1);  // auto offsets, completeness density
  const ScanResult r = scan(col, cfg);
  CHECK(r.best_segment_value >= diag * (1.0 - 1e-3));
}

TEST_CASE("scan is deterministic and its refinement is monotone") {
  const FiniteColoring col =
      restrict_to_box(ColoringRule::random(33), square_lattice(), unit_square_domain(), 6.0);
  const ScanResult a = scan(col, small_cfg(36, 48, 3, 9));
  const ScanResult b = scan(col, small_cfg(36, 48, 3, 9));
  CHECK(a.best_line_value == b.best_line_value);
  CHECK(a.best_segment_value == b.best_segment_value);
  CHECK(a.best_line.theta == b.best_line.theta);
  CHECK(a.best_line.offset == b.best_line.offset);
  ScanConfig serial = small_cfg(36, 48, 3, 9);
  serial.workers = 1;
  const ScanResult c = scan(col, serial);
  CHECK(a.best_segment_value == c.best_segment_value);
  for (std::size_t i = 1; i < a.incumbent_history.size(); ++i)
    CHECK(a.incumbent_history[i] >= a.incumbent_history[i - 1]);
}

TEST_CASE("scan values scale linearly with the coloring") {
  const FiniteColoring col =
      restrict_to_box(ColoringRule::random(12), square_lattice(), unit_square_domain(), 4.0);
  // grid-only scans: golden-section refinement walks value plateaus whose
  // fp ties resolve differently under non-dyadic rescaling
  const ScanConfig cfg = small_cfg(24, 32, 0, 3);
  const ScanResult base = scan(col, cfg);
  const double lambda_64 = 1.0 / std::sqrt(64.0 * std::log(64.0));  // the N = 64 rescaling
  for (const double lambda : {0.5, 0.1, lambda_64}) {
    const ScanResult scaled = scan(col.scaled(lambda), cfg);
    CHECK(std::abs(scaled.best_segment_value - lambda * base.best_segment_value) <= 1e-9);
    CHECK(std::abs(scaled.best_line_value - lambda * base.best_line_value) <= 1e-9);
  }
  // dyadic scaling commutes with every fp operation: refinement included,
  // the match is exact
  const ScanConfig rcfg = small_cfg(24, 32, 2, 3);
  const ScanResult rbase = scan(col, rcfg);
  const ScanResult rhalf = scan(col.scaled(0.5), rcfg);
  CHECK(rhalf.best_segment_value == 0.5 * rbase.best_segment_value);
}

TEST_CASE("corollary decomposition splits the line across the box") {
  // grid-aligned board fully inside the box: nothing sticks out
  const auto d = corollary_decomposition(ones_grid(4), LineSpec{kPi / 2.0, 2.5}, 4.0);
  CHECK(d.e_length <= 1e-9);
  CHECK(std::abs(d.integral_S - d.integral_I) <= 1e-12);

  auto [lat, q] = preset_pair("hexagon_norm");
  const FiniteColoring hex = restrict_to_box(ColoringRule::random(2), lat, q, 6.0);
  int tested = 0;
  for (int i = 0; i < 40 && tested < 20; ++i) {
    const LineSpec line{0.1 + 0.07 * i, 2.0 + 0.11 * i};
    try {
      const auto dd = corollary_decomposition(hex, line, 6.0);
      ++tested;
      CHECK(dd.e_length <= 2.0 * q.diameter() + 1e-9);
      CHECK(std::abs(dd.integral_S - dd.integral_I) <=
            dd.e_length * hex.max_weight_modulus() + 1e-9);
    } catch (const NonMeasurableTransect&) {
    }
  }
  CHECK(tested >= 20);

  CHECK_THROWS_WITH(corollary_decomposition(hex, LineSpec{kPi / 2.0, 77.0}, 6.0),
                    "empty segment");
}

TEST_CASE("certificate passes on the all-ones board") {
  const Certificate cert = certificate(ones_grid(4), small_cfg(90, 128, 2, 4));
  CHECK(cert.empirical_m >= 4.0 - 1e-9);
  CHECK(cert.bound > 0.0);
  CHECK(cert.margin > 0.0);
  CHECK(cert.passed());
}

TEST_CASE("scan at completeness density beats the certificate bound") {
  // regression for the empirical completeness condition: theta_count >= 180,
  // offsets >= 8 * (D + diam Q)
  auto [lat, q] = preset_pair("l_tromino_norm");
  const FiniteColoring col = restrict_to_box(ColoringRule::random(77), lat, q, 8.0);
  ScanConfig cfg;
  cfg.theta_count = 180;
  cfg.offsets_per_theta =
      static_cast<int>(std::ceil(8.0 * (col.support_diameter() + q.diameter())));
  cfg.refine_rounds = 1;
  cfg.seed = 3;
  const ScanResult sr = scan(col, cfg);
  const Certificate cert = certificate_bound(col);
  CHECK(sr.best_segment_value >= cert.bound);
  CHECK(sr.best_line_value >= cert.bound);  // segment max dominates the full line
}

TEST_CASE("certificate demands a valid tiling") {
  // rotated covolume-1 lattice: axis-aligned squares overlap under it
  const FiniteColoring bad(Lattice2D({0.8, 0.6}, {-0.6, 0.8}), unit_square_domain(),
                           {{{0, 0}, {1, 0}}});
  CHECK_THROWS_AS(certificate(bad, small_cfg()), Error);
}

TEST_CASE("scaling experiment: all-ones slope near 1, random slope near 1/2") {
  const std::vector<double> Rs{6, 12, 24};
  ScanConfig cfg = small_cfg(60, 0, 1, 11);
  const ScalingResult ones =
      scaling_experiment(ColoringRule::constant({1, 0}), square_lattice(),
                         unit_square_domain(), Rs, 1, cfg);
  CHECK(ones.slope >= 0.9);
  CHECK(ones.slope <= 1.1);
  CHECK(ones.rows.size() == 3);

  const ScalingResult rnd = scaling_experiment(ColoringRule::random(0), square_lattice(),
                                               unit_square_domain(), Rs, 3, cfg);
  CHECK(rnd.slope >= 0.3);
  CHECK(rnd.slope <= 0.9);

  // determinism of the emitted CSV
  const ScalingResult again = scaling_experiment(ColoringRule::random(0), square_lattice(),
                                                 unit_square_domain(), Rs, 3, cfg);
  CHECK(rnd.csv() == again.csv());
  CHECK(rnd.csv().starts_with("R,trial,theta,offset,s0,s1,seg_value,line_value,E_length\n"));
}

TEST_CASE("parity scaling slope is near 1 (diagonal witness)") {
  const std::vector<double> Rs{6, 12, 24};
  ScanConfig cfg = small_cfg(90, 0, 2, 13);
  const ScalingResult par = scaling_experiment(ColoringRule::parity(), square_lattice(),
                                               unit_square_domain(), Rs, 1, cfg);
  CHECK(par.slope >= 0.85);
  CHECK(par.slope <= 1.15);
}

TEST_CASE("config: presets, literals, and coloring kinds") {
  const auto j = nlohmann::json::parse(R"({
    "domain": {"preset": "hexagon_norm"},
    "coloring": {"kind": "random", "seed": 3, "bias": 0.5, "box": 5.0}
  })");
  const ProblemConfig pc = parse_config(j);
  CHECK(pc.coloring.size() > 10);
  CHECK(std::abs(pc.lattice.covolume() - 1.0) <= 1e-12);

  const auto j2 = nlohmann::json::parse(R"({
    "lattice": {"basis": [[1,0],[0,1]]},
    "domain": {"vertices": [[0,0],[1,0],[1,1],[0,1]]},
    "coloring": {"kind": "parity", "box": 2.0}
  })");
  CHECK(parse_config(j2).coloring.size() == 9);

  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"coloring":{"kind":"parity"}})")),
                  Error);
  const auto j3 = nlohmann::json::parse(R"({
    "domain": {"preset": "unit_square"},
    "coloring": {"kind": "parity"}
  })");
  CHECK_THROWS_WITH(parse_config(j3), "coloring.box required for rule-based colorings");
}

TEST_CASE("svg render emits one polygon per tile plus the segment") {
  const FiniteColoring col = parity_box(3.0);
  std::ostringstream out;
  render_svg(out, col, Segment(LineSpec{0.75 * kPi, 0.0}, -4.0, 0.5));
  const std::string svg = out.str();
  CHECK(svg.find("<svg") != std::string::npos);
  std::size_t polys = 0, pos = 0;
  while ((pos = svg.find("<polygon", pos)) != std::string::npos) {
    ++polys;
    pos += 8;
  }
  CHECK(polys == col.size());
  CHECK(svg.find("<line") != std::string::npos);
}
