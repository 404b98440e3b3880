#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "checkerlab/config.hpp"
#include "checkerlab/transect.hpp"
#include "oracles.hpp"

using namespace checkerlab;

namespace {

const double kHalfPi = kPi / 2.0;

FiniteColoring parity_box(double R) {
  return restrict_to_box(ColoringRule::parity(), square_lattice(), unit_square_domain(), R);
}

FiniteColoring ones_grid(int n) {
  std::vector<std::pair<LatticePoint, Complex>> w;
  for (std::int64_t m = 0; m < n; ++m)
    for (std::int64_t k = 0; k < n; ++k) w.push_back({{m, k}, {1, 0}});
  return FiniteColoring(square_lattice(), unit_square_domain(), std::move(w));
}

// horizontal line y = c: u = (0,1), offset c, direction u_perp = (-1, 0)
LineSpec horizontal(double y) { return {kHalfPi, y}; }

}  // namespace

TEST_CASE("profile of a 2x2 parity board along y = 0.5") {
  const FiniteColoring col = parity_box(1.0);  // G = {0,1}^2
  REQUIRE(col.size() == 4);
  const TransectProfile p = profile(col, horizontal(0.5));
  REQUIRE(p.breakpoints().size() == 3);
  REQUIRE(p.values().size() == 2);
  // direction (-1, 0): s = -x, so cells appear in reverse x order
  CHECK_THAT(p.breakpoints()[0], Catch::Matchers::WithinAbs(-2.0, 1e-12));
  CHECK_THAT(p.breakpoints()[1], Catch::Matchers::WithinAbs(-1.0, 1e-12));
  CHECK_THAT(p.breakpoints()[2], Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK(p.values()[0] == Complex{-1, 0});  // cell (1,0)
  CHECK(p.values()[1] == Complex{1, 0});   // cell (0,0)
}

TEST_CASE("a line on a lattice edge is not measurable") {
  const FiniteColoring col = parity_box(2.0);
  CHECK_THROWS_AS(profile(col, horizontal(1.0)), NonMeasurableTransect);
  CHECK_THROWS_AS(profile(col, LineSpec{0.0, 2.0}), NonMeasurableTransect);
}

TEST_CASE("diagonal through a parity board") {
  const FiniteColoring col = parity_box(1.0);
  // line through (0,0) and (2,2): u_perp must be parallel to (1,1)
  const LineSpec diag{0.75 * kPi, 0.0};
  const TransectProfile p = profile(col, diag);
  REQUIRE(p.values().size() == 2);
  CHECK(p.values()[0] == Complex{1, 0});
  CHECK(p.values()[1] == Complex{1, 0});
  CHECK_THAT(p.breakpoints()[1] - p.breakpoints()[0],
             Catch::Matchers::WithinAbs(std::sqrt(2.0), 1e-12));
  CHECK_THAT(std::abs(p.integral()), Catch::Matchers::WithinAbs(2.0 * std::sqrt(2.0), 1e-12));
}

TEST_CASE("line integrals") {
  CHECK_THAT(std::abs(profile(parity_box(1.0), horizontal(0.5)).integral()),
             Catch::Matchers::WithinAbs(0.0, 1e-15));
  const int n = 5;
  CHECK_THAT(profile(ones_grid(n), horizontal(0.5)).integral().real(),
             Catch::Matchers::WithinAbs(n, 1e-12));
}

TEST_CASE("segment integrals split boundary intervals proportionally") {
  const FiniteColoring col = parity_box(1.0);
  const TransectProfile p = profile(col, horizontal(0.5));
  // s = -x: x in [0,1] is s in [-1,0], value +1
  CHECK_THAT(p.integral(-1.0, 0.0).real(), Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK_THAT(p.integral(-0.75, -0.25).real(), Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK_THAT(p.integral(-2.0, 0.0).real(), Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("segment integral additivity at arbitrary split points") {
  auto [lat, q] = preset_pair("hexagon_norm");
  const FiniteColoring col = restrict_to_box(ColoringRule::random(11), lat, q, 6.0);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  const TransectProfile p = profile(col, LineSpec{1.0, 3.1});
  for (int i = 0; i < 200; ++i) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (!(a < b && b < c)) continue;
    const Complex whole = p.integral(a, c);
    const Complex split = p.integral(a, b) + p.integral(b, c);
    CHECK(std::abs(whole - split) <= 1e-12);
  }
}

TEST_CASE("max_subsegment on hand profiles") {
  const LineSpec l{0.0, 0.0};
  {
    const TransectProfile p(l, {0, 1, 2, 3}, {{1, 0}, {-1, 0}, {1, 0}});
    auto [seg, v] = p.max_subsegment();
    CHECK(v == 1.0);  // prefix 0,1,0,1: any single cell
  }
  {
    const TransectProfile p(l, {0, 1, 2, 3, 4}, {{1, 0}, {1, 0}, {1, 0}, {1, 0}});
    auto [seg, v] = p.max_subsegment();
    CHECK(v == 4.0);
    CHECK(seg.s0 == 0.0);
    CHECK(seg.s1 == 4.0);
  }
}

TEST_CASE("max_subsegment equals brute force on random +-1 profiles") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> len(0.05, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 50);
    std::vector<double> breaks{0.0};
    std::vector<Complex> values;
    for (int i = 0; i < n; ++i) {
      breaks.push_back(breaks.back() + len(rng));
      values.push_back({(rng() & 1) ? 1.0 : -1.0, 0.0});
    }
    const TransectProfile p(LineSpec{0.3, 0.0}, breaks, values);
    const double fast = p.max_subsegment().second;
    const double brute = oracles::brute_force_max_subsegment(breaks, values);
    CHECK(std::abs(fast - brute) <= 1e-12);
  }
}

TEST_CASE("max_subsegment equals brute force on random complex profiles") {
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> len(0.05, 2.0);
  std::uniform_real_distribution<double> re(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 30);
    std::vector<double> breaks{0.0};
    std::vector<Complex> values;
    for (int i = 0; i < n; ++i) {
      breaks.push_back(breaks.back() + len(rng));
      values.push_back({re(rng), re(rng)});
    }
    const TransectProfile p(LineSpec{0.3, 0.0}, breaks, values);
    CHECK(std::abs(p.max_subsegment().second -
                   oracles::brute_force_max_subsegment(breaks, values)) <= 1e-12);
  }
}

TEST_CASE("max_subsegment dominates every explicit segment integral") {
  const FiniteColoring col = parity_box(4.0);
  const TransectProfile p = profile(col, LineSpec{1.2, 0.7});
  const double best = p.max_subsegment().second;
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 300; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(std::abs(p.integral(a, b)) <= best + 1e-12);
  }
}

TEST_CASE("profile integrals match point-evaluation quadrature") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> th(0.0, kPi);
  std::uniform_real_distribution<double> off(-4.0, 4.0);
  for (const auto& name : preset_names()) {
    auto [lat, q] = preset_pair(name);
    const FiniteColoring col = restrict_to_box(ColoringRule::random(name.size()), lat, q, 5.0);
    int done = 0;
    while (done < 40) {
      const LineSpec line{th(rng), off(rng)};
      TransectProfile p;
      try {
        p = profile(col, line);
      } catch (const NonMeasurableTransect&) {
        continue;
      }
      ++done;
      const Complex oracle = oracles::line_integral_by_point_evaluation(col, line);
      const double tol = 1e-6 * std::max(1.0, p.support_length());
      CHECK(std::abs(p.integral() - oracle) <= tol);
    }
  }
}

TEST_CASE("profile support is inside diam(G) + diam(Q)") {
  auto [lat, q] = preset_pair("l_tromino_norm");
  const FiniteColoring col = restrict_to_box(ColoringRule::random(8), lat, q, 7.0);
  const double cap = col.support_diameter() + q.diameter();
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> th(0.0, kPi);
  std::uniform_real_distribution<double> off(-5.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    try {
      const TransectProfile p = profile(col, LineSpec{th(rng), off(rng)});
      if (!p.empty())
        CHECK(p.breakpoints().back() - p.breakpoints().front() <= cap + 1e-9);
    } catch (const NonMeasurableTransect&) {
    }
  }
}

TEST_CASE("scaling covariance of segment integrals") {
  const FiniteColoring col = parity_box(3.0);
  for (const double lambda : {0.5, 0.1}) {
    const FiniteColoring scaled = col.scaled(lambda);
    const LineSpec line{0.9, 1.3};
    const LineSpec sline{0.9, 1.3 * lambda};
    const Complex a = profile(col, line).integral(-1.0, 2.0);
    const Complex b = profile(scaled, sline).integral(-lambda, 2.0 * lambda);
    CHECK(std::abs(b - lambda * a) <= 1e-10);
  }
}

TEST_CASE("projection samples") {
  const int n = 3;
  const FiniteColoring ones = ones_grid(n);
  std::vector<double> grid;
  for (int i = 1; i < 12; ++i) grid.push_back(n * i / 12.0);
  const ProjectionSamples proj = projection_samples(ones, kHalfPi, grid);
  for (const Complex v : proj.values)
    CHECK_THAT(v.real(), Catch::Matchers::WithinAbs(n, 1e-12));

  // parity 2x2, theta = 0 (vertical transects): every projection vanishes
  const FiniteColoring par = parity_box(1.0);
  std::vector<double> tg;
  for (int i = 1; i < 16; ++i) tg.push_back(2.0 * i / 16.0);
  for (const Complex v : projection_samples(par, 0.0, tg).values)
    CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("projection integral recovers the total mass (Fubini)") {
  auto [lat, q] = preset_pair("hexagon_norm");
  const FiniteColoring col = restrict_to_box(ColoringRule::random(21), lat, q, 4.0);
  Complex total{};
  for (const Complex z : col.weights()) total += z;
  total *= q.area();

  const double theta = 0.7;
  const Vec2 u{std::cos(theta), std::sin(theta)};
  const double c = dot(col.support_centroid(), u);
  const double w = 0.5 * (col.support_diameter() + q.diameter()) + 0.5;
  const int N = 4000;
  std::vector<double> grid(N);
  for (int i = 0; i < N; ++i) grid[i] = c - w + 2.0 * w * i / (N - 1);
  const ProjectionSamples proj = projection_samples(col, theta, grid);
  Complex integral{};
  for (int i = 0; i < N; ++i)
    integral += proj.values[static_cast<std::size_t>(i)] * (2.0 * w / (N - 1)) *
                ((i == 0 || i == N - 1) ? 0.5 : 1.0);
  CHECK(std::abs(integral - total) <= 1e-3 * (1.0 + std::abs(total)));
}

TEST_CASE("csv emission for profiles and projections") {
  const FiniteColoring col = parity_box(1.0);
  const std::string pcsv = to_csv(profile(col, horizontal(0.5)));
  CHECK(pcsv.starts_with("s_break,value_re,value_im\n"));
  CHECK(std::count(pcsv.begin(), pcsv.end(), '\n') == 4);  // header + 3 breakpoints

  std::vector<double> grid{0.25, 0.75, 1.25};
  const std::string jcsv = to_csv(projection_samples(col, 0.0, grid));
  CHECK(jcsv.starts_with("theta,t,value_re,value_im\n"));
  CHECK(std::count(jcsv.begin(), jcsv.end(), '\n') == 4);
}

TEST_CASE("degenerate offsets are perturbed and recorded") {
  const FiniteColoring col = parity_box(2.0);
  const std::vector<double> grid{0.5, 1.0, 1.5};  // middle one hits an edge
  const ProjectionSamples proj = projection_samples(col, kHalfPi, grid);
  CHECK(proj.perturbed_count >= 1);
  CHECK(proj.used_offsets[1] != 1.0);
  CHECK(proj.used_offsets[0] == 0.5);
}
