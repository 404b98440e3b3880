// checkerlab command line: tiling validation, transect discrepancies,
// extremal-line search, spectral checks, certificates, scaling experiments,
// and SVG board rendering. All subcommands read the same JSON config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "checkerlab/config.hpp"
#include "checkerlab/fourier.hpp"
#include "checkerlab/search.hpp"
#include "checkerlab/svg.hpp"

namespace {

using namespace checkerlab;

std::vector<double> parse_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

int cmd_validate(const ProblemConfig& pc) {
  const TilingReport rep = validate_tiling(pc.domain, pc.lattice);
  std::cout << to_json(rep).dump(2) << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_discrepancy(const ProblemConfig& pc, const std::string& line_arg,
                    const std::string& segment_arg, const std::string& profile_out,
                    const std::string& projection_out, int projection_count) {
  const auto lv = parse_csv_doubles(line_arg);
  if (lv.size() != 2) throw Error("--line expects THETA,OFFSET");
  const LineSpec line = LineSpec::canonical(lv[0], lv[1]);
  const TransectProfile prof = profile(pc.coloring, line);
  nlohmann::json j{{"theta", line.theta}, {"offset", line.offset}};
  const Complex li = prof.integral();
  j["line_integral"] = {{"re", li.real()}, {"im", li.imag()}, {"abs", std::abs(li)}};
  if (!segment_arg.empty()) {
    const auto sv = parse_csv_doubles(segment_arg);
    if (sv.size() != 2) throw Error("--segment expects S0,S1");
    const Complex si = prof.integral(sv[0], sv[1]);
    j["segment"] = {{"s0", sv[0]},
                    {"s1", sv[1]},
                    {"integral", {{"re", si.real()}, {"im", si.imag()}, {"abs", std::abs(si)}}}};
  }
  if (!profile_out.empty()) write_file(profile_out, to_csv(prof));
  if (!projection_out.empty()) {
    const double c = dot(pc.coloring.support_centroid(), line.u());
    const double w =
        0.5 * (pc.coloring.support_diameter() + pc.coloring.domain().diameter()) + 0.5;
    std::vector<double> grid(static_cast<std::size_t>(projection_count));
    for (int i = 0; i < projection_count; ++i)
      grid[static_cast<std::size_t>(i)] = c - w + 2.0 * w * i / (projection_count - 1);
    write_file(projection_out, to_csv(projection_samples(pc.coloring, line.theta, grid)));
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_search(const ProblemConfig& pc, ScanConfig cfg, const std::string& out_path) {
  // full deterministic grid dump, then the refined summary on stdout
  const double width = pc.coloring.support_diameter() + pc.coloring.domain().diameter();
  const int offsets = cfg.offsets_per_theta > 0
                          ? cfg.offsets_per_theta
                          : std::max(32, static_cast<int>(std::ceil(8.0 * width)));
  const Vec2 centroid = pc.coloring.support_centroid();
  std::string csv = "theta,offset,line_value,seg_value,seg_s0,seg_s1\n";
  char buf[256];
  std::size_t perturbations = 0;
  for (int ti = 0; ti < cfg.theta_count; ++ti) {
    const double theta = kPi * ti / cfg.theta_count;
    const double cu = dot(centroid, Vec2{std::cos(theta), std::sin(theta)});
    for (int oi = 0; oi < offsets; ++oi) {
      const double t = cu + width * ((oi + 0.5) / offsets - 0.5);
      auto [prof, used] = profile_with_retry(pc.coloring, theta, t, &perturbations,
                                             detail::u01(detail::mix64(
                                                 cfg.seed ^ (static_cast<std::uint64_t>(ti) << 32 |
                                                             static_cast<std::uint64_t>(oi)))));
      const auto [seg, seg_val] = prof.max_subsegment();
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", theta, used,
                    std::abs(prof.integral()), seg_val, seg.s0, seg.s1);
      csv += buf;
    }
  }
  if (!out_path.empty()) write_file(out_path, csv);
  ScanConfig run = cfg;
  run.offsets_per_theta = offsets;
  const ScanResult sr = scan(pc.coloring, run);
  std::cout << to_json(sr).dump(2) << "\n";
  return 0;
}

int cmd_fourier_check(const ProblemConfig& pc, std::uint64_t seed, const std::string& out_path) {
  const PolygonFT ftq(pc.domain);
  const Lattice2D dual = pc.lattice.dual();
  const PolygonDomain B = dual.voronoi_cell();

  double ts_min = 1e300, ts_max = -1e300;
  const double span = 2.0 * B.circumradius();
  for (int i = 0; i < 100; ++i) {
    const Vec2 xi{span * (detail::u01(detail::hash_point(seed, i, 0)) - 0.5),
                  span * (detail::u01(detail::hash_point(seed, i, 1)) - 0.5)};
    const double s = tiling_sum(ftq, dual, xi, 50.0);
    ts_min = std::min(ts_min, s);
    ts_max = std::max(ts_max, s);
  }

  const ParsevalCheck pars =
      parseval_phi_check(pc.coloring, B, pc.tolerances.quadrature_rel);
  double slice = 0.0;
  const std::vector<double> freqs{-1.5, -0.75, -0.25, 0.25, 0.75, 1.5};
  for (const double theta : {0.35, 1.1, 2.4})
    slice = std::max(slice, projection_slice_check(pc.coloring, ftq, theta, freqs));

  const double R = tail_radius(ftq, dual, B, pc.tolerances.tail_eps);
  nlohmann::json j{{"tiling_sum_min", ts_min},
                   {"tiling_sum_max", ts_max},
                   {"parseval_residual", pars.residual},
                   {"slice_residual", slice},
                   {"R", R},
                   {"Rprime", containment_radius(B, R)}};
  const std::string text = j.dump(2) + "\n";
  if (!out_path.empty()) write_file(out_path, text);
  std::cout << text;
  return 0;
}

int cmd_certify(const ProblemConfig& pc, ScanConfig cfg, const std::string& out_path) {
  const Certificate cert = certificate(pc.coloring, cfg);
  const std::string text = to_json(cert).dump(2) + "\n";
  if (!out_path.empty()) write_file(out_path, text);
  std::cout << text;
  std::cout << (cert.passed() ? "PASS" : "FAIL") << " margin=" << cert.margin << "\n";
  return cert.passed() ? 0 : 1;
}

int cmd_scaling(const ProblemConfig& pc, const std::string& r_arg, int trials, ScanConfig cfg,
                const std::string& out_path) {
  if (!pc.rule) throw Error("scaling requires a rule-based coloring (parity/random/constant)");
  const auto R_list = parse_csv_doubles(r_arg);
  const ScalingResult res =
      scaling_experiment(*pc.rule, pc.lattice, pc.domain, R_list, trials, cfg);
  if (!out_path.empty()) write_file(out_path, res.csv());
  nlohmann::json j{{"slope", res.slope}, {"slope_stderr", res.slope_stderr},
                   {"rows", res.rows.size()}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_render(const ProblemConfig& pc, const std::string& segment_arg,
               const std::string& out_path) {
  std::optional<Segment> seg;
  if (!segment_arg.empty()) {
    const auto sv = parse_csv_doubles(segment_arg);
    if (sv.size() != 4) throw Error("--segment expects THETA,OFFSET,S0,S1");
    seg = Segment(LineSpec::canonical(sv[0], sv[1]), sv[2], sv[3]);
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write " + out_path);
  render_svg(out, pc.coloring, seg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"line-segment discrepancy laboratory for lattice checkerboards"};
  app.require_subcommand(1);

  std::string config_path, out_path, line_arg, segment_arg, r_arg = "8,16,32,64";
  std::string profile_out, projection_out;
  ScanConfig cfg;
  int trials = 5;
  int projection_count = 256;
  std::uint64_t seed = 0;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON problem config")->required();
  };

  auto* validate = app.add_subcommand("validate", "check that the domain tiles the lattice");
  add_config(validate);

  auto* disc = app.add_subcommand("discrepancy", "integral of f along one line/segment");
  add_config(disc);
  disc->add_option("--line", line_arg, "THETA,OFFSET")->required();
  disc->add_option("--segment", segment_arg, "S0,S1");
  disc->add_option("--profile-out", profile_out, "CSV of the transect profile");
  disc->add_option("--projection-out", projection_out,
                   "CSV of projection samples at the line's angle");
  disc->add_option("--projection-count", projection_count, "projection grid size");

  auto* search = app.add_subcommand("search", "grid scan for extremal lines/segments");
  add_config(search);
  search->add_option("--thetas", cfg.theta_count);
  search->add_option("--offsets", cfg.offsets_per_theta);
  search->add_option("--refine", cfg.refine_rounds);
  search->add_option("--seed", cfg.seed);
  search->add_option("--out", out_path, "CSV of the full scan grid");

  auto* fc = app.add_subcommand("fourier-check", "spectral identity / Parseval / slice report");
  add_config(fc);
  fc->add_option("--seed", seed);
  fc->add_option("--out", out_path, "JSON report path");

  auto* certify = app.add_subcommand("certify", "explicit lower bound vs. scan maximum");
  add_config(certify);
  certify->add_option("--thetas", cfg.theta_count);
  certify->add_option("--offsets", cfg.offsets_per_theta);
  certify->add_option("--refine", cfg.refine_rounds);
  certify->add_option("--seed", cfg.seed);
  certify->add_option("--out", out_path, "certificate JSON path");

  auto* scaling = app.add_subcommand("scaling", "discrepancy growth against box size");
  add_config(scaling);
  scaling->add_option("--R", r_arg, "comma list of box sizes");
  scaling->add_option("--trials", trials);
  scaling->add_option("--thetas", cfg.theta_count);
  scaling->add_option("--offsets", cfg.offsets_per_theta);
  scaling->add_option("--refine", cfg.refine_rounds);
  scaling->add_option("--seed", cfg.seed);
  scaling->add_option("--out", out_path, "CSV path");

  auto* render = app.add_subcommand("render", "two-color SVG of the board");
  add_config(render);
  render->add_option("--segment", segment_arg, "THETA,OFFSET,S0,S1 overlay");
  render->add_option("--out", out_path, "SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const ProblemConfig pc = checkerlab::load_config(config_path);
    if (validate->parsed()) return cmd_validate(pc);
    if (disc->parsed())
      return cmd_discrepancy(pc, line_arg, segment_arg, profile_out, projection_out,
                             projection_count);
    if (search->parsed()) return cmd_search(pc, cfg, out_path);
    if (fc->parsed()) return cmd_fourier_check(pc, seed, out_path);
    if (certify->parsed()) return cmd_certify(pc, cfg, out_path);
    if (scaling->parsed()) return cmd_scaling(pc, r_arg, trials, cfg, out_path);
    if (render->parsed()) return cmd_render(pc, segment_arg, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
