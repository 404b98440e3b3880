#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <future>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "checkerlab/coloring.hpp"
#include "checkerlab/fourier.hpp"
#include "checkerlab/tiling.hpp"
#include "checkerlab/transect.hpp"

namespace checkerlab {

struct ScanConfig {
  int theta_count = 180;
  int offsets_per_theta = 0;  // 0: auto, ceil(8 * (D + diam Q))
  int refine_rounds = 2;
  std::uint64_t seed = 0;
  int workers = 0;  // 0: hardware concurrency
};

struct ScanResult {
  LineSpec best_line;
  double best_line_value = 0.0;  // max |line integral| over scanned lines
  Segment best_segment;
  double best_segment_value = 0.0;
  std::size_t degenerate_perturbations = 0;
  std::size_t scanned = 0;
  std::vector<double> incumbent_history;  // best segment value per refine round
};

namespace detail {

struct Incumbent {
  double value = -1.0;
  int ti = 0, oi = 0;
  LineSpec line;
  Segment seg;

  bool better_than(const Incumbent& o) const {
    if (value != o.value) return value > o.value;
    if (ti != o.ti) return ti < o.ti;
    return oi < o.oi;
  }
};

struct LineEval {
  double line_value = 0.0;
  Segment seg;
  double seg_value = 0.0;
  LineSpec line;
};

inline LineEval evaluate_line(const FiniteColoring& col, double theta, double offset,
                              std::uint64_t seed, std::uint64_t tag,
                              std::size_t* perturbations) {
  const double jitter = u01(mix64(seed ^ tag));
  auto [prof, used] = profile_with_retry(col, theta, offset, perturbations, jitter);
  LineEval e;
  e.line = prof.line();
  e.line.offset = used;
  e.line_value = std::abs(prof.integral());
  auto [seg, val] = prof.max_subsegment();
  e.seg = seg;
  e.seg_value = val;
  return e;
}

/// Golden-section maximization of `objective` on [a, b]; returns best (x, v).
template <class F>
std::pair<double, double> golden_max(F&& objective, double a, double b, int iters = 40) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    }
  }
  return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace detail

/// Grid scan over (theta, offset) followed by golden-section refinement of
/// the incumbents. The offset grid spans (D + diam Q) around the support
/// centroid, which covers the projection support for every direction.
/// Deterministic for a fixed config: degenerate lines are nudged with draws
/// keyed on (seed, theta index, offset index), and the parallel reduction
/// breaks ties by (value, theta, offset).
inline ScanResult scan(const FiniteColoring& col, ScanConfig cfg) {
  if (cfg.theta_count < 1 || cfg.refine_rounds < 0) throw Error("bad scan config");
  const double width = col.support_diameter() + col.domain().diameter();
  const int offsets = cfg.offsets_per_theta > 0
                          ? cfg.offsets_per_theta
                          : std::max(32, static_cast<int>(std::ceil(8.0 * width)));
  const Vec2 centroid = col.support_centroid();

  struct WorkerOut {
    detail::Incumbent line, seg;
    std::size_t perturbations = 0;
  };
  auto run_rows = [&](int t_begin, int t_end) {
    WorkerOut out;
    for (int ti = t_begin; ti < t_end; ++ti) {
      const double theta = kPi * ti / cfg.theta_count;
      const double cu = dot(centroid, Vec2{std::cos(theta), std::sin(theta)});
      for (int oi = 0; oi < offsets; ++oi) {
        const double t = cu + width * ((oi + 0.5) / offsets - 0.5);
        const auto tag =
            static_cast<std::uint64_t>(ti) << 32 | static_cast<std::uint64_t>(oi);
        const auto e =
            detail::evaluate_line(col, theta, t, cfg.seed, tag, &out.perturbations);
        const detail::Incumbent cl{e.line_value, ti, oi, e.line, e.seg};
        const detail::Incumbent cs{e.seg_value, ti, oi, e.line, e.seg};
        if (cl.better_than(out.line)) out.line = cl;
        if (cs.better_than(out.seg)) out.seg = cs;
      }
    }
    return out;
  };

  const int hw = cfg.workers > 0 ? cfg.workers
                                 : std::max(1u, std::thread::hardware_concurrency());
  const int chunks = std::min(cfg.theta_count, hw);
  std::vector<std::future<WorkerOut>> futs;
  for (int c = 0; c < chunks; ++c) {
    const int b = cfg.theta_count * c / chunks;
    const int e = cfg.theta_count * (c + 1) / chunks;
    futs.push_back(std::async(std::launch::async, run_rows, b, e));
  }
  detail::Incumbent best_line, best_seg;
  std::size_t perturbations = 0;
  for (auto& f : futs) {
    WorkerOut o = f.get();
    if (o.line.better_than(best_line)) best_line = o.line;
    if (o.seg.better_than(best_seg)) best_seg = o.seg;
    perturbations += o.perturbations;
  }

  ScanResult res;
  res.scanned = static_cast<std::size_t>(cfg.theta_count) * static_cast<std::size_t>(offsets);
  res.degenerate_perturbations = perturbations;
  res.incumbent_history.push_back(best_seg.value);

  // local refinement around each incumbent; only improvements are accepted,
  // so the history is nondecreasing
  const double dt = width / offsets;
  const double dth = kPi / cfg.theta_count;
  std::uint64_t eval_counter = 0;
  auto seg_objective = [&](double theta, double offset) {
    try {
      const auto e = detail::evaluate_line(col, theta, offset, cfg.seed,
                                           0x5eedULL + ++eval_counter, &perturbations);
      return e;
    } catch (const NonMeasurableTransect&) {
      return detail::LineEval{};
    }
  };
  // an incumbent usually sits on a ridge that is diagonal in (theta, offset);
  // alternate coordinate sweeps until a whole sweep stops paying
  auto refine = [&](detail::Incumbent& inc, bool segment_objective) {
    auto value_of = [&](const detail::LineEval& e) {
      return segment_objective ? e.seg_value : e.line_value;
    };
    for (int sweep = 0; sweep < 12; ++sweep) {
      const double before = inc.value;
      auto [t_best, v_t] = detail::golden_max(
          [&](double t) { return value_of(seg_objective(inc.line.theta, t)); },
          inc.line.offset - dt, inc.line.offset + dt);
      if (v_t > inc.value) {
        const auto e = seg_objective(inc.line.theta, t_best);
        inc.value = value_of(e);
        inc.line = e.line;
        inc.seg = e.seg;
      }
      auto [th_best, v_th] = detail::golden_max(
          [&](double th) { return value_of(seg_objective(th, inc.line.offset)); },
          inc.line.theta - dth, inc.line.theta + dth);
      if (v_th > inc.value) {
        const auto e = seg_objective(th_best, inc.line.offset);
        inc.value = value_of(e);
        inc.line = e.line;
        inc.seg = e.seg;
      }
      if (inc.value - before <= 1e-12 * (1.0 + std::abs(before))) break;
    }
  };
  for (int round = 0; round < cfg.refine_rounds; ++round) {
    refine(best_seg, true);
    refine(best_line, false);
    res.incumbent_history.push_back(best_seg.value);
  }
  res.degenerate_perturbations = perturbations;

  res.best_line = best_line.line;
  res.best_line_value = std::max(best_line.value, 0.0);
  if (best_seg.value < 0.0) {
    res.best_segment = Segment(LineSpec{}, 0.0, 1.0);
    res.best_segment_value = 0.0;
  } else {
    res.best_segment = best_seg.seg;
    res.best_segment_value = best_seg.value;
  }
  return res;
}

/// S intersected with supp F split into I = S ∩ [0,R]^2 and the overflow E.
struct CorollaryDecomposition {
  double i_s0 = 0.0, i_s1 = 0.0;  // s-range of I on the line
  double e_length = 0.0;          // support length outside I
  Complex integral_I{};
  Complex integral_S{};
};

inline CorollaryDecomposition corollary_decomposition(const FiniteColoring& col, LineSpec S,
                                                      double R) {
  // clip the line against [0, R]^2 (Liang-Barsky in s)
  const Vec2 p0 = S.point_at(0.0);
  const Vec2 d = S.u_perp();
  double s_lo = -std::numeric_limits<double>::infinity();
  double s_hi = std::numeric_limits<double>::infinity();
  const double p[4] = {-d.x, d.x, -d.y, d.y};
  const double q[4] = {p0.x - 0.0, R - p0.x, p0.y - 0.0, R - p0.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) throw Error("empty segment");
      continue;
    }
    const double t = q[i] / p[i];
    if (p[i] < 0.0)
      s_lo = std::max(s_lo, t);
    else
      s_hi = std::min(s_hi, t);
  }
  if (!(s_lo < s_hi)) throw Error("empty segment");

  CorollaryDecomposition out;
  out.i_s0 = s_lo;
  out.i_s1 = s_hi;
  const TransectProfile prof = profile(col, S);
  out.integral_S = prof.integral();
  out.integral_I = prof.empty() ? Complex{} : prof.integral(s_lo, s_hi);
  out.e_length = prof.support_length_outside(s_lo, s_hi);
  return out;
}

/// Full certificate: explicit lower bound plus the scan's empirical maximum
/// of |line integral| (the quantity the bound constrains).
inline Certificate certificate(const FiniteColoring& col, ScanConfig cfg) {
  const TilingReport rep = validate_tiling(col.domain(), col.lattice());
  if (!rep.pass) throw Error("certificate requires a validated tiling");
  Certificate cert = certificate_bound(col);
  const ScanResult sr = scan(col, cfg);
  cert.empirical_m = sr.best_line_value;
  cert.margin = cert.empirical_m - cert.bound;
  return cert;
}

// --- scaling experiment ------------------------------------------------------

struct ScalingRow {
  double R = 0.0;
  int trial = 0;
  double theta = 0.0;
  double offset = 0.0;
  double s0 = 0.0, s1 = 0.0;
  double seg_value = 0.0;
  double line_value = 0.0;
  double e_length = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  double slope = 0.0;
  double slope_stderr = 0.0;

  std::string csv() const {
    std::string out = "R,trial,theta,offset,s0,s1,seg_value,line_value,E_length\n";
    char buf[256];
    for (const ScalingRow& r : rows) {
      std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    r.R, r.trial, r.theta, r.offset, r.s0, r.s1, r.seg_value, r.line_value,
                    r.e_length);
      out += buf;
    }
    return out;
  }
};

/// Growth of the extremal segment discrepancy with the box size: for each R
/// and trial, color the box, scan, and record the best segment. The fitted
/// slope is the least-squares exponent of log(best) against log(R).
inline ScalingResult scaling_experiment(const ColoringRule& rule, const Lattice2D& lat,
                                        const PolygonDomain& q, std::span<const double> R_list,
                                        int trials, ScanConfig cfg) {
  if (trials < 1) throw Error("trials must be >= 1");
  for (std::size_t i = 1; i < R_list.size(); ++i)
    if (!(R_list[i - 1] < R_list[i])) throw Error("R_list must be increasing");
  ScalingResult res;
  std::vector<double> lx, ly;
  for (const double R : R_list) {
    for (int trial = 0; trial < trials; ++trial) {
      const ColoringRule trial_rule =
          rule.kind() == ColoringRule::Kind::Random
              ? rule.with_seed(detail::hash_point(cfg.seed, trial, 0))
              : rule;
      const FiniteColoring col = restrict_to_box(trial_rule, lat, q, R);
      ScanConfig run_cfg = cfg;
      run_cfg.seed = detail::hash_point(cfg.seed, trial, static_cast<std::int64_t>(R));
      const ScanResult sr = scan(col, run_cfg);
      ScalingRow row;
      row.R = R;
      row.trial = trial;
      row.theta = sr.best_segment.line.theta;
      row.offset = sr.best_segment.line.offset;
      row.s0 = sr.best_segment.s0;
      row.s1 = sr.best_segment.s1;
      row.seg_value = sr.best_segment_value;
      row.line_value = sr.best_line_value;
      try {
        row.e_length =
            corollary_decomposition(col, sr.best_segment.line, R).e_length;
      } catch (const Error&) {
        row.e_length = -1.0;  // best line misses the box entirely
      }
      res.rows.push_back(row);
      if (row.seg_value > 0.0) {
        lx.push_back(std::log(R));
        ly.push_back(std::log(row.seg_value));
      }
    }
  }
  // least squares y = a + b x
  const double n = static_cast<double>(lx.size());
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double denom = n * sxx - sx * sx;
    res.slope = (n * sxy - sx * sy) / denom;
    const double a = (sy - res.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - (a + res.slope * lx[i]);
      ss += r * r;
    }
    if (n > 2) res.slope_stderr = std::sqrt(ss / (n - 2) / (sxx - sx * sx / n));
  }
  return res;
}

}  // namespace checkerlab
