#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include "checkerlab/coloring.hpp"
#include "checkerlab/transect.hpp"

namespace checkerlab {

/// Two-color board rendering: one polygon per colored tile, fill by the sign
/// of the real part of the weight, optional overlaid segment.
inline void render_svg(std::ostream& out, const FiniteColoring& col,
                       std::optional<Segment> segment = std::nullopt, int width_px = 800) {
  const auto& lat = col.lattice();
  const auto& q = col.domain();

  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (const auto& p : col.support()) {
    const Vec2 g = lat.point(p);
    for (const Vec2& v : q.vertices()) {
      minx = std::min(minx, v.x + g.x);
      maxx = std::max(maxx, v.x + g.x);
      miny = std::min(miny, v.y + g.y);
      maxy = std::max(maxy, v.y + g.y);
    }
  }
  if (col.support().empty()) minx = miny = 0, maxx = maxy = 1;
  const double w = maxx - minx, h = maxy - miny;
  const double k = width_px / std::max(w, 1e-12);
  const int height_px = static_cast<int>(h * k + 0.5);
  auto X = [&](double x) { return (x - minx) * k; };
  auto Y = [&](double y) { return (maxy - y) * k; };

  char buf[128];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\""
      << height_px << "\" viewBox=\"0 0 " << width_px << " " << height_px << "\">\n";
  for (std::size_t i = 0; i < col.support().size(); ++i) {
    const Vec2 g = lat.point(col.support()[i]);
    const double re = col.weights()[i].real();
    const char* fill = re > 0 ? "#f4f1e8" : (re < 0 ? "#33383d" : "#b0b0b0");
    out << "<polygon points=\"";
    for (const Vec2& v : q.vertices()) {
      std::snprintf(buf, sizeof buf, "%.3f,%.3f ", X(v.x + g.x), Y(v.y + g.y));
      out << buf;
    }
    out << "\" fill=\"" << fill << "\" stroke=\"#777\" stroke-width=\"0.6\"/>\n";
  }
  if (segment) {
    const Vec2 a = segment->line.point_at(segment->s0);
    const Vec2 b = segment->line.point_at(segment->s1);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" ", X(a.x), Y(a.y),
                  X(b.x), Y(b.y));
    out << buf << "stroke=\"#d62828\" stroke-width=\"3\" stroke-linecap=\"round\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace checkerlab
