#pragma once

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "lowply/drawing.hpp"
#include "lowply/layout.hpp"
#include "lowply/ply.hpp"

namespace lowply {

struct SvgOptions {
  bool show_ply_disks = false;
  bool show_sectors = false;  // needs a plan
};

namespace detail {

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

// Maps drawing coordinates into the 1000x1000 canvas, y pointing up.
struct Viewport {
  double lo_x = 0, lo_y = 0, scale = 1, off_x = 0, off_y = 0;

  static constexpr double kSize = 1000.0;
  static constexpr double kPad = 20.0;

  Point map(Point p) const { return {off_x + (p.x - lo_x) * scale, kSize - (off_y + (p.y - lo_y) * scale)}; }
};

}  // namespace detail

/// SVG rendering scaled to a 1000x1000 viewport with preserved aspect ratio.
/// Vertices are <rect class="vertex">, edges <line class="edge">, ply-disks
/// <circle class="ply-disk">, sectors <path class="sector">.
inline std::string emit_svg(const Drawing& d, const SvgOptions& opt = {}, const SectorPlan* plan = nullptr) {
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  auto grow = [&](Point p, double r) {
    lo_x = std::min(lo_x, p.x - r);
    hi_x = std::max(hi_x, p.x + r);
    lo_y = std::min(lo_y, p.y - r);
    hi_y = std::max(hi_y, p.y + r);
  };
  for (const auto& p : d.positions) grow(p, 0.0);
  PlyDiskSet disks;
  if (opt.show_ply_disks && d.size() > 1) {
    disks = ply_disks(d);
    for (const auto& disk : disks.disks) grow(disk.center, disk.radius);
  }
  const bool sectors = opt.show_sectors && plan != nullptr;
  if (sectors)
    for (const auto& s : plan->sectors) grow(s.apex, s.radius);
  if (!(lo_x <= hi_x)) lo_x = hi_x = lo_y = hi_y = 0.0;

  detail::Viewport vp;
  const double span = std::max(hi_x - lo_x, hi_y - lo_y);
  const double inner = detail::Viewport::kSize - 2 * detail::Viewport::kPad;
  vp.lo_x = lo_x;
  vp.lo_y = lo_y;
  vp.scale = span > 0.0 ? inner / span : 1.0;
  vp.off_x = detail::Viewport::kPad + (inner - (hi_x - lo_x) * vp.scale) / 2;
  vp.off_y = detail::Viewport::kPad + (inner - (hi_y - lo_y) * vp.scale) / 2;

  using detail::fmt_num;
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n";
  out += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
  if (sectors) {
    for (const auto& s : plan->sectors) {
      const Point a = vp.map(s.apex);
      const Point from = vp.map(s.apex + s.radius * rotate(s.direction, -s.angle / 2));
      const Point to = vp.map(s.apex + s.radius * rotate(s.direction, s.angle / 2));
      const std::string r = fmt_num(s.radius * vp.scale);
      // counterclockwise in the drawing is clockwise on screen: sweep flag 1
      out += "<path class=\"sector\" d=\"M " + fmt_num(a.x) + " " + fmt_num(a.y) + " L " + fmt_num(from.x) + " " +
             fmt_num(from.y) + " A " + r + " " + r + " 0 0 1 " + fmt_num(to.x) + " " + fmt_num(to.y) +
             " Z\" fill=\"none\" stroke=\"#9ab\" stroke-width=\"0.5\"/>\n";
    }
  }
  for (const auto& disk : disks.disks) {
    const Point c = vp.map(disk.center);
    out += "<circle class=\"ply-disk\" cx=\"" + fmt_num(c.x) + "\" cy=\"" + fmt_num(c.y) + "\" r=\"" +
           fmt_num(disk.radius * vp.scale) + "\" fill=\"#4a90d9\" fill-opacity=\"0.12\" stroke=\"#4a90d9\" stroke-width=\"0.5\"/>\n";
  }
  for (const auto& [a, b] : d.edges) {
    const Point p = vp.map(d.positions[a]);
    const Point q = vp.map(d.positions[b]);
    out += "<line class=\"edge\" x1=\"" + fmt_num(p.x) + "\" y1=\"" + fmt_num(p.y) + "\" x2=\"" + fmt_num(q.x) +
           "\" y2=\"" + fmt_num(q.y) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Point p = vp.map(d.positions[i]);
    out += "<rect class=\"vertex\" data-id=\"" + std::to_string(d.ids[i]) + "\" x=\"" + fmt_num(p.x - 2) + "\" y=\"" +
           fmt_num(p.y - 2) + "\" width=\"4\" height=\"4\" fill=\"#c0392b\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace lowply
