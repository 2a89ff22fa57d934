#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lowply/draw_path.hpp"
#include "lowply/drawing.hpp"
#include "lowply/errors.hpp"
#include "lowply/geometry.hpp"
#include "lowply/heavy_path.hpp"
#include "lowply/ply.hpp"
#include "lowply/tree.hpp"

namespace lowply {

enum class SectorMode { half_disk, quarter_disk };

inline const char* to_string(SectorMode m) { return m == SectorMode::half_disk ? "half" : "quarter"; }

/// Hanging subtrees a single path vertex can host.
inline int sector_capacity(SectorMode m) { return m == SectorMode::half_disk ? 2 : 4; }

struct LayoutConfig {
  SectorMode mode = SectorMode::quarter_disk;
  double base = 6.0;        // b, ratio between consecutive decomposition levels
  double inflation = kSqrt2;  // λ, multiplies every sector radius and path scale
  double unit = 1.0;        // shortest edge length
};

struct GuardDisk {
  Vertex vertex = kNoVertex;
  Point center;
  double radius = 0.0;
};

struct Sector {
  Vertex anchor = kNoVertex;  // kNoVertex for the root path
  Point apex;
  Point direction;            // unit vector along the path ray (the sector bisector)
  double radius = 0.0;
  double angle = 0.0;         // full opening angle
  double scale = 0.0;         // factor applied to the DrawPath lengths of this path
  std::vector<GuardDisk> guards;
};

/// One sector per heavy-path node, indexed like the decomposition nodes.
struct SectorPlan {
  LayoutConfig config;
  int height = 0;
  std::vector<Sector> sectors;
};

struct LogPlyLayout {
  Drawing drawing;
  SectorPlan plan;
  HeavyPathTree decomposition;
};

namespace detail {

inline void check_layout_config(const LayoutConfig& c) {
  if (!(c.base >= 6.0) || !std::isfinite(c.base)) throw PreconditionError("invalid config: base must be >= 6");
  if (!(c.inflation >= 1.0) || !std::isfinite(c.inflation))
    throw PreconditionError("invalid config: inflation must be >= 1");
  if (!(c.unit > 0.0) || !std::isfinite(c.unit)) throw PreconditionError("invalid config: unit must be > 0");
}

// Bisector offsets of the child sectors at one anchor, relative to the path ray.
inline std::span<const double> child_offsets(SectorMode m) {
  static constexpr double half[] = {kPi / 2, -kPi / 2};
  static constexpr double quarter[] = {kPi / 4, -kPi / 4, 3 * kPi / 4, -3 * kPi / 4};
  if (m == SectorMode::half_disk) return half;
  return quarter;
}

inline double sector_angle(SectorMode m) { return m == SectorMode::half_disk ? kPi : kPi / 2; }

}  // namespace detail

/// Log-ply layout: every heavy path is drawn as a scaled 2-drawing along the
/// bisector of its sector, and the subtrees hanging at a path vertex get
/// smaller sectors anchored at that vertex.
///
/// A path at decomposition depth d < h uses scale s = λ·unit·b^(h-d-1) and
/// guard radius s·w_i; its sector has radius b·s·n_μ. Paths at depth h have no
/// hanging subtrees and are drawn with unit edges. The anchor edge is
/// stretched to at least w_1/sin(angle/2) so the first guard disk clears the
/// sector boundary, and to at least ℓ_1·sin(angle/2) so the path stays a
/// 2-drawing.
inline LogPlyLayout layout_logply(const RootedTree& tree, const LayoutConfig& config = {}) {
  detail::check_layout_config(config);
  if (tree.empty()) throw PreconditionError("layout_logply needs a non-empty tree");
  const int cap = sector_capacity(config.mode);
  for (Vertex v = 0; v < static_cast<Vertex>(tree.size()); ++v) {
    const int hanging = static_cast<int>(tree.children(v).size()) - (tree.is_leaf(v) ? 0 : 1);
    if (hanging > cap)
      throw PreconditionError("vertex " + std::to_string(tree.id(v)) + " has " + std::to_string(hanging) +
                                  " hanging subtrees; " + to_string(config.mode) + "-disk mode allows " +
                                  std::to_string(cap),
                              tree.id(v));
  }

  LogPlyLayout out;
  out.decomposition = decompose(tree);
  const auto& hpt = out.decomposition;
  const int h = hpt.height();
  const double kappa = 1.0 / std::sin(detail::sector_angle(config.mode) / 2.0);
  const auto offsets = detail::child_offsets(config.mode);

  out.plan.config = config;
  out.plan.height = h;
  out.plan.sectors.resize(hpt.nodes.size());
  std::vector<Point> pos(tree.size());

  // BFS order: a node's sector is fixed before the node is visited.
  out.plan.sectors[0].apex = Point{};
  out.plan.sectors[0].direction = Point{0.0, 1.0};
  for (int id = 0; id < static_cast<int>(hpt.nodes.size()); ++id) {
    const auto& node = hpt.nodes[id];
    Sector& sec = out.plan.sectors[id];
    sec.anchor = node.anchor;
    sec.angle = detail::sector_angle(config.mode);
    const double level = std::pow(config.base, h - node.depth);
    sec.radius = config.inflation * config.unit * level * static_cast<double>(node.total_weight);

    const std::size_t m = node.path.size();
    std::vector<double> len(m, 1.0);
    double anchor_len = 1.0;
    double guard_factor = 0.5;
    if (node.depth < h) {
      sec.scale = config.inflation * config.unit * level / config.base;
      len = drawpath_lengths(node.weights);
      anchor_len = std::max(len[0], kappa * static_cast<double>(node.weights[0]));
      if (m > 1) anchor_len = std::max(anchor_len, len[1] / kappa);
      guard_factor = 1.0;
    } else {
      sec.scale = config.unit;
    }

    if (id == hpt.root_node) sec.apex = Point{} - (sec.scale * anchor_len) * sec.direction;  // root vertex at origin
    Point p = sec.apex + (sec.scale * anchor_len) * sec.direction;
    for (std::size_t i = 0; i < m; ++i) {
      if (i > 0) p = p + (sec.scale * len[i]) * sec.direction;
      pos[node.path[i]] = p;
      sec.guards.push_back({node.path[i], p, sec.scale * guard_factor * static_cast<double>(node.weights[i])});
    }

    Vertex current = kNoVertex;
    int slot = 0;
    for (const auto& child : node.children) {
      if (child.anchor != current) {
        current = child.anchor;
        slot = 0;
      }
      Sector& cs = out.plan.sectors[child.node];
      cs.apex = pos[child.anchor];
      cs.direction = rotate(sec.direction, offsets[slot++]);
    }
  }

  out.drawing = drawing_for_tree(tree, std::move(pos));

  // Coordinates far from the origin lose a few ulps, which can shave the
  // shortest edge just below the unit. A uniform rescale of drawing and plan
  // about the origin restores it without touching any other predicate.
  double rescale = 1.0;
  for (int round = 0; round < 8 && !out.drawing.edges.empty(); ++round) {
    const double shortest = measure_area(out.drawing).min_edge;
    if (shortest >= config.unit) break;
    const double f = (config.unit / shortest) * (1.0 + 0x1p-40 * (round + 1));
    rescale *= f;
    for (auto& p : out.drawing.positions) p = f * p;
    for (auto& sec : out.plan.sectors) {
      sec.apex = f * sec.apex;
      sec.radius *= f;
      sec.scale *= f;
      for (auto& g : sec.guards) {
        g.center = f * g.center;
        g.radius *= f;
      }
    }
  }
  out.drawing.meta = {{"generator", "logply"},
                      {"mode", to_string(config.mode)},
                      {"base", config.base},
                      {"inflation", config.inflation},
                      {"unit", config.unit},
                      {"rescale", rescale}};
  return out;
}

/// Machine check of the construction. Each violation names its category:
/// 2-drawing, min edge, root radius, guard overlap, child sector, containment,
/// ply disk.
inline std::vector<std::string> sector_plan_violations(const RootedTree& tree, const LogPlyLayout& layout) {
  std::vector<std::string> out;
  const auto& hpt = layout.decomposition;
  const auto& plan = layout.plan;
  const auto& pos = layout.drawing.positions;
  const auto& cfg = plan.config;
  auto vid = [&](Vertex v) { return std::to_string(tree.id(v)); };
  if (plan.sectors.size() != hpt.nodes.size() || pos.size() != tree.size()) {
    out.push_back("structure: plan does not match the decomposition");
    return out;
  }
  // relative slack plus rounding proportional to the coordinates involved
  auto slack = [&](double scale, Point a, Point b) {
    return 1e-9 * scale + kCoordinateSlack * (norm(a) + norm(b));
  };

  for (std::size_t e = 0; e < layout.drawing.edges.size(); ++e)
    if (layout.drawing.edge_length(e) < cfg.unit)
      out.push_back("min edge: edge into vertex " + std::to_string(layout.drawing.ids[layout.drawing.edges[e].second]) +
                    " is shorter than the unit");

  const double expected_root = cfg.inflation * cfg.unit * std::pow(cfg.base, plan.height) * static_cast<double>(tree.size());
  // the rounding rescale in layout_logply stays far below 1e-6
  if (std::abs(plan.sectors[hpt.root_node].radius - expected_root) > 1e-6 * expected_root)
    out.push_back("root radius: root sector radius differs from inflation * base^h * n");

  for (int id = 0; id < static_cast<int>(hpt.nodes.size()); ++id) {
    const auto& node = hpt.nodes[id];
    const Sector& sec = plan.sectors[id];
    const auto tag = "node " + std::to_string(id);

    // the path with its anchor edge, as lengths along the ray
    std::vector<double> lens;
    Point prev = sec.apex;
    for (Vertex v : node.path) {
      lens.push_back(distance(prev, pos[v]));
      const Point along = pos[v] - prev;
      if (dot(along, sec.direction) <= 0.0 ||
          std::abs(along.x * sec.direction.y - along.y * sec.direction.x) > slack(norm(along), prev, pos[v]))
        out.push_back("2-drawing: " + tag + " vertex " + vid(v) + " is off the path ray");
      prev = pos[v];
    }
    for (std::size_t i = (id == hpt.root_node ? 2 : 1); i < lens.size(); ++i) {
      const double r = lens[i] / lens[i - 1];
      const Point far = i >= 2 ? pos[node.path[i - 2]] : sec.apex;
      const double tol = 1e-12 + 4.0 * kCoordinateSlack * (norm(far) + norm(pos[node.path[i]])) / lens[i - 1];
      if (r < 0.5 - tol || r > 2.0 + tol)
        out.push_back("2-drawing: " + tag + " consecutive edge ratio " + std::to_string(r) + " at vertex " +
                      vid(node.path[i]));
    }

    // guard disks along one path: centers are ordered along the ray
    for (std::size_t i = 0; i < sec.guards.size(); ++i) {
      for (std::size_t j = i + 1; j < sec.guards.size(); ++j) {
        const auto& a = sec.guards[i];
        const auto& b = sec.guards[j];
        const double gap = distance(a.center, b.center) - (a.radius + b.radius);
        if (gap < -slack(a.radius + b.radius, a.center, b.center))
          out.push_back("guard overlap: " + tag + " vertices " + vid(a.vertex) + " and " + vid(b.vertex));
      }
    }

    if (id != hpt.root_node) {
      const Sector& parent = plan.sectors[node.parent_node];
      const GuardDisk* guard = nullptr;
      for (const auto& g : parent.guards)
        if (g.vertex == node.anchor) guard = &g;
      if (guard == nullptr) {
        out.push_back("child sector: " + tag + " anchor has no guard disk");
      } else if (distance(sec.apex, guard->center) > slack(guard->radius, sec.apex, guard->center) ||
                 sec.radius > guard->radius + slack(guard->radius, sec.apex, guard->center)) {
        out.push_back("child sector: " + tag + " is not inside the guard disk of vertex " + vid(node.anchor));
      }
    }
  }

  // every vertex of T_ν inside sector ν; every ply disk of T_ν inside the wedge
  // of ν and, below the root, inside the guard disk of ν's anchor
  const PlyDiskSet disks = ply_disks(layout.drawing);
  std::vector<std::vector<int>> members(hpt.nodes.size());
  for (int id = static_cast<int>(hpt.nodes.size()) - 1; id >= 0; --id) {
    auto& mine = members[id];
    for (Vertex v : hpt.nodes[id].path) mine.push_back(v);
    for (const auto& ch : hpt.nodes[id].children) {
      mine.insert(mine.end(), members[ch.node].begin(), members[ch.node].end());
      std::vector<int>().swap(members[ch.node]);
    }
    const Sector& sec = plan.sectors[id];
    const double half = sec.angle / 2.0;
    const Point side_a = rotate(sec.direction, half - kPi / 2);  // inward normals of the two boundary rays
    const Point side_b = rotate(sec.direction, kPi / 2 - half);
    const GuardDisk* guard = nullptr;
    if (id != hpt.root_node)
      for (const auto& g : plan.sectors[hpt.nodes[id].parent_node].guards)
        if (g.vertex == hpt.nodes[id].anchor) guard = &g;
    for (Vertex v : mine) {
      const Point rel = pos[v] - sec.apex;
      const double tol = slack(sec.radius, pos[v], sec.apex);
      if (norm(rel) > sec.radius + tol || dot(rel, side_a) < -tol || dot(rel, side_b) < -tol)
        out.push_back("containment: vertex " + vid(v) + " lies outside the sector of node " + std::to_string(id));
      if (disks.empty()) continue;
      const double r = disks.disks[v].radius;
      if (dot(rel, side_a) < r - tol || dot(rel, side_b) < r - tol)
        out.push_back("ply disk: vertex " + vid(v) + " disk leaves the wedge of node " + std::to_string(id));
      if (guard != nullptr && distance(pos[v], guard->center) + r > guard->radius + slack(guard->radius, pos[v], guard->center))
        out.push_back("ply disk: vertex " + vid(v) + " disk leaves the guard disk of vertex " + vid(guard->vertex));
    }
  }
  return out;
}

/// The root path has no parent edge, so the root may hang one subtree more
/// than the mode allows elsewhere. Trees whose root exceeds that are rerooted
/// at their first leaf; every other vertex keeps its degree and loses nothing.
inline RootedTree reroot_for_capacity(const RootedTree& tree, SectorMode mode) {
  if (tree.empty() || static_cast<int>(tree.children(tree.root()).size()) <= sector_capacity(mode) + 1) return tree;
  for (Vertex v = 0; v < static_cast<Vertex>(tree.size()); ++v)
    if (tree.is_leaf(v)) return rerooted(tree, tree.id(v));
  return tree;
}

/// Collinear drawing of a path along +x: vertex 0 at the origin, then one
/// vertex per length.
inline Drawing line_drawing(std::span<const double> lengths) {
  Drawing d;
  d.ids.push_back(0);
  d.positions.push_back({});
  double x = 0.0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    x += lengths[i];
    d.ids.push_back(static_cast<VertexId>(i + 1));
    d.positions.push_back({x, 0.0});
    d.edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
  }
  d.meta = {{"generator", "line"}};
  return d;
}

inline constexpr double kDefaultSpiralAngle = 2.4;

namespace detail {

struct StarShape {
  Vertex center = kNoVertex;
  std::vector<Vertex> leaves;
};

inline StarShape star_shape(const RootedTree& tree) {
  if (tree.size() < 2) throw PreconditionError("a star needs at least one leaf");
  StarShape s;
  for (Vertex v = 0; v < static_cast<Vertex>(tree.size()); ++v)
    if (tree.degree(v) == static_cast<int>(tree.size()) - 1) s.center = v;
  if (tree.size() == 2) s.center = tree.root();
  if (s.center == kNoVertex) throw PreconditionError("tree is not a star");
  for (Vertex v = 0; v < static_cast<Vertex>(tree.size()); ++v)
    if (v != s.center) s.leaves.push_back(v);
  return s;
}

inline Drawing star_drawing(const RootedTree& tree, const std::vector<Point>& leaf_pos) {
  const auto shape = star_shape(tree);
  std::vector<Point> pos(tree.size());
  for (std::size_t i = 0; i < shape.leaves.size(); ++i) pos[shape.leaves[i]] = leaf_pos[i];
  return drawing_for_tree(tree, std::move(pos));
}

inline std::vector<Point> spiral_points(int leaves, double ratio, double angle) {
  if (leaves < 1) throw PreconditionError("star needs at least one leaf");
  if (!(ratio > 1.0) || !std::isfinite(ratio)) throw PreconditionError("spiral ratio must be > 1");
  if (!(angle > 0.0) || !(angle < kTwoPi)) throw PreconditionError("spiral angle must lie in (0, 2pi)");
  if (!std::isfinite(2.0 * std::pow(ratio, leaves - 1)))
    throw PreconditionError("spiral radii overflow double precision for " + std::to_string(leaves) + " leaves");
  std::vector<Point> pts;
  for (int i = 0; i < leaves; ++i) pts.push_back(std::pow(ratio, i) * unit_vector(i * angle));
  return pts;
}

inline std::vector<Point> circle_points(int leaves, double radius) {
  if (leaves < 1) throw PreconditionError("star needs at least one leaf");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw PreconditionError("star radius must be > 0");
  std::vector<Point> pts;
  for (int i = 0; i < leaves; ++i) pts.push_back(radius * unit_vector(kTwoPi * i / leaves));
  return pts;
}

}  // namespace detail

/// Star with leaf i at polar radius ratio^i and angle i·angle; ply 2 for the
/// default parameters.
inline Drawing star_ply2_layout(int leaves, double ratio = 2.0, double angle = kDefaultSpiralAngle) {
  auto d = detail::star_drawing(star(leaves), detail::spiral_points(leaves, ratio, angle));
  d.meta = {{"generator", "star2"}, {"ratio", ratio}, {"angle", angle}};
  return d;
}

inline Drawing star_ply2_layout(const RootedTree& tree, double ratio = 2.0, double angle = kDefaultSpiralAngle) {
  auto d = detail::star_drawing(
      tree, detail::spiral_points(static_cast<int>(detail::star_shape(tree).leaves.size()), ratio, angle));
  d.meta = {{"generator", "star2"}, {"ratio", ratio}, {"angle", angle}};
  return d;
}

/// Leaves evenly spaced on a circle around the center.
inline Drawing regular_star_layout(int leaves, double radius = 1.0) {
  auto d = detail::star_drawing(star(leaves), detail::circle_points(leaves, radius));
  d.meta = {{"generator", "regular-star"}, {"radius", radius}};
  return d;
}

inline Drawing regular_star_layout(const RootedTree& tree, double radius = 1.0) {
  auto d = detail::star_drawing(
      tree, detail::circle_points(static_cast<int>(detail::star_shape(tree).leaves.size()), radius));
  d.meta = {{"generator", "regular-star"}, {"radius", radius}};
  return d;
}

/// Radial drawing with equal angular sectors per child. The edge entering
/// depth k has length unit / shrink^(k-1), so with shrink < 1/3 every edge
/// dominates its parent edge. No ply guarantee.
inline Drawing radial_layout(const RootedTree& tree, double shrink = 0.25, double unit = 1.0) {
  if (!(shrink > 0.0) || !std::isfinite(shrink)) throw PreconditionError("radial shrink must be > 0");
  if (!(unit > 0.0) || !std::isfinite(unit)) throw PreconditionError("radial unit must be > 0");
  if (tree.empty()) throw PreconditionError("radial_layout needs a non-empty tree");
  const auto ann = annotate(tree);
  std::vector<Point> pos(tree.size());
  std::vector<double> lo(tree.size(), 0.0), hi(tree.size(), kTwoPi);
  for (Vertex v : tree.preorder()) {
    const auto kids = tree.children(v);
    const double step = (hi[v] - lo[v]) / static_cast<double>(std::max<std::size_t>(kids.size(), 1));
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const Vertex c = kids[i];
      lo[c] = lo[v] + step * static_cast<double>(i);
      hi[c] = lo[c] + step;
      const double len = unit * std::pow(shrink, -(ann.depth[c] - 1));
      pos[c] = pos[v] + len * unit_vector((lo[c] + hi[c]) / 2.0);
    }
  }
  auto d = drawing_for_tree(tree, std::move(pos));
  d.meta = {{"generator", "radial"}, {"shrink", shrink}, {"unit", unit}};
  return d;
}

}  // namespace lowply
