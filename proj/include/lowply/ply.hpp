#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lowply/drawing.hpp"
#include "lowply/errors.hpp"
#include "lowply/geometry.hpp"

namespace lowply {

struct PlyDisk {
  VertexId id = 0;
  Point center;
  double radius = 0.0;
};

struct PlyDiskSet {
  std::vector<PlyDisk> disks;

  std::size_t size() const { return disks.size(); }
  bool empty() const { return disks.empty(); }
};

enum class PlyMethod { exact_sweep, candidate_oracle, sampling };

inline const char* to_string(PlyMethod m) {
  switch (m) {
    case PlyMethod::exact_sweep:
      return "exact-sweep";
    case PlyMethod::candidate_oracle:
      return "candidate-oracle";
    case PlyMethod::sampling:
      return "sampling";
  }
  return "?";
}

struct PlyReport {
  int ply = 0;
  Point witness;
  PlyMethod method = PlyMethod::exact_sweep;
  double tolerance = 0.0;
};

/// Relative tolerance: a point counts as inside disk j only when it is at
/// least tol·r_j (plus coordinate rounding slack) inside the boundary, and two
/// disks overlap only when they interpenetrate by more than that. Exact
/// tangencies therefore never overlap.
inline constexpr double kDefaultPlyTolerance = 1e-9;

// Absolute slack per unit of coordinate magnitude. Coordinates far from the
// origin carry rounding error proportional to their size; decisions finer
// than that are noise.
inline constexpr double kCoordinateSlack = 0x1p-42;

/// Open ply-disks: radius is half the longest incident edge.
inline PlyDiskSet ply_disks(const Drawing& drawing) {
  PlyDiskSet set;
  const auto n = drawing.size();
  if (n == 1) return set;
  std::vector<double> radius(n, 0.0);
  for (std::size_t e = 0; e < drawing.edges.size(); ++e) {
    const double len = drawing.edge_length(e);
    if (!(len > 0.0)) {
      const auto [a, b] = drawing.edges[e];
      throw PreconditionError("zero-length edge " + std::to_string(drawing.ids[a]) + "-" +
                                  std::to_string(drawing.ids[b]),
                              drawing.ids[a]);
    }
    radius[drawing.edges[e].first] = std::max(radius[drawing.edges[e].first], len / 2.0);
    radius[drawing.edges[e].second] = std::max(radius[drawing.edges[e].second], len / 2.0);
  }
  set.disks.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (radius[v] == 0.0)
      throw PreconditionError("vertex " + std::to_string(drawing.ids[v]) + " has no incident edge", drawing.ids[v]);
    set.disks.push_back({drawing.ids[v], drawing.positions[v], radius[v]});
  }
  return set;
}

namespace detail {

inline double point_margin(const PlyDisk& disk, Point q, double tol) {
  return tol * disk.radius + kCoordinateSlack * (norm(disk.center) + norm(q));
}

inline bool strictly_inside(const PlyDisk& disk, Point q, double tol) {
  return distance(disk.center, q) < disk.radius - point_margin(disk, q, tol);
}

inline double pair_slack(const PlyDisk& a, const PlyDisk& b, double tol) {
  return tol * (a.radius + b.radius) + 2.0 * kCoordinateSlack * (norm(a.center) + norm(b.center));
}

struct Box {
  double lo_x, lo_y, hi_x, hi_y;

  bool overlaps(const Box& o) const {
    return lo_x <= o.hi_x && o.lo_x <= hi_x && lo_y <= o.hi_y && o.lo_y <= hi_y;
  }
  bool contains(Point p) const { return lo_x <= p.x && p.x <= hi_x && lo_y <= p.y && p.y <= hi_y; }
};

inline Box disk_box(const PlyDisk& d) {
  return {d.center.x - d.radius, d.center.y - d.radius, d.center.x + d.radius, d.center.y + d.radius};
}

/// Static bounding-volume hierarchy over disk bounding boxes.
class DiskIndex {
 public:
  explicit DiskIndex(std::span<const PlyDisk> disks) : disks_(disks) {
    order_.resize(disks.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!disks.empty()) build(0, static_cast<int>(disks.size()));
  }

  template <class F>
  void for_each_box_overlap(const Box& query, F&& visit) const {
    if (nodes_.empty()) return;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      const Node& node = nodes_[stack.back()];
      stack.pop_back();
      if (!node.box.overlaps(query)) continue;
      if (node.left < 0) {
        for (int k = node.begin; k < node.end; ++k)
          if (disk_box(disks_[order_[k]]).overlaps(query)) visit(order_[k]);
      } else {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    }
  }

  /// Number of disks strictly containing q under the tolerance rule.
  int depth(Point q, double tol) const {
    int count = 0;
    for_each_box_overlap(Box{q.x, q.y, q.x, q.y}, [&](int j) {
      if (strictly_inside(disks_[j], q, tol)) ++count;
    });
    return count;
  }

 private:
  struct Node {
    Box box;
    int left = -1, right = -1;
    int begin = 0, end = 0;
  };

  int build(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    Box box = disk_box(disks_[order_[begin]]);
    for (int k = begin + 1; k < end; ++k) {
      const Box b = disk_box(disks_[order_[k]]);
      box = {std::min(box.lo_x, b.lo_x), std::min(box.lo_y, b.lo_y), std::max(box.hi_x, b.hi_x),
             std::max(box.hi_y, b.hi_y)};
    }
    nodes_[id].box = box;
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    if (end - begin <= 8) return id;
    const bool split_x = (box.hi_x - box.lo_x) >= (box.hi_y - box.lo_y);
    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, [&](int a, int b) {
      return split_x ? disks_[a].center.x < disks_[b].center.x : disks_[a].center.y < disks_[b].center.y;
    });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::span<const PlyDisk> disks_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

inline Box inflated(Box b, double pad) { return {b.lo_x - pad, b.lo_y - pad, b.hi_x + pad, b.hi_y + pad}; }

inline double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

/// Points just inside disk i at the given boundary angle, from deep to
/// shallow. The caller keeps the first that scores.
inline std::array<Point, 4> inward_ladder(const PlyDisk& disk, double angle, double tol) {
  const Point dir = unit_vector(angle);
  const Point rim = disk.center + disk.radius * dir;
  const double floor = 4.0 * point_margin(disk, rim, tol);
  const std::array<double, 4> steps{1e-3 * disk.radius, 1e-6 * disk.radius, 1e-9 * disk.radius, floor};
  std::array<Point, 4> pts;
  for (std::size_t k = 0; k < steps.size(); ++k)
    pts[k] = disk.center + (disk.radius - std::max(steps[k], floor)) * dir;
  return pts;
}

}  // namespace detail

/// Number of disks whose open interior strictly contains q (with tolerance).
inline int depth_at_point(const PlyDiskSet& set, Point q, double tol = kDefaultPlyTolerance) {
  int count = 0;
  for (const auto& d : set.disks)
    if (detail::strictly_inside(d, q, tol)) ++count;
  return count;
}

/// Maximum depth of the arrangement of open disks.
///
/// For every circle, each other disk covers an open arc of it (nothing, all of
/// it, or one arc). The deepest cell is bounded by an arc of one of its
/// covering circles, so the answer is the best "1 + arcs stabbed" over all
/// circles. The stabbing count is a sweep over angle with ends before starts.
inline PlyReport exact_ply(const PlyDiskSet& set, double tol = kDefaultPlyTolerance) {
  if (set.empty()) throw PreconditionError("exact_ply needs at least one disk");
  const auto& disks = set.disks;
  const detail::DiskIndex index(disks);

  int best = 0;
  int best_circle = 0;
  double best_angle = 0.0;
  std::vector<std::pair<double, int>> events;

  for (int i = 0; i < static_cast<int>(disks.size()); ++i) {
    const PlyDisk& ci = disks[i];
    int full = 0;
    int wrapped = 0;
    events.clear();
    index.for_each_box_overlap(detail::disk_box(ci), [&](int j) {
      if (j == i) return;
      const PlyDisk& cj = disks[j];
      const double d = distance(ci.center, cj.center);
      const double eps = detail::pair_slack(ci, cj, tol);
      if (d >= ci.radius + cj.radius - eps) return;  // apart or tangent
      if (d + ci.radius < cj.radius - eps) {         // circle i inside disk j
        ++full;
        return;
      }
      if (d <= eps && std::abs(ci.radius - cj.radius) <= eps) {  // same circle
        ++full;
        return;
      }
      if (d + cj.radius <= ci.radius + eps) return;  // disk j stays inside circle i
      // cos of the half-angle of circle i inside disk j, arranged to avoid
      // squaring large coordinates
      double cos_half = ((d - cj.radius) / ci.radius) * ((d + cj.radius) / (2.0 * d)) + ci.radius / (2.0 * d);
      cos_half = std::clamp(cos_half, -1.0, 1.0);
      const double half = std::acos(cos_half);
      if (half <= 0.0) return;
      const double mid = detail::wrap_angle(std::atan2(cj.center.y - ci.center.y, cj.center.x - ci.center.x));
      // trimmed by the slack as an angle: arcs meeting at a common point
      // (three circles through one point) must not overlap by rounding
      const double trim = eps / ci.radius;
      double lo = mid - half + trim;
      double hi = mid + half - trim;
      if (!(hi > lo)) return;
      // an arc spans at most the full circle, so after wrapping its end may
      // not pass its start; shifting by 2π can round it a few ulps past
      if (lo < 0.0) {
        ++wrapped;
        lo = std::max(lo + kTwoPi, hi);
      } else if (hi > kTwoPi) {
        ++wrapped;
        hi = std::min(hi - kTwoPi, lo);
      }
      events.emplace_back(lo, +1);
      events.emplace_back(hi, -1);
    });
    std::sort(events.begin(), events.end());  // (angle, -1) sorts before (angle, +1)

    int count = wrapped;
    int local_best = count;
    double local_angle = events.empty() ? kPi / 2.0 : events.front().first / 2.0;
    if (!events.empty() && events.front().first <= 0.0) {
      // the segment before the first event is empty; use the wrap segment
      local_angle = detail::wrap_angle((events.back().first + kTwoPi) / 2.0);
    }
    for (std::size_t k = 0; k < events.size(); ++k) {
      count += events[k].second;
      const double next = k + 1 < events.size() ? events[k + 1].first : kTwoPi + events.front().first;
      if (next > events[k].first && count > local_best) {
        local_best = count;
        local_angle = detail::wrap_angle((events[k].first + next) / 2.0);
      }
    }
    const int depth = 1 + full + local_best;
    if (depth > best) {
      best = depth;
      best_circle = i;
      best_angle = local_angle;
    }
  }

  PlyReport report{best, disks[best_circle].center, PlyMethod::exact_sweep, tol};
  int witness_depth = -1;
  for (Point p : detail::inward_ladder(disks[best_circle], best_angle, tol)) {
    const int depth = index.depth(p, tol);
    if (depth > witness_depth) {
      witness_depth = depth;
      report.witness = p;
    }
    if (depth == best) break;
  }
  return report;
}

/// Independent exact oracle: evaluates the depth at every center, at both
/// intersection points of every crossing pair (pushed into the lens), and just
/// inside the midpoint of every boundary arc between consecutive crossings.
inline PlyReport candidate_ply(const PlyDiskSet& set, double tol = kDefaultPlyTolerance) {
  if (set.empty()) throw PreconditionError("candidate_ply needs at least one disk");
  const auto& disks = set.disks;
  const detail::DiskIndex index(disks);

  PlyReport report{0, disks.front().center, PlyMethod::candidate_oracle, tol};
  auto consider = [&](Point p) {
    const int depth = index.depth(p, tol);
    if (depth > report.ply) {
      report.ply = depth;
      report.witness = p;
    }
  };

  for (const auto& d : disks) consider(d.center);

  std::vector<double> angles;
  for (int i = 0; i < static_cast<int>(disks.size()); ++i) {
    const PlyDisk& a = disks[i];
    angles.clear();
    index.for_each_box_overlap(detail::disk_box(a), [&](int j) {
      if (j == i) return;
      const PlyDisk& b = disks[j];
      const Point delta = b.center - a.center;
      const double d = norm(delta);
      if (!(d < a.radius + b.radius) || !(d > std::abs(a.radius - b.radius))) return;
      // foot of the chord along the center line, measured from a
      const double along = (d - b.radius) * ((d + b.radius) / (2.0 * d)) + a.radius * (a.radius / (2.0 * d));
      const double across = std::sqrt(std::max(0.0, (a.radius - along) * (a.radius + along)));
      const Point u = {delta.x / d, delta.y / d};
      const Point foot = a.center + along * u;
      const Point perp{-u.y, u.x};
      for (double sign : {1.0, -1.0}) {
        const Point x = foot + (sign * across) * perp;
        angles.push_back(detail::wrap_angle(std::atan2(x.y - a.center.y, x.x - a.center.x)));
        if (i < j) {
          // into the lens, toward both centers
          const Point into = normalized(normalized(a.center - x) + normalized(b.center - x));
          const double scale = std::min(a.radius, b.radius);
          for (double step : {1e-3, 1e-6, 1e-9}) {
            const double s = std::max(step * scale, 4.0 * detail::point_margin(a, x, tol) +
                                                        4.0 * detail::point_margin(b, x, tol));
            consider(x + s * into);
          }
        }
      }
    });
    std::sort(angles.begin(), angles.end());
    if (angles.empty()) {
      for (Point p : detail::inward_ladder(a, 0.0, tol)) consider(p);
      continue;
    }
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double from = angles[k];
      const double to = k + 1 < angles.size() ? angles[k + 1] : angles.front() + kTwoPi;
      if (!(to > from)) continue;
      for (Point p : detail::inward_ladder(a, detail::wrap_angle((from + to) / 2.0), tol)) consider(p);
    }
  }
  return report;
}

/// Lower bound on the ply from uniform samples over the bounding box of all
/// disks. Deterministic for a fixed seed.
inline PlyReport sample_ply(const PlyDiskSet& set, std::int64_t samples, std::uint64_t seed,
                            double tol = kDefaultPlyTolerance) {
  if (samples < 1) throw PreconditionError("sample_ply needs at least one sample");
  PlyReport report{0, Point{}, PlyMethod::sampling, tol};
  if (set.empty()) return report;
  const detail::DiskIndex index(set.disks);
  detail::Box box = detail::disk_box(set.disks.front());
  for (const auto& d : set.disks) {
    const auto b = detail::disk_box(d);
    box = {std::min(box.lo_x, b.lo_x), std::min(box.lo_y, b.lo_y), std::max(box.hi_x, b.hi_x),
           std::max(box.hi_y, b.hi_y)};
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo_x, box.hi_x);
  std::uniform_real_distribution<double> uy(box.lo_y, box.hi_y);
  report.witness = set.disks.front().center;
  for (std::int64_t s = 0; s < samples; ++s) {
    const Point p{ux(rng), uy(rng)};
    const int depth = index.depth(p, tol);
    if (depth > report.ply) {
      report.ply = depth;
      report.witness = p;
    }
  }
  return report;
}

/// Longest edge over shortest edge.
inline double edge_length_ratio(const Drawing& drawing) {
  if (drawing.edges.empty()) throw PreconditionError("edge_length_ratio needs at least one edge");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t e = 0; e < drawing.edges.size(); ++e) {
    const double len = drawing.edge_length(e);
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  return hi / lo;
}

// ---------------------------------------------------------------------------
// Star diagnostics: after rescaling so the longest edge has length 2, leaf
// ply-disks are grouped by radius class j (radius in (3^-j, 3^-j+1]). A
// drawing of ply p can hold at most 80p disks per class, and the edge-length
// ratio must then be at least 3^(k-1) for k = ceil((n-1)/(80p)) classes.

struct AnnulusCensus {
  std::map<int, std::int64_t> classes;  // class index -> leaf count
  int ply = 0;                          // exact ply of the drawing
  std::int64_t vertices = 0;
  bool class_counts_ok = false;         // every class holds at most 80p disks
  double log3_edge_ratio = 0.0;
  double required_log3_ratio = 0.0;     // ceil((n-1)/(80p)) - 1
  bool ratio_ok = false;
  double literal_log3_bound = 0.0;      // n/(80p), without the ceiling
  bool literal_ratio_ok = false;
  bool bound_ok = false;                // class_counts_ok && ratio_ok
};

inline AnnulusCensus annulus_census(const Drawing& drawing, double tol = kDefaultPlyTolerance) {
  const auto n = static_cast<int>(drawing.size());
  if (n < 2 || static_cast<int>(drawing.edges.size()) != n - 1)
    throw PreconditionError("annulus_census expects a star with at least one leaf");
  std::vector<int> degree(n, 0);
  for (const auto& [a, b] : drawing.edges) {
    ++degree[a];
    ++degree[b];
  }
  int center = 0;
  for (int v = 0; v < n; ++v)
    if (degree[v] > degree[center]) center = v;
  for (const auto& [a, b] : drawing.edges)
    if (a != center && b != center) throw PreconditionError("annulus_census expects a star drawing");

  AnnulusCensus c;
  c.vertices = n;
  c.ply = exact_ply(ply_disks(drawing), tol).ply;
  double longest = 0.0;
  double shortest = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < drawing.edges.size(); ++e) {
    longest = std::max(longest, drawing.edge_length(e));
    shortest = std::min(shortest, drawing.edge_length(e));
  }
  const double log3 = std::log(3.0);
  for (std::size_t e = 0; e < drawing.edges.size(); ++e) {
    // rescaled radius is len/longest; class j has 3^(j-1) <= longest/len < 3^j
    const double depth3 = (std::log(longest) - std::log(drawing.edge_length(e))) / log3;
    int j = 1 + static_cast<int>(std::floor(depth3 + 1e-12));
    c.classes[j] += 1;
  }
  const std::int64_t cap = 80LL * c.ply;
  c.class_counts_ok = std::all_of(c.classes.begin(), c.classes.end(), [&](const auto& kv) { return kv.second <= cap; });
  c.log3_edge_ratio = (std::log(longest) - std::log(shortest)) / log3;
  const std::int64_t min_classes = (static_cast<std::int64_t>(n) - 1 + cap - 1) / cap;
  c.required_log3_ratio = static_cast<double>(min_classes - 1);
  c.ratio_ok = c.log3_edge_ratio >= c.required_log3_ratio - 1e-9;
  c.literal_log3_bound = static_cast<double>(n) / static_cast<double>(cap);
  c.literal_ratio_ok = c.log3_edge_ratio >= c.literal_log3_bound - 1e-9;
  c.bound_ok = c.class_counts_ok && c.ratio_ok;
  return c;
}

}  // namespace lowply
