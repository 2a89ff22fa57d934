#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lowply/errors.hpp"
#include "lowply/geometry.hpp"
#include "lowply/tree.hpp"

namespace lowply {

/// Straight-line drawing: a position per vertex plus the edge list.
/// Edges reference vertices by position in `ids`.
struct Drawing {
  std::vector<VertexId> ids;
  std::vector<Point> positions;
  std::vector<std::pair<int, int>> edges;
  nlohmann::json meta = nlohmann::json::object();

  std::size_t size() const { return ids.size(); }

  double edge_length(std::size_t e) const {
    return distance(positions[edges[e].first], positions[edges[e].second]);
  }

  std::unordered_map<VertexId, int> id_index() const {
    std::unordered_map<VertexId, int> index;
    index.reserve(ids.size());
    for (int i = 0; i < static_cast<int>(ids.size()); ++i) index.emplace(ids[i], i);
    return index;
  }
};

/// Drawing whose vertex i is tree vertex i, with the tree's edges.
inline Drawing drawing_for_tree(const RootedTree& tree, std::vector<Point> positions) {
  Drawing d;
  d.ids.resize(tree.size());
  for (Vertex v = 0; v < static_cast<Vertex>(tree.size()); ++v) {
    d.ids[v] = tree.id(v);
    if (tree.parent(v) != kNoVertex) d.edges.emplace_back(tree.parent(v), v);
  }
  d.positions = std::move(positions);
  return d;
}

/// Problems with a drawing: bad edge indices, repeated ids, coincident
/// vertices, zero-length edges.
inline std::vector<std::string> drawing_violations(const Drawing& d) {
  std::vector<std::string> out;
  const auto n = static_cast<int>(d.ids.size());
  if (d.positions.size() != d.ids.size()) {
    out.push_back("position count differs from vertex count");
    return out;
  }
  if (d.id_index().size() != d.ids.size()) out.push_back("repeated vertex id");
  for (const auto& [a, b] : d.edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      out.push_back("edge references an unknown vertex");
      return out;
    }
    if (d.positions[a] == d.positions[b])
      out.push_back("zero-length edge " + std::to_string(d.ids[a]) + "-" + std::to_string(d.ids[b]));
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::pair(d.positions[a].x, d.positions[a].y) < std::pair(d.positions[b].x, d.positions[b].y);
  });
  for (int i = 1; i < n; ++i)
    if (d.positions[order[i]] == d.positions[order[i - 1]])
      out.push_back("vertices " + std::to_string(d.ids[order[i - 1]]) + " and " + std::to_string(d.ids[order[i]]) +
                    " share a position");
  return out;
}

struct AreaReport {
  double min_edge = 0.0;
  double bbox_area = 0.0;
  double normalized_area = 0.0;  // bbox_area / min_edge^2
};

inline AreaReport measure_area(const Drawing& d) {
  AreaReport r;
  if (d.positions.empty()) return r;
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  for (const auto& p : d.positions) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double w = hi_x - lo_x;
  const double h = hi_y - lo_y;
  r.bbox_area = w * h;
  if (d.edges.empty()) return r;
  r.min_edge = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < d.edges.size(); ++e) r.min_edge = std::min(r.min_edge, d.edge_length(e));
  // divide before multiplying so huge drawings stay finite as long as possible
  r.normalized_area = (w / r.min_edge) * (h / r.min_edge);
  return r;
}

}  // namespace lowply
