#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lowply/drawing.hpp"
#include "lowply/errors.hpp"
#include "lowply/geometry.hpp"
#include "lowply/tree.hpp"

namespace lowply {

/// An edge named by its endpoint ids, in either order.
struct Edge {
  VertexId a = 0;
  VertexId b = 0;
};

inline constexpr double kDominationTolerance = 1e-12;

/// A rooted tree together with a drawing of it. Edges are identified by
/// their deeper endpoint.
class DrawnTree {
 public:
  DrawnTree(const RootedTree& tree, const Drawing& drawing) : tree_(&tree) {
    const auto n = tree.size();
    if (drawing.size() != n) throw MismatchError("tree and drawing have different vertex counts");
    const auto index = drawing.id_index();
    pos_.resize(n);
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
      auto it = index.find(tree.id(v));
      if (it == index.end()) throw MismatchError("vertex " + std::to_string(tree.id(v)) + " is missing from the drawing");
      pos_[v] = drawing.positions[it->second];
    }
    if (drawing.edges.size() + 1 != n && n > 0) throw MismatchError("tree and drawing have different edge counts");
    for (const auto& [x, y] : drawing.edges) {
      const Vertex u = tree.index_of(drawing.ids[x]);
      const Vertex w = tree.index_of(drawing.ids[y]);
      if (tree.parent(u) != w && tree.parent(w) != u)
        throw MismatchError("drawing edge " + std::to_string(drawing.ids[x]) + "-" + std::to_string(drawing.ids[y]) +
                            " is not a tree edge");
    }

    const auto ann = annotate(tree);
    depth_ = ann.depth;
    length_.assign(n, 0.0);
    tin_.assign(n, 0);
    tout_.assign(n, 0);
    int clock = 0;
    std::vector<std::pair<Vertex, std::size_t>> stack;
    if (n > 0) stack.emplace_back(tree.root(), 0);
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next == 0) tin_[v] = clock++;
      if (next < tree.children(v).size()) {
        const Vertex c = tree.children(v)[next++];
        length_[c] = distance(pos_[v], pos_[c]);
        stack.emplace_back(c, 0);
      } else {
        tout_[v] = clock++;
        stack.pop_back();
      }
    }
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
      if (tree.parent(v) == kNoVertex) continue;
      min_length_ = std::min(min_length_, length_[v]);
    }
  }

  const RootedTree& tree() const { return *tree_; }
  Point position(Vertex v) const { return pos_[v]; }
  int depth(Vertex v) const { return depth_[v]; }

  /// Length of the edge entering `child`.
  double length(Vertex child) const { return length_[child]; }
  double shortest_edge() const { return min_length_; }

  /// The deeper endpoint of edge {a, b}; throws when it is not a tree edge.
  Vertex edge(Edge e) const {
    if (!tree_->contains(e.a) || !tree_->contains(e.b))
      throw PreconditionError("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " is not in the tree", e.a);
    const Vertex u = tree_->index_of(e.a);
    const Vertex w = tree_->index_of(e.b);
    if (tree_->parent(w) == u) return w;
    if (tree_->parent(u) == w) return u;
    throw PreconditionError("edge " + std::to_string(e.a) + "-" + std::to_string(e.b) + " is not in the tree", e.a);
  }

  Edge as_edge(Vertex child) const { return {tree_->id(tree_->parent(child)), tree_->id(child)}; }

  bool is_ancestor(Vertex a, Vertex b) const { return tin_[a] <= tin_[b] && tout_[b] <= tout_[a]; }

  /// Edges entering x and y share a root-to-leaf branch.
  bool on_common_branch(Vertex x, Vertex y) const { return is_ancestor(x, y) || is_ancestor(y, x); }

  /// ℓ(e) ≥ 3^(s+1)·ℓ(f) on a common branch, s = edges strictly between.
  bool dominates(Vertex e, Vertex f) const {
    if (e == f || !on_common_branch(e, f)) return false;
    const int s = std::abs(depth_[e] - depth_[f]) - 1;
    return length_[e] >= std::pow(3.0, s + 1) * length_[f] * (1.0 - kDominationTolerance);
  }

  /// (i) f lies on the path from e to the root, (ii) e dominates f, (iii) no
  /// edge strictly between them dominates f.
  bool first_hand_dominates(Vertex e, Vertex f) const {
    if (e == f || !is_ancestor(f, e) || !dominates(e, f)) return false;
    for (Vertex g = tree_->parent(e); g != f; g = tree_->parent(g))
      if (dominates(g, f)) return false;
    return true;
  }

 private:
  const RootedTree* tree_;
  std::vector<Point> pos_;
  std::vector<int> depth_;
  std::vector<double> length_;
  std::vector<int> tin_, tout_;
  double min_length_ = std::numeric_limits<double>::infinity();
};

inline bool dominates(const RootedTree& tree, const Drawing& drawing, Edge e, Edge f) {
  const DrawnTree dt(tree, drawing);
  return dt.dominates(dt.edge(e), dt.edge(f));
}

inline bool first_hand_dominates(const RootedTree& tree, const Drawing& drawing, Edge e, Edge f) {
  const DrawnTree dt(tree, drawing);
  return dt.first_hand_dominates(dt.edge(e), dt.edge(f));
}

/// e_1 >_FD e_2 >_FD ... >_FD e_M, deepest edge first. The drawing has ply at
/// least M.
struct FdChainCertificate {
  std::vector<Edge> chain;  // (parent id, child id)
  std::int64_t bound = 0;
};

/// Longest first-hand domination chain. For each edge, in order of depth,
/// the ancestor edges it could dominate are scanned; e dominating f at
/// distance s needs 3^(s+1)·ℓ_min ≤ ℓ(e), which caps the scan.
inline FdChainCertificate longest_fd_chain(const DrawnTree& dt) {
  const auto& tree = dt.tree();
  const auto n = static_cast<Vertex>(tree.size());
  FdChainCertificate cert;
  if (n < 2) return cert;

  std::vector<Vertex> order;
  for (Vertex v : tree.preorder())
    if (v != tree.root()) order.push_back(v);
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return dt.depth(a) < dt.depth(b); });

  std::vector<int> best(n, 0);
  std::vector<Vertex> next(n, kNoVertex);
  const double lmin = dt.shortest_edge();
  for (Vertex e : order) {
    best[e] = 1;
    int s = 0;
    for (Vertex f = tree.parent(e); f != tree.root(); f = tree.parent(f), ++s) {
      if (std::pow(3.0, s + 1) * lmin * (1.0 - kDominationTolerance) > dt.length(e)) break;
      if (best[f] + 1 > best[e] && dt.first_hand_dominates(e, f)) {
        best[e] = best[f] + 1;
        next[e] = f;
      }
    }
  }
  Vertex start = order.front();
  for (Vertex e : order)
    if (best[e] > best[start]) start = e;
  for (Vertex e = start; e != kNoVertex; e = next[e]) cert.chain.push_back(dt.as_edge(e));
  cert.bound = static_cast<std::int64_t>(cert.chain.size());
  return cert;
}

inline FdChainCertificate longest_fd_chain(const RootedTree& tree, const Drawing& drawing) {
  return longest_fd_chain(DrawnTree(tree, drawing));
}

inline nlohmann::json certificate_to_json(const FdChainCertificate& cert) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& e : cert.chain) chain.push_back({e.a, e.b});
  return {{"chain", chain}, {"bound", cert.bound}};
}

inline FdChainCertificate certificate_from_json(const nlohmann::json& j) {
  FdChainCertificate cert;
  try {
    for (const auto& e : j.at("chain")) {
      if (!e.is_array() || e.size() != 2) throw ParseError(ParseError::Kind::syntax, "certificate chain entries must be pairs");
      cert.chain.push_back({e[0].get<VertexId>(), e[1].get<VertexId>()});
    }
    cert.bound = j.at("bound").get<std::int64_t>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(ParseError::Kind::syntax, std::string("certificate: ") + ex.what());
  }
  return cert;
}

struct CertificateCheck {
  bool ok = false;
  std::string reason;
};

/// Re-checks a certificate from scratch: coordinates, parent walks and the
/// three first-hand conditions, without the chain search.
inline CertificateCheck verify_certificate(const RootedTree& tree, const Drawing& drawing,
                                           const FdChainCertificate& cert) {
  if (cert.chain.empty()) return {cert.bound == 0, cert.bound == 0 ? "" : "empty chain with nonzero bound"};
  if (cert.bound != static_cast<std::int64_t>(cert.chain.size())) return {false, "bound differs from chain length"};
  const auto index = drawing.id_index();
  auto where = [&](VertexId id) -> std::optional<Point> {
    auto it = index.find(id);
    if (it == index.end()) return std::nullopt;
    return drawing.positions[it->second];
  };
  // child vertex of each chain edge, and its length
  std::vector<Vertex> child;
  std::vector<double> len;
  for (const auto& e : cert.chain) {
    if (!tree.contains(e.a) || !tree.contains(e.b)) return {false, "chain edge with unknown vertex"};
    const Vertex p = tree.index_of(e.a);
    const Vertex c = tree.index_of(e.b);
    if (tree.parent(c) != p) return {false, "chain entry " + std::to_string(e.a) + "-" + std::to_string(e.b) + " is not a (parent, child) edge"};
    const auto pa = where(e.a), pc = where(e.b);
    if (!pa || !pc) return {false, "chain vertex missing from drawing"};
    child.push_back(c);
    len.push_back(distance(*pa, *pc));
  }
  auto edge_length = [&](Vertex c) {
    return distance(*where(tree.id(tree.parent(c))), *where(tree.id(c)));
  };
  for (std::size_t i = 0; i + 1 < child.size(); ++i) {
    // (i): walk up from e_i until e_{i+1} is met
    int s = 0;
    Vertex g = tree.parent(child[i]);
    std::vector<Vertex> between;
    while (g != kNoVertex && g != child[i + 1]) {
      between.push_back(g);
      g = tree.parent(g);
      ++s;
    }
    if (g == kNoVertex) return {false, "edge " + std::to_string(i + 2) + " is not above edge " + std::to_string(i + 1)};
    // (ii)
    if (len[i] < std::pow(3.0, s + 1) * len[i + 1] * (1.0 - kDominationTolerance))
      return {false, "edge " + std::to_string(i + 1) + " does not dominate edge " + std::to_string(i + 2)};
    // (iii): between[k] is entered by an edge with between.size()-1-k edges
    // separating it from e_{i+1}
    for (std::size_t k = 0; k < between.size(); ++k) {
      const int gap = static_cast<int>(between.size() - 1 - k);
      if (edge_length(between[k]) >= std::pow(3.0, gap + 1) * len[i + 1] * (1.0 - kDominationTolerance))
        return {false, "an edge between chain edges " + std::to_string(i + 1) + " and " + std::to_string(i + 2) +
                           " dominates the latter"};
    }
  }
  return {true, ""};
}

/// Every point of f_1..f_p lies strictly inside the ply-disk of the vertex
/// shared by f_0 and f_1, where f_i joins path[i] and path[i+1]. Throws
/// PreconditionError unless f_0 dominates every later edge.
inline bool check_dominated_path_containment(const Drawing& drawing, std::span<const VertexId> path) {
  if (path.size() < 3) throw PreconditionError("dominated path needs at least two edges");
  const auto index = drawing.id_index();
  std::vector<Point> pts;
  for (VertexId id : path) {
    auto it = index.find(id);
    if (it == index.end()) throw PreconditionError("path vertex " + std::to_string(id) + " is not in the drawing", id);
    pts.push_back(drawing.positions[it->second]);
  }
  const double f0 = distance(pts[0], pts[1]);
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double fi = distance(pts[i], pts[i + 1]);
    if (f0 < std::pow(3.0, static_cast<double>(i)) * fi * (1.0 - kDominationTolerance))
      throw PreconditionError("f0 does not dominate f" + std::to_string(i), path[i]);
  }
  const int v = index.at(path[1]);
  double radius = 0.0;
  for (std::size_t e = 0; e < drawing.edges.size(); ++e)
    if (drawing.edges[e].first == v || drawing.edges[e].second == v) radius = std::max(radius, drawing.edge_length(e) / 2.0);
  // the first edge need not be a drawing edge
  radius = std::max(radius, f0 / 2.0);
  for (std::size_t i = 2; i < pts.size(); ++i)
    if (!(distance(pts[i], pts[1]) < radius)) return false;
  return true;
}

struct SubtreeContainment {
  bool holds = false;
  std::optional<VertexId> witness_vertex;
};

/// With P the root path e_0..e_t down to `subtree_root` and every edge of the
/// subtree dominated by an edge of P: picks i maximizing 3^i·ℓ(e_i) and checks
/// that the whole subtree lies strictly inside the ply-disk of the lower
/// endpoint of e_i. Throws PreconditionError when the domination hypothesis
/// fails.
inline SubtreeContainment check_dominated_subtree(const DrawnTree& dt, Vertex subtree_root) {
  const auto& tree = dt.tree();
  std::vector<Vertex> path;  // deeper endpoints of e_0..e_t, root side first
  for (Vertex v = subtree_root; v != tree.root(); v = tree.parent(v)) path.push_back(v);
  std::reverse(path.begin(), path.end());

  std::vector<Vertex> inside;
  std::vector<Vertex> stack{subtree_root};
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    inside.push_back(v);
    for (Vertex c : tree.children(v)) stack.push_back(c);
  }
  for (Vertex v : inside) {
    if (v == subtree_root) continue;
    const bool covered = std::any_of(path.begin(), path.end(), [&](Vertex e) { return dt.dominates(e, v); });
    if (!covered)
      throw PreconditionError("hypothesis violation: subtree edge into vertex " + std::to_string(tree.id(v)) +
                                  " is not dominated by the root path",
                              tree.id(v));
  }
  SubtreeContainment out;
  if (path.empty()) {
    out.holds = true;
    out.witness_vertex = tree.id(subtree_root);
    return out;
  }
  // compare 3^i·ℓ(e_i) in log space
  std::size_t best = 0;
  auto score = [&](std::size_t i) { return static_cast<double>(i) * std::log(3.0) + std::log(dt.length(path[i])); };
  for (std::size_t i = 1; i < path.size(); ++i)
    if (score(i) > score(best)) best = i;
  const Vertex v = path[best];
  double radius = dt.length(v) / 2.0;
  for (Vertex c : tree.children(v)) radius = std::max(radius, dt.length(c) / 2.0);
  out.witness_vertex = tree.id(v);
  out.holds = std::all_of(inside.begin(), inside.end(), [&](Vertex u) {
    return u == v || distance(dt.position(u), dt.position(v)) < radius;
  });
  return out;
}

inline SubtreeContainment check_dominated_subtree(const RootedTree& tree, const Drawing& drawing, VertexId subtree_root) {
  const DrawnTree dt(tree, drawing);
  return check_dominated_subtree(dt, tree.index_of(subtree_root));
}

}  // namespace lowply
