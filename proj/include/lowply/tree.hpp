#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lowply/errors.hpp"

namespace lowply {

// External vertex identifier, as it appears in files.
using VertexId = std::int64_t;
// Dense internal index in [0, size()).
using Vertex = int;
inline constexpr Vertex kNoVertex = -1;

enum class TreeFormat { edge_list, json };

/// Immutable rooted tree.
///
/// Vertices are addressed by dense indices; external ids are kept alongside and
/// are the only thing that reaches serialized output. Children keep the order
/// in which they were supplied.
class RootedTree {
 public:
  RootedTree() = default;

  /// Builds a tree from external ids and a parent relation over dense indices.
  /// `parent[root] == kNoVertex`. Children order follows `children`.
  static RootedTree from_parts(std::vector<VertexId> ids, Vertex root, std::vector<Vertex> parent,
                               std::vector<std::vector<Vertex>> children) {
    RootedTree t;
    t.ids_ = std::move(ids);
    t.root_ = root;
    t.parent_ = std::move(parent);
    t.children_ = std::move(children);
    t.index_.reserve(t.ids_.size());
    for (Vertex v = 0; v < static_cast<Vertex>(t.ids_.size()); ++v) {
      if (!t.index_.emplace(t.ids_[v], v).second)
        throw PreconditionError("duplicate vertex id " + std::to_string(t.ids_[v]), t.ids_[v]);
    }
    t.check_invariants();
    return t;
  }

  std::size_t size() const { return ids_.size(); }
  Vertex root() const { return root_; }
  VertexId id(Vertex v) const { return ids_[v]; }
  Vertex parent(Vertex v) const { return parent_[v]; }
  std::span<const Vertex> children(Vertex v) const { return children_[v]; }
  bool is_leaf(Vertex v) const { return children_[v].empty(); }
  int degree(Vertex v) const {
    return static_cast<int>(children_[v].size()) + (parent_[v] == kNoVertex ? 0 : 1);
  }

  bool contains(VertexId id) const { return index_.contains(id); }
  Vertex index_of(VertexId id) const {
    auto it = index_.find(id);
    if (it == index_.end())
      throw PreconditionError("vertex " + std::to_string(id) + " is not in the tree", id);
    return it->second;
  }

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }

  /// Vertices in preorder (parent before children, children in order).
  std::vector<Vertex> preorder() const {
    std::vector<Vertex> order;
    order.reserve(size());
    if (empty()) return order;
    std::vector<Vertex> stack{root_};
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (auto it = children_[v].rbegin(); it != children_[v].rend(); ++it) stack.push_back(*it);
    }
    return order;
  }

  bool empty() const { return ids_.empty(); }

  friend bool operator==(const RootedTree& a, const RootedTree& b) {
    if (a.size() != b.size() || a.empty() != b.empty()) return false;
    if (a.empty()) return true;
    if (a.id(a.root_) != b.id(b.root_)) return false;
    for (Vertex v = 0; v < static_cast<Vertex>(a.size()); ++v) {
      if (!b.contains(a.id(v))) return false;
      Vertex w = b.index_of(a.id(v));
      auto ca = a.children(v);
      auto cb = b.children(w);
      if (ca.size() != cb.size()) return false;
      for (std::size_t i = 0; i < ca.size(); ++i)
        if (a.id(ca[i]) != b.id(cb[i])) return false;
    }
    return true;
  }

 private:
  void check_invariants() const {
    const auto n = static_cast<Vertex>(ids_.size());
    if (n == 0) throw PreconditionError("a rooted tree needs at least one vertex");
    if (parent_.size() != ids_.size() || children_.size() != ids_.size())
      throw PreconditionError("parent/children arrays do not match the vertex count");
    if (root_ < 0 || root_ >= n || parent_[root_] != kNoVertex)
      throw PreconditionError("invalid root");
    std::size_t child_entries = 0;
    for (Vertex v = 0; v < n; ++v) {
      for (Vertex c : children_[v]) {
        if (c < 0 || c >= n || parent_[c] != v)
          throw PreconditionError("children list inconsistent with parent map", ids_[v]);
      }
      child_entries += children_[v].size();
      if (v != root_ && (parent_[v] < 0 || parent_[v] >= n))
        throw PreconditionError("non-root vertex without parent", ids_[v]);
    }
    if (child_entries != ids_.size() - 1)
      throw PreconditionError("children lists inconsistent with parent map");
    if (preorder().size() != ids_.size())
      throw PreconditionError("parent relation does not connect all vertices");
  }

  std::vector<VertexId> ids_;
  Vertex root_ = kNoVertex;
  std::vector<Vertex> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::unordered_map<VertexId, Vertex> index_;
  std::vector<std::string> labels_;
};

struct TreeAnnotations {
  std::vector<std::int64_t> subtree_size;
  std::vector<int> depth;
  int height = 0;
};

inline TreeAnnotations annotate(const RootedTree& tree) {
  TreeAnnotations a;
  const auto n = tree.size();
  a.subtree_size.assign(n, 1);
  a.depth.assign(n, 0);
  const auto order = tree.preorder();
  for (Vertex v : order) {
    if (v != tree.root()) a.depth[v] = a.depth[tree.parent(v)] + 1;
    a.height = std::max(a.height, a.depth[v]);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it != tree.root()) a.subtree_size[tree.parent(*it)] += a.subtree_size[*it];
  }
  return a;
}

namespace detail {

// Assembles a RootedTree from (parent id, child id) pairs in input order.
// `where` names the source location of each pair for error messages.
struct EdgeRecord {
  VertexId parent;
  VertexId child;
  std::string where;
};

inline RootedTree assemble_tree(const std::vector<EdgeRecord>& edges, std::optional<VertexId> root_hint,
                                const std::string& root_where) {
  std::vector<VertexId> ids;
  std::unordered_map<VertexId, Vertex> index;
  auto intern = [&](VertexId id) {
    auto [it, inserted] = index.emplace(id, static_cast<Vertex>(ids.size()));
    if (inserted) ids.push_back(id);
    return it->second;
  };
  if (root_hint) intern(*root_hint);
  for (const auto& e : edges) {
    intern(e.parent);
    intern(e.child);
  }
  if (ids.empty()) throw ParseError(ParseError::Kind::syntax, "empty tree: no edges and no root given");

  const auto n = static_cast<Vertex>(ids.size());
  std::vector<Vertex> parent(n, kNoVertex);
  std::vector<std::string> parent_where(n);
  std::vector<std::vector<Vertex>> children(n);
  for (const auto& e : edges) {
    Vertex p = index.at(e.parent);
    Vertex c = index.at(e.child);
    if (p == c)
      throw ParseError(ParseError::Kind::cycle,
                       "cycle detected: self-loop on vertex " + std::to_string(e.child) + " (" + e.where + ")");
    if (parent[c] != kNoVertex)
      throw ParseError(ParseError::Kind::duplicate_parent,
                       "duplicate parent assignment for vertex " + std::to_string(e.child) + " (" + e.where +
                           ", first at " + parent_where[c] + ")");
    parent[c] = p;
    parent_where[c] = e.where;
    children[p].push_back(c);
  }

  // Cycles first: they also leave no parentless vertex, which would otherwise
  // be misreported as a root problem.
  std::vector<char> state(n, 0);  // 0 unseen, 1 on current walk, 2 done
  for (Vertex s = 0; s < n; ++s) {
    if (state[s]) continue;
    std::vector<Vertex> walk;
    Vertex v = s;
    while (v != kNoVertex && state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = parent[v];
    }
    if (v != kNoVertex && state[v] == 1)
      throw ParseError(ParseError::Kind::cycle, "cycle detected through vertex " + std::to_string(ids[v]) + " (" +
                                                    parent_where[v] + ")");
    for (Vertex w : walk) state[w] = 2;
  }

  Vertex root = kNoVertex;
  if (root_hint) {
    root = index.at(*root_hint);
    if (parent[root] != kNoVertex)
      throw ParseError(ParseError::Kind::unknown_root, "root " + std::to_string(*root_hint) +
                                                           " has a parent (" + parent_where[root] + "; " +
                                                           root_where + ")");
    if (edges.size() > 0 && children[root].empty())
      throw ParseError(ParseError::Kind::unknown_root,
                       "unknown root " + std::to_string(*root_hint) + ": not an endpoint of any edge (" +
                           root_where + ")");
  }
  for (Vertex v = 0; v < n; ++v) {
    if (parent[v] != kNoVertex || v == root) continue;
    if (root == kNoVertex) {
      root = v;
    } else {
      throw ParseError(ParseError::Kind::disconnected,
                       "disconnected input: vertices " + std::to_string(ids[root]) + " and " +
                           std::to_string(ids[v]) + " both lack a parent");
    }
  }
  return RootedTree::from_parts(std::move(ids), root, std::move(parent), std::move(children));
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline VertexId parse_id(std::string_view token, const std::string& where) {
  VertexId value = 0;
  if (token.empty()) throw ParseError(ParseError::Kind::syntax, "missing vertex id (" + where + ")");
  for (char ch : token) {
    if (ch < '0' || ch > '9')
      throw ParseError(ParseError::Kind::syntax,
                       "vertex ids must be non-negative integers, got '" + std::string(token) + "' (" + where + ")");
    if (value > (std::numeric_limits<VertexId>::max() - 9) / 10)
      throw ParseError(ParseError::Kind::syntax, "vertex id out of range (" + where + ")");
    value = value * 10 + (ch - '0');
  }
  return value;
}

inline RootedTree parse_edge_list(std::string_view text) {
  std::vector<EdgeRecord> edges;
  std::optional<VertexId> root;
  std::string root_where;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = trim(line.substr(1));
      if (body.starts_with("root:")) {
        if (root) throw ParseError(ParseError::Kind::syntax, "second root header (" + where + ")");
        root = parse_id(trim(body.substr(5)), where);
        root_where = where;
      }
      continue;
    }
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) tokens.push_back(line.substr(i, j - i));
      i = j;
    }
    if (tokens.size() != 2)
      throw ParseError(ParseError::Kind::syntax, "expected 'parent child' (" + where + ")");
    edges.push_back({parse_id(tokens[0], where), parse_id(tokens[1], where), where});
  }
  return assemble_tree(edges, root, root_where);
}

inline RootedTree parse_tree_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ParseError::Kind::syntax, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError(ParseError::Kind::syntax, "tree JSON must be an object");
  auto as_id = [](const nlohmann::json& v, const std::string& where) -> VertexId {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
      throw ParseError(ParseError::Kind::syntax, "expected a non-negative integer at '" + where + "'");
    return v.get<VertexId>();
  };
  if (!doc.contains("root")) throw ParseError(ParseError::Kind::unknown_root, "missing field 'root'");
  const VertexId root = as_id(doc["root"], "root");
  std::vector<EdgeRecord> edges;
  if (doc.contains("edges")) {
    const auto& arr = doc["edges"];
    if (!arr.is_array()) throw ParseError(ParseError::Kind::syntax, "field 'edges' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = "edges[" + std::to_string(i) + "]";
      if (!arr[i].is_array() || arr[i].size() != 2)
        throw ParseError(ParseError::Kind::syntax, "expected [parent, child] at '" + where + "'");
      edges.push_back({as_id(arr[i][0], where + "[0]"), as_id(arr[i][1], where + "[1]"), where});
    }
  }
  RootedTree tree = assemble_tree(edges, root, "field 'root'");
  if (doc.contains("labels")) {
    const auto& obj = doc["labels"];
    if (!obj.is_object()) throw ParseError(ParseError::Kind::syntax, "field 'labels' must be an object");
    std::vector<std::string> labels(tree.size());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const std::string where = "labels." + it.key();
      VertexId id = parse_id(it.key(), where);
      if (!tree.contains(id) || !it.value().is_string())
        throw ParseError(ParseError::Kind::syntax, "bad label entry at '" + where + "'");
      labels[tree.index_of(id)] = it.value().get<std::string>();
    }
    tree.set_labels(std::move(labels));
  }
  return tree;
}

}  // namespace detail

inline RootedTree parse_tree(std::string_view text, TreeFormat format) {
  return format == TreeFormat::json ? detail::parse_tree_json(text) : detail::parse_edge_list(text);
}

inline std::string serialize_tree(const RootedTree& tree, TreeFormat format) {
  const auto order = tree.preorder();
  if (format == TreeFormat::edge_list) {
    std::ostringstream out;
    out << "# root: " << tree.id(tree.root()) << '\n';
    for (Vertex v : order)
      for (Vertex c : tree.children(v)) out << tree.id(v) << ' ' << tree.id(c) << '\n';
    return out.str();
  }
  nlohmann::json doc;
  doc["root"] = tree.id(tree.root());
  doc["edges"] = nlohmann::json::array();
  for (Vertex v : order)
    for (Vertex c : tree.children(v)) doc["edges"].push_back({tree.id(v), tree.id(c)});
  if (!tree.labels().empty()) {
    nlohmann::json labels = nlohmann::json::object();
    for (Vertex v = 0; v < static_cast<Vertex>(tree.size()); ++v)
      if (!tree.labels()[v].empty()) labels[std::to_string(tree.id(v))] = tree.labels()[v];
    if (!labels.empty()) doc["labels"] = labels;
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Generators. Ids are 0..n-1 in creation order.

inline std::size_t default_max_vertices() { return 20'000'000; }

namespace detail {

inline RootedTree from_parent_list(const std::vector<Vertex>& parent) {
  const auto n = static_cast<Vertex>(parent.size());
  std::vector<VertexId> ids(n);
  std::vector<std::vector<Vertex>> children(n);
  for (Vertex v = 0; v < n; ++v) {
    ids[v] = v;
    if (parent[v] != kNoVertex) children[parent[v]].push_back(v);
  }
  return RootedTree::from_parts(std::move(ids), 0, parent, std::move(children));
}

}  // namespace detail

/// Complete k-ary tree of height h, vertices numbered in BFS order.
inline RootedTree complete_kary(int k, int h, std::size_t max_vertices = default_max_vertices()) {
  if (k < 1) throw PreconditionError("complete_kary needs k >= 1");
  if (h < 0) throw PreconditionError("complete_kary needs h >= 0");
  std::size_t count = 1;
  std::size_t level = 1;
  for (int d = 1; d <= h; ++d) {
    if (level > max_vertices / static_cast<std::size_t>(k))
      throw ResourceLimitError("complete_kary(" + std::to_string(k) + "," + std::to_string(h) +
                               ") exceeds the vertex limit");
    level *= static_cast<std::size_t>(k);
    count += level;
    if (count > max_vertices)
      throw ResourceLimitError("complete_kary(" + std::to_string(k) + "," + std::to_string(h) +
                               ") exceeds the vertex limit");
  }
  std::vector<Vertex> parent(count, kNoVertex);
  // BFS numbering: children of v are k*v+1 .. k*v+k
  for (std::size_t v = 1; v < count; ++v) parent[v] = static_cast<Vertex>((v - 1) / static_cast<std::size_t>(k));
  return detail::from_parent_list(parent);
}

inline RootedTree star(int leaves) {
  if (leaves < 0) throw PreconditionError("star needs a non-negative leaf count");
  std::vector<Vertex> parent(static_cast<std::size_t>(leaves) + 1, 0);
  parent[0] = kNoVertex;
  return detail::from_parent_list(parent);
}

inline RootedTree path_tree(int n) {
  if (n < 1) throw PreconditionError("path_tree needs n >= 1");
  std::vector<Vertex> parent(n);
  for (Vertex v = 0; v < n; ++v) parent[v] = v - 1;
  return detail::from_parent_list(parent);
}

/// Random recursive tree with a degree cap: vertex i attaches to a uniformly
/// chosen earlier vertex that still has spare degree.
inline RootedTree random_tree(int n, int max_degree, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("random_tree needs n >= 1");
  if (max_degree < 2) throw PreconditionError("random_tree needs max_degree >= 2");
  std::mt19937_64 rng(seed);
  std::vector<Vertex> parent(n, kNoVertex);
  std::vector<int> spare(n, 0);
  std::vector<Vertex> open;
  spare[0] = max_degree;
  open.push_back(0);
  for (Vertex v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    const std::size_t slot = pick(rng);
    const Vertex p = open[slot];
    parent[v] = p;
    if (--spare[p] == 0) {
      open[slot] = open.back();
      open.pop_back();
    }
    spare[v] = max_degree - 1;
    open.push_back(v);
  }
  return detail::from_parent_list(parent);
}

/// Same undirected tree, rooted at `new_root`. Former children keep their
/// order; a former parent becomes the last child.
inline RootedTree rerooted(const RootedTree& tree, VertexId new_root) {
  const Vertex r = tree.index_of(new_root);
  const auto n = static_cast<Vertex>(tree.size());
  std::vector<Vertex> parent(n, kNoVertex);
  std::vector<std::vector<Vertex>> children(n);
  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack{r};
  seen[r] = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    std::vector<Vertex> nbrs(tree.children(v).begin(), tree.children(v).end());
    if (tree.parent(v) != kNoVertex) nbrs.push_back(tree.parent(v));
    for (Vertex w : nbrs) {
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = v;
      children[v].push_back(w);
      stack.push_back(w);
    }
  }
  std::vector<VertexId> ids(n);
  for (Vertex v = 0; v < n; ++v) ids[v] = tree.id(v);
  RootedTree out = RootedTree::from_parts(std::move(ids), r, std::move(parent), std::move(children));
  if (!tree.labels().empty()) out.set_labels(tree.labels());
  return out;
}

/// Largest number of children over all vertices.
inline int max_children(const RootedTree& tree) {
  int best = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(tree.size()); ++v)
    best = std::max(best, static_cast<int>(tree.children(v).size()));
  return best;
}

inline int max_degree(const RootedTree& tree) {
  int best = 0;
  for (Vertex v = 0; v < static_cast<Vertex>(tree.size()); ++v) best = std::max(best, tree.degree(v));
  return best;
}

}  // namespace lowply
