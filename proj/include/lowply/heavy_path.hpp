#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "lowply/tree.hpp"

namespace lowply {

struct HeavyChild {
  int node = -1;
  Vertex anchor = kNoVertex;
};

/// One heavy path of the decomposition. `anchor == kNoVertex` marks the
/// synthetic anchor of the root path.
struct HeavyPathNode {
  std::vector<Vertex> path;            // shallowest vertex first, ends at a leaf
  Vertex anchor = kNoVertex;
  int depth = 0;
  int parent_node = -1;
  std::vector<std::int64_t> weights;   // 1 + vertices hanging at each path vertex
  std::int64_t total_weight = 0;       // |subtree rooted at path.front()|
  std::vector<HeavyChild> children;    // grouped by anchor in path order, then children order
};

struct HeavyPathTree {
  std::vector<HeavyPathNode> nodes;
  int root_node = 0;

  int height() const {
    int h = 0;
    for (const auto& n : nodes) h = std::max(h, n.depth);
    return h;
  }
};

/// Heavy-path decomposition: every path descends into the child with the
/// largest subtree, ties going to the earlier child.
inline HeavyPathTree decompose(const RootedTree& tree) {
  const auto ann = annotate(tree);
  auto heavy_child = [&](Vertex v) {
    Vertex best = kNoVertex;
    for (Vertex c : tree.children(v))
      if (best == kNoVertex || ann.subtree_size[c] > ann.subtree_size[best]) best = c;
    return best;
  };

  HeavyPathTree hpt;
  struct Pending {
    Vertex start;
    Vertex anchor;
    int depth;
    int parent_node;
  };
  std::deque<Pending> queue{{tree.root(), kNoVertex, 0, -1}};
  while (!queue.empty()) {
    const Pending job = queue.front();
    queue.pop_front();
    const int id = static_cast<int>(hpt.nodes.size());
    HeavyPathNode node;
    node.anchor = job.anchor;
    node.depth = job.depth;
    node.parent_node = job.parent_node;
    node.total_weight = ann.subtree_size[job.start];
    for (Vertex v = job.start; v != kNoVertex; v = heavy_child(v)) node.path.push_back(v);
    for (std::size_t i = 0; i < node.path.size(); ++i) {
      const Vertex v = node.path[i];
      const Vertex next = i + 1 < node.path.size() ? node.path[i + 1] : kNoVertex;
      std::int64_t w = 1;
      for (Vertex c : tree.children(v)) {
        if (c == next) continue;
        w += ann.subtree_size[c];
        // queued jobs become nodes in FIFO order, so the id is known now
        const int child_id = id + 1 + static_cast<int>(queue.size());
        node.children.push_back({child_id, v});
        queue.push_back({c, v, job.depth + 1, id});
      }
      node.weights.push_back(w);
    }
    hpt.nodes.push_back(std::move(node));
  }
  return hpt;
}

/// Which decomposition node owns each vertex.
inline std::vector<int> node_of_vertex(const HeavyPathTree& hpt, std::size_t vertex_count) {
  std::vector<int> owner(vertex_count, -1);
  for (int id = 0; id < static_cast<int>(hpt.nodes.size()); ++id)
    for (Vertex v : hpt.nodes[id].path)
      if (v >= 0 && static_cast<std::size_t>(v) < vertex_count) owner[v] = id;
  return owner;
}

inline int floor_log2(std::uint64_t n) {
  int r = -1;
  while (n) {
    n >>= 1;
    ++r;
  }
  return r;
}

/// Checks a decomposition against the tree. Each violation string starts with
/// its category: partition, path, heavy rule, weights, anchor, depth, height.
inline std::vector<std::string> validate_decomposition(const RootedTree& tree, const HeavyPathTree& hpt) {
  std::vector<std::string> out;
  const auto n = static_cast<Vertex>(tree.size());
  const auto ann = annotate(tree);
  auto vid = [&](Vertex v) { return std::to_string(tree.id(v)); };
  const auto node_count = static_cast<int>(hpt.nodes.size());

  std::vector<int> owner(n, -1);
  for (int id = 0; id < node_count; ++id) {
    for (Vertex v : hpt.nodes[id].path) {
      if (v < 0 || v >= n) {
        out.push_back("partition: node " + std::to_string(id) + " lists an unknown vertex");
        continue;
      }
      if (owner[v] != -1)
        out.push_back("partition: vertex " + vid(v) + " appears in nodes " + std::to_string(owner[v]) + " and " +
                      std::to_string(id));
      owner[v] = id;
    }
  }
  for (Vertex v = 0; v < n; ++v)
    if (owner[v] == -1) out.push_back("partition: vertex " + vid(v) + " is not covered");
  if (!out.empty()) return out;

  if (hpt.root_node < 0 || hpt.root_node >= node_count) {
    out.push_back("depth: invalid root node");
    return out;
  }
  for (int id = 0; id < node_count; ++id) {
    const auto& node = hpt.nodes[id];
    const auto tag = "node " + std::to_string(id);
    if (node.path.empty()) {
      out.push_back("path: " + tag + " is empty");
      continue;
    }
    for (std::size_t i = 1; i < node.path.size(); ++i)
      if (tree.parent(node.path[i]) != node.path[i - 1])
        out.push_back("path: " + tag + " is not a parent-child chain at vertex " + vid(node.path[i]));
    if (!tree.is_leaf(node.path.back())) out.push_back("path: " + tag + " does not end at a leaf");

    for (std::size_t i = 0; i + 1 < node.path.size(); ++i) {
      const Vertex v = node.path[i];
      const Vertex chosen = node.path[i + 1];
      bool after = false;
      for (Vertex c : tree.children(v)) {
        if (c == chosen) {
          after = true;
          continue;
        }
        // ties go to the earlier child
        const bool beats = after ? ann.subtree_size[c] > ann.subtree_size[chosen]
                                 : ann.subtree_size[c] >= ann.subtree_size[chosen];
        if (beats)
          out.push_back("heavy rule: at vertex " + vid(v) + " child " + vid(c) + " should be preferred over " +
                        vid(chosen));
      }
    }

    if (id == hpt.root_node) {
      if (node.anchor != kNoVertex) out.push_back("anchor: root node must use the synthetic anchor");
      if (node.depth != 0) out.push_back("depth: root node has depth " + std::to_string(node.depth));
      if (node.path.front() != tree.root()) out.push_back("path: root node does not start at the tree root");
    } else {
      if (node.anchor == kNoVertex || tree.parent(node.path.front()) != node.anchor)
        out.push_back("anchor: " + tag + " anchor is not the parent of its first vertex");
      if (node.parent_node < 0 || node.parent_node >= node_count) {
        out.push_back("depth: " + tag + " has no valid parent node");
      } else {
        const auto& par = hpt.nodes[node.parent_node];
        if (node.depth != par.depth + 1) out.push_back("depth: " + tag + " depth is not parent depth + 1");
        if (node.anchor != kNoVertex && owner[node.anchor] != node.parent_node)
          out.push_back("anchor: " + tag + " anchor is not on the parent path");
      }
    }

    if (node.weights.size() != node.path.size()) {
      out.push_back("weights: " + tag + " weight count differs from path length");
    } else {
      std::int64_t sum = 0;
      for (std::size_t i = 0; i < node.path.size(); ++i) {
        const Vertex v = node.path[i];
        const Vertex next = i + 1 < node.path.size() ? node.path[i + 1] : kNoVertex;
        std::int64_t expected = 1;
        for (Vertex c : tree.children(v)) {
          if (c == next) continue;
          expected += ann.subtree_size[c];
          if (2 * ann.subtree_size[c] > node.total_weight)
            out.push_back("weights: " + tag + " subtree hanging at vertex " + vid(v) + " exceeds half of the node");
        }
        if (node.weights[i] != expected)
          out.push_back("weights: " + tag + " weight at vertex " + vid(v) + " is " +
                        std::to_string(node.weights[i]) + ", expected " + std::to_string(expected));
        sum += node.weights[i];
      }
      if (sum != node.total_weight || node.total_weight != ann.subtree_size[node.path.front()])
        out.push_back("weights: " + tag + " total weight mismatch");
    }

    for (const auto& ch : node.children) {
      if (ch.node < 0 || ch.node >= node_count || hpt.nodes[ch.node].parent_node != id ||
          hpt.nodes[ch.node].anchor != ch.anchor)
        out.push_back("anchor: " + tag + " child entry inconsistent");
      else if (owner[ch.anchor] != id)
        out.push_back("anchor: " + tag + " child anchored off-path");
    }
  }
  if (hpt.height() > floor_log2(static_cast<std::uint64_t>(n)))
    out.push_back("height: decomposition height " + std::to_string(hpt.height()) + " exceeds floor(log2 n)");
  return out;
}

}  // namespace lowply
