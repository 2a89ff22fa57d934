#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lowply/drawing.hpp"
#include "lowply/errors.hpp"
#include "lowply/heavy_path.hpp"
#include "lowply/ply.hpp"
#include "lowply/tree.hpp"

namespace lowply {

// nlohmann writes doubles in shortest round-trip form, so load(save(d))
// reproduces every coordinate bit for bit. Non-finite values become null.

inline nlohmann::json drawing_to_json(const Drawing& d) {
  nlohmann::json vertices = nlohmann::json::array();
  for (std::size_t i = 0; i < d.size(); ++i)
    vertices.push_back({{"id", d.ids[i]}, {"x", d.positions[i].x}, {"y", d.positions[i].y}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : d.edges) edges.push_back({d.ids[a], d.ids[b]});
  return {{"vertices", vertices}, {"edges", edges}, {"meta", d.meta}};
}

inline std::string save_drawing(const Drawing& d) { return drawing_to_json(d).dump(2) + "\n"; }

inline Drawing drawing_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& msg) { throw ParseError(ParseError::Kind::syntax, "drawing: " + msg); };
  if (!j.is_object()) fail("top level must be an object");
  if (!j.contains("vertices") || !j["vertices"].is_array()) fail("missing array field 'vertices'");
  if (!j.contains("edges") || !j["edges"].is_array()) fail("missing array field 'edges'");
  Drawing d;
  const auto& vs = j["vertices"];
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& v = vs[i];
    const auto where = "vertices[" + std::to_string(i) + "]";
    if (!v.is_object() || !v.contains("id") || !v["id"].is_number_integer()) fail(where + " needs an integer 'id'");
    if (!v.contains("x") || !v["x"].is_number() || !v.contains("y") || !v["y"].is_number())
      fail(where + " needs numeric 'x' and 'y'");
    d.ids.push_back(v["id"].get<VertexId>());
    d.positions.push_back({v["x"].get<double>(), v["y"].get<double>()});
    if (!std::isfinite(d.positions.back().x) || !std::isfinite(d.positions.back().y)) fail(where + " is not finite");
  }
  const auto index = d.id_index();
  if (index.size() != d.ids.size()) fail("repeated vertex id");
  const auto& es = j["edges"];
  for (std::size_t i = 0; i < es.size(); ++i) {
    const auto& e = es[i];
    const auto where = "edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      fail(where + " must be a pair of vertex ids");
    const auto a = index.find(e[0].get<VertexId>());
    const auto b = index.find(e[1].get<VertexId>());
    if (a == index.end() || b == index.end()) fail(where + " references an unknown vertex");
    d.edges.emplace_back(a->second, b->second);
  }
  if (j.contains("meta")) d.meta = j["meta"];
  return d;
}

inline Drawing load_drawing(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(ParseError::Kind::syntax, std::string("drawing: ") + ex.what());
  }
  return drawing_from_json(j);
}

inline nlohmann::json ply_report_to_json(const PlyReport& r) {
  return {{"ply", r.ply},
          {"witness", {r.witness.x, r.witness.y}},
          {"method", to_string(r.method)},
          {"tolerance", r.tolerance}};
}

inline nlohmann::json decomposition_to_json(const RootedTree& tree, const HeavyPathTree& hpt) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t id = 0; id < hpt.nodes.size(); ++id) {
    const auto& node = hpt.nodes[id];
    nlohmann::json path = nlohmann::json::array();
    for (Vertex v : node.path) path.push_back(tree.id(v));
    nlohmann::json children = nlohmann::json::array();
    for (const auto& c : node.children) children.push_back(c.node);
    nodes.push_back({{"id", id},
                     {"path", path},
                     {"anchor", node.anchor == kNoVertex ? nlohmann::json(nullptr) : nlohmann::json(tree.id(node.anchor))},
                     {"depth", node.depth},
                     {"parent", node.parent_node < 0 ? nlohmann::json(nullptr) : nlohmann::json(node.parent_node)},
                     {"weights", node.weights},
                     {"total_weight", node.total_weight},
                     {"children", children}});
  }
  return {{"height", hpt.height()}, {"vertices", tree.size()}, {"nodes", nodes}};
}

}  // namespace lowply
