#include "spider/schema_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace spider {

std::string EdgeLabel::text() const {
  switch (kind_) {
    case Kind::Role:
      return role_.str();
    case Kind::Spec:
      return "spec";
    case Kind::Poly:
      return "poly";
  }
  return {};
}

std::string_view to_string(EdgeLabel::Kind k) {
  switch (k) {
    case EdgeLabel::Kind::Role:
      return "role";
    case EdgeLabel::Kind::Spec:
      return "spec";
    case EdgeLabel::Kind::Poly:
      return "poly";
  }
  return "";
}

SchemaEdge make_edge(TypeName x, TypeName y, EdgeLabel label) {
  if (y < x) std::swap(x, y);
  return {std::move(x), std::move(y), std::move(label)};
}

SchemaGraph::SchemaGraph(std::vector<TypeName> nodes, std::vector<SchemaEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  std::sort(nodes_.begin(), nodes_.end());
  std::sort(edges_.begin(), edges_.end());
  for (const auto& n : nodes_) incidence_[n];
  for (const auto& e : edges_) {
    auto a = incidence_.find(e.first);
    auto b = incidence_.find(e.second);
    if (a == incidence_.end() || b == incidence_.end()) {
      throw std::invalid_argument("edge endpoint is not a node: " + e.first.str() + "/" + e.second.str());
    }
    a->second.push_back({e.second, e.label});
    if (!e.is_loop()) b->second.push_back({e.first, e.label});
  }
  for (auto& [_, list] : incidence_) {
    std::sort(list.begin(), list.end(), [](const Incidence& x, const Incidence& y) {
      return std::tie(x.label, x.neighbor) < std::tie(y.label, y.neighbor);
    });
  }
}

const std::vector<Incidence>& SchemaGraph::incident(const TypeName& t) const {
  auto it = incidence_.find(t);
  if (it == incidence_.end()) throw std::out_of_range("unknown type " + t.str());
  return it->second;
}

SchemaGraph build_graph(const ConceptualSchema& schema, const RoleEdgeFilter& filter) {
  if (auto violations = validate_schema(schema); !violations.empty()) {
    throw InvalidSchema(std::move(violations));
  }
  const auto types = schema.types();
  std::vector<SchemaEdge> edges;
  for (const auto& [rel, roles] : schema.roles) {
    for (const auto& r : roles) {
      const TypeName& player = schema.player.at(r);
      if (filter && !filter(r, player, rel)) continue;
      edges.push_back(make_edge(player, rel, EdgeLabel::role(r)));
    }
  }
  for (const auto& [x, y] : schema.spec) edges.push_back(make_edge(x, y, EdgeLabel::spec()));
  for (const auto& [x, y] : schema.poly) edges.push_back(make_edge(x, y, EdgeLabel::poly()));
  return SchemaGraph({types.begin(), types.end()}, std::move(edges));
}

std::vector<Incidence> incident_edges(const SchemaGraph& graph, const TypeName& t) {
  return graph.incident(t);
}

nlohmann::json graph_to_json(const SchemaGraph& graph, const ConceptualSchema& schema) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : graph.nodes()) {
    nodes.push_back({{"name", n.str()},
                     {"kind", schema.is_rel_type(n) ? "relationship" : "object"},
                     {"weight", schema.weight(n).to_string()}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : graph.edges()) {
    edges.push_back({{"endpoints", {e.first.str(), e.second.str()}},
                     {"label", e.label.text()},
                     {"kind", to_string(e.label.kind())}});
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

}  // namespace spider
