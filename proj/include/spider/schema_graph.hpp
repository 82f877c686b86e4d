#pragma once

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spider/schema.hpp"

namespace spider {

class EdgeLabel {
 public:
  enum class Kind { Role, Spec, Poly };

  static EdgeLabel role(RoleName r) { return EdgeLabel(Kind::Role, std::move(r)); }
  static EdgeLabel spec() { return EdgeLabel(Kind::Spec, {}); }
  static EdgeLabel poly() { return EdgeLabel(Kind::Poly, {}); }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_role() const { return kind_ == Kind::Role; }
  // Only meaningful for role labels.
  [[nodiscard]] const RoleName& role_name() const { return role_; }
  // "spec", "poly", or the role name.
  [[nodiscard]] std::string text() const;

  // Role < spec < poly, roles by name.
  friend std::strong_ordering operator<=>(const EdgeLabel&, const EdgeLabel&) = default;
  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;

 private:
  EdgeLabel(Kind k, RoleName r) : kind_(k), role_(std::move(r)) {}
  Kind kind_ = Kind::Spec;
  RoleName role_;
};

std::string_view to_string(EdgeLabel::Kind k);

// Undirected labelled edge; endpoints stored with first <= second.
struct SchemaEdge {
  TypeName first;
  TypeName second;
  EdgeLabel label;

  [[nodiscard]] bool is_loop() const { return first == second; }

  friend std::strong_ordering operator<=>(const SchemaEdge&, const SchemaEdge&) = default;
  friend bool operator==(const SchemaEdge&, const SchemaEdge&) = default;
};

SchemaEdge make_edge(TypeName x, TypeName y, EdgeLabel label);

struct Incidence {
  TypeName neighbor;
  EdgeLabel label;

  friend bool operator==(const Incidence&, const Incidence&) = default;
};

// Optional filter applied to role edges while building the graph; returning
// false drops the edge. Used to hide reference-scheme roles.
using RoleEdgeFilter = std::function<bool(const RoleName& role, const TypeName& player, const TypeName& rel)>;

class SchemaGraph {
 public:
  SchemaGraph() = default;
  SchemaGraph(std::vector<TypeName> nodes, std::vector<SchemaEdge> edges);

  [[nodiscard]] const std::vector<TypeName>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<SchemaEdge>& edges() const { return edges_; }
  [[nodiscard]] bool has_node(const TypeName& t) const { return incidence_.contains(t); }

  // Incident edges of `t`, ordered by label (role < spec < poly, roles by
  // name) then neighbour. A self-loop appears once. Throws std::out_of_range
  // for an unknown type.
  [[nodiscard]] const std::vector<Incidence>& incident(const TypeName& t) const;

 private:
  std::vector<TypeName> nodes_;
  std::vector<SchemaEdge> edges_;
  std::map<TypeName, std::vector<Incidence>> incidence_;
};

// Nodes are the schema's types; one edge per role, spec pair and poly pair.
// Throws InvalidSchema when validate_schema reports anything.
SchemaGraph build_graph(const ConceptualSchema& schema, const RoleEdgeFilter& filter = {});

std::vector<Incidence> incident_edges(const SchemaGraph& graph, const TypeName& t);

nlohmann::json graph_to_json(const SchemaGraph& graph, const ConceptualSchema& schema);

}  // namespace spider
