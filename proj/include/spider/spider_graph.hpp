#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spider/schema.hpp"
#include "spider/schema_graph.hpp"

namespace spider {

// Serialized as "n<id>". Ids are never reused within one SpiderGraph.
class NodeId {
 public:
  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value_(v) {}

  [[nodiscard]] constexpr std::uint32_t value() const { return value_; }
  [[nodiscard]] std::string to_string() const { return "n" + std::to_string(value_); }
  // Accepts "nK"; returns nullopt for anything else.
  static std::optional<NodeId> parse(std::string_view text);

  friend constexpr auto operator<=>(NodeId, NodeId) = default;

 private:
  std::uint32_t value_ = 0;
};

struct SpiderNode {
  NodeId id;
  TypeName type;
  std::optional<NodeId> parent;
  std::optional<EdgeLabel> label;  // label of the edge from the parent
  std::vector<NodeId> children;    // in creation order

  friend bool operator==(const SpiderNode&, const SpiderNode&) = default;
};

struct SpiderEdge {
  NodeId parent;
  NodeId child;
  EdgeLabel label;

  friend bool operator==(const SpiderEdge&, const SpiderEdge&) = default;
};

enum class SpiderErrc { UnknownType, UnknownNode, NotALeaf, PruneRoot, NoCandidates, NodeLimit };

class SpiderError : public std::runtime_error {
 public:
  SpiderError(SpiderErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] SpiderErrc code() const { return code_; }

 private:
  SpiderErrc code_;
};

// A spider query tree: fresh nodes mapped to schema types, directed labelled
// edges from parent to child, and the set of nodes still open for automatic
// extension. Values are immutable from the outside; engine operations return
// new graphs.
class SpiderGraph {
 public:
  // Empty placeholder with no nodes.
  SpiderGraph() = default;
  // One-node graph; the root is the only extendable node.
  static SpiderGraph single(const TypeName& root_type);

  [[nodiscard]] NodeId root() const { return root_; }
  [[nodiscard]] bool contains(NodeId n) const {
    return n.value() < slots_.size() && slots_[n.value()].has_value();
  }
  // Throws SpiderError(UnknownNode).
  [[nodiscard]] const SpiderNode& node(NodeId n) const;
  [[nodiscard]] const TypeName& type_of(NodeId n) const { return node(n).type; }
  [[nodiscard]] bool is_leaf(NodeId n) const { return node(n).children.empty(); }
  [[nodiscard]] const std::set<NodeId>& frontier() const { return frontier_; }
  [[nodiscard]] std::size_t size() const { return live_; }
  [[nodiscard]] std::uint32_t next_id() const { return static_cast<std::uint32_t>(slots_.size()); }

  // Live nodes in id order.
  [[nodiscard]] std::vector<NodeId> node_ids() const;
  // Every edge, ordered by child id.
  [[nodiscard]] std::vector<SpiderEdge> edges() const;
  [[nodiscard]] std::size_t depth(NodeId n) const;

  friend bool operator==(const SpiderGraph&, const SpiderGraph&) = default;

 private:
  friend class SpiderBuilder;

  std::vector<std::optional<SpiderNode>> slots_;  // indexed by id
  std::set<NodeId> frontier_;
  NodeId root_;
  std::size_t live_ = 0;
};

// Mutable access for the engine and the document reader.
class SpiderBuilder {
 public:
  explicit SpiderBuilder(SpiderGraph g) : g_(std::move(g)) {}

  NodeId add_child(NodeId parent, TypeName type, EdgeLabel label);
  // Removes `n` and its subtree; returns the number of nodes removed.
  std::size_t remove_subtree(NodeId n);
  void set_frontier(std::set<NodeId> f) { g_.frontier_ = std::move(f); }
  [[nodiscard]] const SpiderGraph& view() const { return g_; }
  SpiderGraph finish() && { return std::move(g_); }

  // Raw reconstruction used when reading a serialized document.
  static SpiderGraph assemble(NodeId root, std::uint32_t next_id, std::vector<SpiderNode> nodes,
                              std::set<NodeId> frontier);

 private:
  SpiderGraph g_;
};

// Tree document: root, next id, and per node its id, type, weight,
// extendable flag (frontier member or leaf) and ordered children.
nlohmann::json spider_to_json(const SpiderGraph& g, const ConceptualSchema& schema);
// Inverse of spider_to_json; validates tree shape. Throws std::invalid_argument.
SpiderGraph spider_from_json(const nlohmann::json& doc);

}  // namespace spider
