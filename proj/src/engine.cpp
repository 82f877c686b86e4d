#include "spider/engine.hpp"

#include <algorithm>
#include <tuple>

namespace spider {

namespace {

bool on_path(const SpiderGraph& g, NodeId n, const TypeName& t) {
  for (const SpiderNode* cur = &g.node(n);; cur = &g.node(*cur->parent)) {
    if (cur->type == t) return true;
    if (!cur->parent) return false;
  }
}

// Runs rounds on `b` until epsilon is empty.
void expand_to_fixpoint(const SchemaGraph& graph, const ConceptualSchema& schema, SpiderBuilder& b,
                        std::size_t node_limit) {
  for (;;) {
    auto candidates = epsilon(graph, b.view());
    if (candidates.empty()) return;
    if (b.view().size() + candidates.size() > node_limit) {
      throw SpiderError(SpiderErrc::NodeLimit,
                        "spider query exceeds the limit of " + std::to_string(node_limit) + " nodes");
    }
    std::set<NodeId> next;
    for (auto& c : candidates) {
      const Weight parent_weight = schema.weight(b.view().type_of(c.node));
      const Weight child_weight = schema.weight(c.target);
      const NodeId m = b.add_child(c.node, std::move(c.target), std::move(c.label));
      if (child_weight <= parent_weight) next.insert(m);
    }
    b.set_frontier(std::move(next));
  }
}

}  // namespace

std::set<TypeName> top(const SpiderGraph& g, NodeId n) {
  std::set<TypeName> out;
  for (const SpiderNode* cur = &g.node(n);; cur = &g.node(*cur->parent)) {
    out.insert(cur->type);
    if (!cur->parent) break;
  }
  return out;
}

std::vector<ExtensionCandidate> epsilon(const SchemaGraph& graph, const SpiderGraph& g) {
  std::vector<ExtensionCandidate> out;
  for (NodeId n : g.frontier()) {
    const auto first = out.size();
    for (const auto& inc : graph.incident(g.type_of(n))) {
      if (!on_path(g, n, inc.neighbor)) out.push_back({n, inc.neighbor, inc.label});
    }
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
              [](const ExtensionCandidate& a, const ExtensionCandidate& b) {
                const auto at = a.label.text();
                const auto bt = b.label.text();
                return std::tie(a.target, at, a.label) < std::tie(b.target, bt, b.label);
              });
  }
  return out;
}

SpiderGraph sigma_step(const SchemaGraph& graph, const ConceptualSchema& schema, const SpiderGraph& g) {
  auto candidates = epsilon(graph, g);
  if (candidates.empty()) throw SpiderError(SpiderErrc::NoCandidates, "no extension candidates");
  SpiderBuilder b(g);
  std::set<NodeId> next;
  for (auto& c : candidates) {
    const bool open = schema.weight(c.target) <= schema.weight(g.type_of(c.node));
    const NodeId m = b.add_child(c.node, std::move(c.target), std::move(c.label));
    if (open) next.insert(m);
  }
  b.set_frontier(std::move(next));
  return std::move(b).finish();
}

SpiderGraph spider_query(const SchemaGraph& graph, const ConceptualSchema& schema, const TypeName& root_type,
                         std::size_t node_limit) {
  if (!graph.has_node(root_type)) {
    throw SpiderError(SpiderErrc::UnknownType, "unknown root type " + root_type.str());
  }
  SpiderBuilder b(SpiderGraph::single(root_type));
  expand_to_fixpoint(graph, schema, b, node_limit);
  return std::move(b).finish();
}

SpiderGraph respider(const SchemaGraph& graph, const ConceptualSchema& schema, const SpiderGraph& g, NodeId leaf,
                     std::size_t node_limit) {
  if (!g.is_leaf(leaf)) {
    throw SpiderError(SpiderErrc::NotALeaf, "node " + leaf.to_string() + " is not a leaf");
  }
  SpiderBuilder b(g);
  b.set_frontier({leaf});
  expand_to_fixpoint(graph, schema, b, node_limit);
  return std::move(b).finish();
}

SpiderGraph prune(const SpiderGraph& g, NodeId n) {
  if (!g.contains(n)) throw SpiderError(SpiderErrc::UnknownNode, "unknown node " + n.to_string());
  if (n == g.root()) throw SpiderError(SpiderErrc::PruneRoot, "cannot prune the root node " + n.to_string());
  SpiderBuilder b(g);
  b.remove_subtree(n);
  return std::move(b).finish();
}

}  // namespace spider
