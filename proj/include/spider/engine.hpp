#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "spider/schema.hpp"
#include "spider/schema_graph.hpp"
#include "spider/spider_graph.hpp"

namespace spider {

struct ExtensionCandidate {
  NodeId node;
  TypeName target;
  EdgeLabel label;

  friend bool operator==(const ExtensionCandidate&, const ExtensionCandidate&) = default;
};

inline constexpr std::size_t kDefaultNodeLimit = 1'000'000;

// Types on the path from the root down to `n`, including o(n) itself.
std::set<TypeName> top(const SpiderGraph& g, NodeId n);

// All (n, t, l) with n in the frontier, ({o(n), t}, l) a schema edge and t
// not on the path to n. Ordered by node id, target type, then label text.
std::vector<ExtensionCandidate> epsilon(const SchemaGraph& graph, const SpiderGraph& g);

// One expansion round: a fresh child per candidate; the new frontier holds
// the children whose weight does not exceed their parent's.
// Throws SpiderError(NoCandidates) when epsilon is empty.
SpiderGraph sigma_step(const SchemaGraph& graph, const ConceptualSchema& schema, const SpiderGraph& g);

// Expands from `root_type` until no candidates remain. The final frontier is
// kept so callers can show which leaves are still open.
SpiderGraph spider_query(const SchemaGraph& graph, const ConceptualSchema& schema, const TypeName& root_type,
                         std::size_t node_limit = kDefaultNodeLimit);

// Re-opens `leaf` regardless of its weight and expands to fixpoint again.
SpiderGraph respider(const SchemaGraph& graph, const ConceptualSchema& schema, const SpiderGraph& g, NodeId leaf,
                     std::size_t node_limit = kDefaultNodeLimit);

// Drops `n` with its whole subtree. The root cannot be pruned.
SpiderGraph prune(const SpiderGraph& g, NodeId n);

}  // namespace spider
