#include "spider/spider_graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace spider {

std::optional<NodeId> NodeId::parse(std::string_view text) {
  if (text.size() < 2 || text[0] != 'n') return std::nullopt;
  if (text.size() > 2 && text[1] == '0') return std::nullopt;
  std::uint32_t v = 0;
  const char* first = text.data() + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return NodeId(v);
}

SpiderGraph SpiderGraph::single(const TypeName& root_type) {
  SpiderGraph g;
  g.slots_.push_back(SpiderNode{NodeId(0), root_type, std::nullopt, std::nullopt, {}});
  g.root_ = NodeId(0);
  g.frontier_ = {NodeId(0)};
  g.live_ = 1;
  return g;
}

const SpiderNode& SpiderGraph::node(NodeId n) const {
  if (!contains(n)) throw SpiderError(SpiderErrc::UnknownNode, "unknown node " + n.to_string());
  return *slots_[n.value()];
}

std::vector<NodeId> SpiderGraph::node_ids() const {
  std::vector<NodeId> out;
  out.reserve(live_);
  for (const auto& s : slots_) {
    if (s) out.push_back(s->id);
  }
  return out;
}

std::vector<SpiderEdge> SpiderGraph::edges() const {
  std::vector<SpiderEdge> out;
  for (const auto& s : slots_) {
    if (s && s->parent) out.push_back({*s->parent, s->id, *s->label});
  }
  return out;
}

std::size_t SpiderGraph::depth(NodeId n) const {
  std::size_t d = 0;
  for (const SpiderNode* cur = &node(n); cur->parent; cur = &node(*cur->parent)) ++d;
  return d;
}

NodeId SpiderBuilder::add_child(NodeId parent, TypeName type, EdgeLabel label) {
  if (!g_.contains(parent)) throw SpiderError(SpiderErrc::UnknownNode, "unknown node " + parent.to_string());
  const NodeId id(static_cast<std::uint32_t>(g_.slots_.size()));
  g_.slots_.push_back(SpiderNode{id, std::move(type), parent, std::move(label), {}});
  g_.slots_[parent.value()]->children.push_back(id);
  ++g_.live_;
  return id;
}

std::size_t SpiderBuilder::remove_subtree(NodeId n) {
  const SpiderNode& target = g_.node(n);
  if (target.parent) {
    auto& siblings = g_.slots_[target.parent->value()]->children;
    siblings.erase(std::remove(siblings.begin(), siblings.end(), n), siblings.end());
  }
  std::size_t removed = 0;
  std::vector<NodeId> stack{n};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    auto& slot = g_.slots_[cur.value()];
    stack.insert(stack.end(), slot->children.begin(), slot->children.end());
    g_.frontier_.erase(cur);
    slot.reset();
    ++removed;
  }
  g_.live_ -= removed;
  return removed;
}

SpiderGraph SpiderBuilder::assemble(NodeId root, std::uint32_t next_id, std::vector<SpiderNode> nodes,
                                    std::set<NodeId> frontier) {
  SpiderGraph g;
  g.slots_.resize(next_id);
  for (auto& n : nodes) {
    if (n.id.value() >= next_id) throw std::invalid_argument("node id " + n.id.to_string() + " >= next_id");
    if (g.slots_[n.id.value()]) throw std::invalid_argument("duplicate node " + n.id.to_string());
    g.slots_[n.id.value()] = std::move(n);
  }
  g.root_ = root;
  g.live_ = nodes.size();
  if (!g.contains(root)) throw std::invalid_argument("root is not a node");
  if (g.node(root).parent) throw std::invalid_argument("root has a parent");
  // Every non-root node hangs off a live parent that lists it, and the
  // whole set is reachable from the root.
  std::size_t reached = 0;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    ++reached;
    for (NodeId c : g.node(cur).children) {
      if (!g.contains(c) || g.node(c).parent != cur) {
        throw std::invalid_argument("inconsistent child link " + cur.to_string() + " -> " + c.to_string());
      }
      stack.push_back(c);
    }
  }
  if (reached != g.live_) throw std::invalid_argument("nodes unreachable from root");
  for (NodeId f : frontier) {
    if (!g.contains(f)) throw std::invalid_argument("frontier node " + f.to_string() + " is not a node");
  }
  g.frontier_ = std::move(frontier);
  return g;
}

namespace {

nlohmann::json label_json(const EdgeLabel& l) {
  return {{"label", l.text()}, {"kind", to_string(l.kind())}};
}

EdgeLabel label_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "role") return EdgeLabel::role(RoleName(j.at("label").get<std::string>()));
  if (kind == "spec") return EdgeLabel::spec();
  if (kind == "poly") return EdgeLabel::poly();
  throw std::invalid_argument("unknown label kind '" + kind + "'");
}

NodeId id_from_json(const nlohmann::json& j) {
  auto id = NodeId::parse(j.get<std::string>());
  if (!id) throw std::invalid_argument("bad node id " + j.dump());
  return *id;
}

}  // namespace

nlohmann::json spider_to_json(const SpiderGraph& g, const ConceptualSchema& schema) {
  nlohmann::json nodes = nlohmann::json::array();
  for (NodeId id : g.node_ids()) {
    const SpiderNode& n = g.node(id);
    nlohmann::json children = nlohmann::json::array();
    for (NodeId c : n.children) {
      auto entry = label_json(*g.node(c).label);
      entry["child"] = c.to_string();
      children.push_back(std::move(entry));
    }
    nodes.push_back({{"id", id.to_string()},
                     {"type", n.type.str()},
                     {"weight", schema.weight(n.type).to_string()},
                     {"extendable", g.frontier().contains(id) || n.children.empty()},
                     {"children", std::move(children)}});
  }
  nlohmann::json frontier = nlohmann::json::array();
  for (NodeId f : g.frontier()) frontier.push_back(f.to_string());
  return {{"root", g.root().to_string()},
          {"next_id", g.next_id()},
          {"frontier", std::move(frontier)},
          {"nodes", std::move(nodes)}};
}

SpiderGraph spider_from_json(const nlohmann::json& doc) {
  try {
    const NodeId root = id_from_json(doc.at("root"));
    std::vector<SpiderNode> nodes;
    std::map<NodeId, std::pair<NodeId, EdgeLabel>> parent_of;
    for (const auto& jn : doc.at("nodes")) {
      SpiderNode n;
      n.id = id_from_json(jn.at("id"));
      n.type = TypeName(jn.at("type").get<std::string>());
      for (const auto& jc : jn.at("children")) {
        const NodeId c = id_from_json(jc.at("child"));
        if (!parent_of.emplace(c, std::pair{n.id, label_from_json(jc)}).second) {
          throw std::invalid_argument("node " + c.to_string() + " has two parents");
        }
        n.children.push_back(c);
      }
      nodes.push_back(std::move(n));
    }
    for (auto& n : nodes) {
      if (auto it = parent_of.find(n.id); it != parent_of.end()) {
        n.parent = it->second.first;
        n.label = it->second.second;
      }
    }
    std::set<NodeId> frontier;
    for (const auto& f : doc.at("frontier")) frontier.insert(id_from_json(f));
    return SpiderBuilder::assemble(root, doc.at("next_id").get<std::uint32_t>(), std::move(nodes),
                                   std::move(frontier));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed spider document: ") + e.what());
  }
}

}  // namespace spider
