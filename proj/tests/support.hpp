#pragma once

// Test-only helpers: fixture schemas, a random schema generator and a
// brute-force path enumerator that shares no code with the engine.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "spider/schema.hpp"
#include "spider/spider_graph.hpp"

namespace spider::testing {

inline constexpr const char* kExampleText =
    "objecttype A\n"
    "objecttype B\n"
    "objecttype C\n"
    "objecttype D\n"
    "relationship f roles r:A s:B\n"
    "relationship g roles t:C u:A\n"
    "poly A C\n"
    "poly A g\n"
    "spec D B\n";

inline TypeName T(const char* s) { return TypeName(s); }
inline RoleName R(const char* s) { return RoleName(s); }

// Fills missing weights with 1.
inline void default_weights(ConceptualSchema& s) {
  for (const auto& t : s.types()) s.cweight.try_emplace(t, Weight{});
}

// Built field by field, independent of the text parser.
inline ConceptualSchema example_schema() {
  ConceptualSchema s;
  s.obj_types = {T("A"), T("B"), T("C"), T("D")};
  s.rel_types = {T("f"), T("g")};
  s.roles[T("f")] = {R("r"), R("s")};
  s.roles[T("g")] = {R("t"), R("u")};
  s.player = {{R("r"), T("A")}, {R("s"), T("B")}, {R("t"), T("C")}, {R("u"), T("A")}};
  s.poly = {{T("A"), T("C")}, {T("A"), T("g")}};
  s.spec = {{T("D"), T("B")}};
  default_weights(s);
  return s;
}

// A -r- f -s- B
inline ConceptualSchema chain_schema() {
  ConceptualSchema s;
  s.obj_types = {T("A"), T("B")};
  s.rel_types = {T("f")};
  s.roles[T("f")] = {R("r"), R("s")};
  s.player = {{R("r"), T("A")}, {R("s"), T("B")}};
  default_weights(s);
  return s;
}

struct GenOptions {
  int max_types = 12;
  int max_rels = 10;
  int max_roles = 3;
  int max_pairs = 3;
  bool uniform_weights = false;
};

// Random valid schema. Object types O0.., relationships f0.., roles r0...
inline ConceptualSchema random_schema(std::mt19937_64& rng, const GenOptions& opt) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  ConceptualSchema s;
  const int n_types = uniform(1, opt.max_types);
  const int n_rels = std::min(opt.max_rels, uniform(0, n_types - 1));
  std::vector<TypeName> objs;
  std::vector<TypeName> all;
  for (int i = 0; i < n_types - n_rels; ++i) objs.emplace_back("O" + std::to_string(i));
  all = objs;
  std::vector<TypeName> rels;
  for (int i = 0; i < n_rels; ++i) rels.emplace_back("f" + std::to_string(i));
  all.insert(all.end(), rels.begin(), rels.end());
  s.obj_types.insert(objs.begin(), objs.end());
  s.rel_types.insert(rels.begin(), rels.end());
  int role_no = 0;
  for (const auto& rel : rels) {
    const int k = uniform(1, opt.max_roles);
    for (int j = 0; j < k; ++j) {
      RoleName r("r" + std::to_string(role_no++));
      s.roles[rel].push_back(r);
      s.player[r] = all[static_cast<std::size_t>(uniform(0, static_cast<int>(all.size()) - 1))];
    }
  }
  auto add_pairs = [&](std::set<std::pair<TypeName, TypeName>>& pairs, bool any_second) {
    const int k = uniform(0, opt.max_pairs);
    for (int j = 0; j < k; ++j) {
      const auto& x = objs[static_cast<std::size_t>(uniform(0, static_cast<int>(objs.size()) - 1))];
      const auto& pool = any_second ? all : objs;
      const auto& y = pool[static_cast<std::size_t>(uniform(0, static_cast<int>(pool.size()) - 1))];
      if (x == y || pairs.contains({y, x})) continue;
      pairs.insert({x, y});
    }
  };
  add_pairs(s.spec, false);
  add_pairs(s.poly, true);
  for (const auto& t : all) {
    s.cweight[t] = opt.uniform_weights ? Weight{} : Weight::from_int(static_cast<std::uint64_t>(uniform(1, 5)));
  }
  return s;
}

// Label as (kind, text); kind 0 role, 1 spec, 2 poly.
using Step = std::tuple<std::string, int, std::string>;  // target type, kind, label text

// Neighbour list straight from the schema fabric.
inline std::map<std::string, std::vector<std::pair<std::string, std::pair<int, std::string>>>> oracle_adjacency(
    const ConceptualSchema& s) {
  std::map<std::string, std::vector<std::pair<std::string, std::pair<int, std::string>>>> adj;
  for (const auto& t : s.types()) adj[t.str()];
  auto link = [&](const std::string& x, const std::string& y, int kind, const std::string& text) {
    adj[x].push_back({y, {kind, text}});
    if (x != y) adj[y].push_back({x, {kind, text}});
  };
  for (const auto& [rel, roles] : s.roles) {
    for (const auto& r : roles) link(s.player.at(r).str(), rel.str(), 0, r.str());
  }
  for (const auto& [x, y] : s.spec) link(x.str(), y.str(), 1, "spec");
  for (const auto& [x, y] : s.poly) link(x.str(), y.str(), 2, "poly");
  return adj;
}

// Every maximal path from `root` that never repeats a type.
inline std::vector<std::vector<Step>> maximal_paths(const ConceptualSchema& s, const std::string& root) {
  const auto adj = oracle_adjacency(s);
  std::vector<std::vector<Step>> out;
  std::vector<Step> path;
  std::vector<std::string> seen{root};
  auto dfs = [&](auto& self, const std::string& at) -> void {
    bool extended = false;
    for (const auto& [next, label] : adj.at(at)) {
      if (std::find(seen.begin(), seen.end(), next) != seen.end()) continue;
      extended = true;
      path.emplace_back(next, label.first, label.second);
      seen.push_back(next);
      self(self, next);
      seen.pop_back();
      path.pop_back();
    }
    if (!extended) out.push_back(path);
  };
  dfs(dfs, root);
  return out;
}

struct Trie {
  std::string type;
  std::map<Step, Trie> children;

  friend bool operator==(const Trie&, const Trie&) = default;

  [[nodiscard]] std::size_t size() const {
    std::size_t n = 1;
    for (const auto& [_, c] : children) n += c.size();
    return n;
  }
};

inline Trie paths_to_trie(const std::string& root, const std::vector<std::vector<Step>>& paths) {
  Trie t{root, {}};
  for (const auto& p : paths) {
    Trie* cur = &t;
    for (const auto& step : p) {
      auto [it, _] = cur->children.try_emplace(step, Trie{std::get<0>(step), {}});
      cur = &it->second;
    }
  }
  return t;
}

inline int kind_index(const EdgeLabel& l) {
  switch (l.kind()) {
    case EdgeLabel::Kind::Role:
      return 0;
    case EdgeLabel::Kind::Spec:
      return 1;
    case EdgeLabel::Kind::Poly:
      return 2;
  }
  return -1;
}

// Same shape as the oracle trie. Duplicate (type,label) siblings would
// collapse here, so the caller also compares sizes.
inline Trie tree_to_trie(const SpiderGraph& g, NodeId n) {
  const SpiderNode& node = g.node(n);
  Trie t{node.type.str(), {}};
  for (NodeId c : node.children) {
    const SpiderNode& child = g.node(c);
    t.children.emplace(Step{child.type.str(), kind_index(*child.label), child.label->text()}, tree_to_trie(g, c));
  }
  return t;
}

}  // namespace spider::testing
