#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spider/schema.hpp"
#include "spider/schema_graph.hpp"
#include "spider/spider_graph.hpp"

namespace spider {

struct PathExpr;
struct Branch;

struct TypeAtom {
  TypeName type;
};

struct RoleStep {
  RoleName role;
  bool reversed = false;
};

// At least two parts, none of them a Concat.
struct Concat {
  std::vector<PathExpr> parts;
};

// [a1: e1, ..., an: en; head]
struct Confluence {
  std::vector<Branch> branches;
  TypeName head;
};

struct PathExpr {
  std::variant<TypeAtom, RoleStep, Concat, Confluence> node;
};

struct Branch {
  std::string attr;
  PathExpr expr;
};

bool operator==(const TypeAtom& a, const TypeAtom& b);
bool operator==(const RoleStep& a, const RoleStep& b);
bool operator==(const Concat& a, const Concat& b);
bool operator==(const Confluence& a, const Confluence& b);
bool operator==(const PathExpr& a, const PathExpr& b);
bool operator==(const Branch& a, const Branch& b);

// Joins the parts left to right, splicing nested Concats; a single part is
// returned as-is.
PathExpr make_concat(std::vector<PathExpr> parts);

// Hands out "<base>1", "<base>2", ... per base name.
class AttrNamer {
 public:
  std::string next(const std::string& base);

 private:
  std::map<std::string, int> counters_;
};

enum class ConnectorCase { Plain, Forward, Reverse };

// Which of the three connector rules applies to an edge labelled `label`
// whose parent node has type `parent_type`. Throws std::invalid_argument
// for a role the schema does not know.
ConnectorCase classify_connector(const EdgeLabel& label, const TypeName& parent_type,
                                 const ConceptualSchema& schema);

// The role step inserted between the child expression and the parent type,
// or nullopt for a plain concatenation (spec/poly edges).
std::optional<RoleStep> connector(const EdgeLabel& label, const TypeName& parent_type,
                                  const ConceptualSchema& schema);

PathExpr path_seg(const SpiderGraph& g, const SpiderEdge& edge, const ConceptualSchema& schema, AttrNamer& namer);
PathExpr node_expr(const SpiderGraph& g, NodeId n, const ConceptualSchema& schema, AttrNamer& namer);
PathExpr root_expr(const SpiderGraph& g, const ConceptualSchema& schema);

std::string render(const PathExpr& e);

class ExprParseError : public std::runtime_error {
 public:
  ExprParseError(std::size_t offset, const std::string& message);
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Reads the render() syntax back. Bare names listed in `role_names` become
// forward role steps, every other bare name is a type atom.
PathExpr parse_expr(std::string_view text, const std::set<std::string>& role_names);
std::set<std::string> role_names_of(const ConceptualSchema& schema);

std::string verbalize(const PathExpr& e, const ConceptualSchema& schema);

}  // namespace spider
