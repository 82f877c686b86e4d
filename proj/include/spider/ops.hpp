#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spider/engine.hpp"
#include "spider/path_expr.hpp"

namespace spider {

// A user edit on a spider tree, as written in op scripts ("prune:n3").
struct TreeOp {
  enum class Kind { Prune, Respider };
  Kind kind;
  NodeId node;

  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const TreeOp&, const TreeOp&) = default;
};

std::string_view to_string(TreeOp::Kind k);
std::optional<TreeOp::Kind> parse_op_kind(std::string_view text);
// "prune:nK" or "respider:nK"; throws std::invalid_argument otherwise.
TreeOp parse_tree_op(std::string_view text);

SpiderGraph apply_op(const SchemaGraph& graph, const ConceptualSchema& schema, const SpiderGraph& g,
                     const TreeOp& op);

// Spider from `root`, then apply `ops` in order.
SpiderGraph run_script(const SchemaGraph& graph, const ConceptualSchema& schema, const TypeName& root,
                       const std::vector<TreeOp>& ops);

enum class EmitFormat { Tree, Expr, Verbal, Json };
std::optional<EmitFormat> parse_emit_format(std::string_view text);

// Text shown for `g` in the requested format. Tree and Json are JSON
// documents (pretty-printed, two-space indent); Expr and Verbal are plain
// text. All end with a newline.
std::string emit(const SpiderGraph& g, const ConceptualSchema& schema, EmitFormat format);

}  // namespace spider
