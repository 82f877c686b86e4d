#include "spider/ops.hpp"

#include <stdexcept>

namespace spider {

std::string_view to_string(TreeOp::Kind k) { return k == TreeOp::Kind::Prune ? "prune" : "respider"; }

std::string TreeOp::to_string() const { return std::string(spider::to_string(kind)) + ":" + node.to_string(); }

std::optional<TreeOp::Kind> parse_op_kind(std::string_view text) {
  if (text == "prune") return TreeOp::Kind::Prune;
  if (text == "respider") return TreeOp::Kind::Respider;
  return std::nullopt;
}

TreeOp parse_tree_op(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("op '" + std::string(text) + "' is not of the form prune:nK or respider:nK");
  }
  auto kind = parse_op_kind(text.substr(0, colon));
  if (!kind) throw std::invalid_argument("unknown op '" + std::string(text.substr(0, colon)) + "'");
  auto node = NodeId::parse(text.substr(colon + 1));
  if (!node) throw std::invalid_argument("bad node id '" + std::string(text.substr(colon + 1)) + "'");
  return {*kind, *node};
}

SpiderGraph apply_op(const SchemaGraph& graph, const ConceptualSchema& schema, const SpiderGraph& g,
                     const TreeOp& op) {
  switch (op.kind) {
    case TreeOp::Kind::Prune:
      return prune(g, op.node);
    case TreeOp::Kind::Respider:
      return respider(graph, schema, g, op.node);
  }
  throw std::logic_error("unhandled op kind");
}

SpiderGraph run_script(const SchemaGraph& graph, const ConceptualSchema& schema, const TypeName& root,
                       const std::vector<TreeOp>& ops) {
  SpiderGraph g = spider_query(graph, schema, root);
  for (const auto& op : ops) g = apply_op(graph, schema, g, op);
  return g;
}

std::optional<EmitFormat> parse_emit_format(std::string_view text) {
  if (text == "tree") return EmitFormat::Tree;
  if (text == "expr") return EmitFormat::Expr;
  if (text == "verbal") return EmitFormat::Verbal;
  if (text == "json") return EmitFormat::Json;
  return std::nullopt;
}

std::string emit(const SpiderGraph& g, const ConceptualSchema& schema, EmitFormat format) {
  switch (format) {
    case EmitFormat::Tree:
      return spider_to_json(g, schema).dump(2) + "\n";
    case EmitFormat::Expr:
      return render(root_expr(g, schema)) + "\n";
    case EmitFormat::Verbal:
      return verbalize(root_expr(g, schema), schema) + "\n";
    case EmitFormat::Json: {
      const PathExpr e = root_expr(g, schema);
      nlohmann::json doc{{"tree", spider_to_json(g, schema)},
                         {"expression", render(e)},
                         {"verbalization", verbalize(e, schema)}};
      return doc.dump(2) + "\n";
    }
  }
  return {};
}

}  // namespace spider
