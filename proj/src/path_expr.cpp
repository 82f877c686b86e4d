#include "spider/path_expr.hpp"

#include <cctype>
#include <sstream>

namespace spider {

bool operator==(const TypeAtom& a, const TypeAtom& b) { return a.type == b.type; }
bool operator==(const RoleStep& a, const RoleStep& b) { return a.role == b.role && a.reversed == b.reversed; }
bool operator==(const Concat& a, const Concat& b) { return a.parts == b.parts; }
bool operator==(const Confluence& a, const Confluence& b) { return a.head == b.head && a.branches == b.branches; }
bool operator==(const PathExpr& a, const PathExpr& b) { return a.node == b.node; }
bool operator==(const Branch& a, const Branch& b) { return a.attr == b.attr && a.expr == b.expr; }

PathExpr make_concat(std::vector<PathExpr> parts) {
  std::vector<PathExpr> flat;
  for (auto& p : parts) {
    if (auto* c = std::get_if<Concat>(&p.node)) {
      for (auto& q : c->parts) flat.push_back(std::move(q));
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.size() == 1) return std::move(flat.front());
  return PathExpr{Concat{std::move(flat)}};
}

std::string AttrNamer::next(const std::string& base) { return base + std::to_string(++counters_[base]); }

ConnectorCase classify_connector(const EdgeLabel& label, const TypeName& parent_type,
                                 const ConceptualSchema& schema) {
  if (!label.is_role()) return ConnectorCase::Plain;
  const TypeName* owner = schema.rel_of(label.role_name());
  if (owner == nullptr) throw std::invalid_argument("unknown role " + label.role_name().str());
  if (schema.is_rel_type(parent_type) && *owner == parent_type) return ConnectorCase::Forward;
  return ConnectorCase::Reverse;
}

std::optional<RoleStep> connector(const EdgeLabel& label, const TypeName& parent_type,
                                  const ConceptualSchema& schema) {
  switch (classify_connector(label, parent_type, schema)) {
    case ConnectorCase::Plain:
      return std::nullopt;
    case ConnectorCase::Forward:
      return RoleStep{label.role_name(), false};
    case ConnectorCase::Reverse:
      return RoleStep{label.role_name(), true};
  }
  return std::nullopt;
}

PathExpr path_seg(const SpiderGraph& g, const SpiderEdge& edge, const ConceptualSchema& schema, AttrNamer& namer) {
  const TypeName& parent_type = g.type_of(edge.parent);
  std::vector<PathExpr> parts;
  parts.push_back(node_expr(g, edge.child, schema, namer));
  if (auto step = connector(edge.label, parent_type, schema)) parts.push_back(PathExpr{*step});
  parts.push_back(PathExpr{TypeAtom{parent_type}});
  return make_concat(std::move(parts));
}

PathExpr node_expr(const SpiderGraph& g, NodeId n, const ConceptualSchema& schema, AttrNamer& namer) {
  const SpiderNode& node = g.node(n);
  if (node.children.empty()) return PathExpr{TypeAtom{node.type}};
  Confluence conf;
  conf.head = node.type;
  for (NodeId c : node.children) {
    const SpiderNode& child = g.node(c);
    std::string attr = namer.next(child.type.str());
    conf.branches.push_back({std::move(attr), path_seg(g, {n, c, *child.label}, schema, namer)});
  }
  return PathExpr{std::move(conf)};
}

PathExpr root_expr(const SpiderGraph& g, const ConceptualSchema& schema) {
  AttrNamer namer;
  return node_expr(g, g.root(), schema, namer);
}

namespace {

void render_into(const PathExpr& e, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TypeAtom>) {
          out += v.type.str();
        } else if constexpr (std::is_same_v<T, RoleStep>) {
          if (v.reversed) out += '~';
          out += v.role.str();
        } else if constexpr (std::is_same_v<T, Concat>) {
          for (std::size_t i = 0; i < v.parts.size(); ++i) {
            if (i > 0) out += " o ";
            render_into(v.parts[i], out);
          }
        } else {
          out += '[';
          for (std::size_t i = 0; i < v.branches.size(); ++i) {
            if (i > 0) out += ", ";
            out += v.branches[i].attr;
            out += ": ";
            render_into(v.branches[i].expr, out);
          }
          out += "; ";
          out += v.head.str();
          out += ']';
        }
      },
      e.node);
}

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::set<std::string>& roles) : text_(text), roles_(roles) {}

  PathExpr run() {
    PathExpr e = sequence();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  static bool name_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && std::string_view(":,;[]~").find(c) == std::string_view::npos;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ExprParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string name() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() && name_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  // True when the next token is the concatenation operator "o".
  bool at_concat_op() {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != 'o') return false;
    return pos_ + 1 == text_.size() || !name_char(text_[pos_ + 1]);
  }

  PathExpr sequence() {
    std::vector<PathExpr> parts;
    parts.push_back(term());
    while (at_concat_op()) {
      ++pos_;
      parts.push_back(term());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return PathExpr{Concat{std::move(parts)}};
  }

  PathExpr term() {
    if (peek('[')) {
      ++pos_;
      Confluence conf;
      std::set<std::string> seen;
      do {
        if (!conf.branches.empty()) ++pos_;  // the ','
        std::string attr = name();
        if (!seen.insert(attr).second) fail("duplicate branch name " + attr);
        expect(':');
        conf.branches.push_back({std::move(attr), sequence()});
      } while (peek(','));
      expect(';');
      conf.head = TypeName(name());
      expect(']');
      return PathExpr{std::move(conf)};
    }
    if (peek('~')) {
      ++pos_;
      return PathExpr{RoleStep{RoleName(name()), true}};
    }
    std::string n = name();
    if (roles_.contains(n)) return PathExpr{RoleStep{RoleName(std::move(n)), false}};
    return PathExpr{TypeAtom{TypeName(std::move(n))}};
  }

  std::string_view text_;
  const std::set<std::string>& roles_;
  std::size_t pos_ = 0;
};

std::string pad(std::size_t n) { return std::string(n, ' '); }

std::string verbal(const PathExpr& e, std::size_t indent);

std::string verbal_confluence(const Confluence& c, std::size_t indent, const std::string& head_line);

// Branch of a confluence: [child, step, head] or [child, head].
std::string verbal_branch(const PathExpr& e, std::size_t indent) {
  const auto* cat = std::get_if<Concat>(&e.node);
  if (cat != nullptr && cat->parts.size() == 3) {
    if (const auto* step = std::get_if<RoleStep>(&cat->parts[1].node)) {
      return "via " + step->role.str() + ": " + verbal(cat->parts[0], indent);
    }
  }
  if (cat != nullptr && cat->parts.size() == 2) {
    const auto* head = std::get_if<TypeAtom>(&cat->parts[1].node);
    if (head != nullptr) {
      const std::string super = " which is a " + head->type.str();
      if (const auto* child = std::get_if<Confluence>(&cat->parts[0].node)) {
        return verbal_confluence(*child, indent, child->head.str() + super);
      }
      return verbal(cat->parts[0], indent) + super;
    }
  }
  return verbal(e, indent);
}

std::string verbal_confluence(const Confluence& c, std::size_t indent, const std::string& head_line) {
  std::string out = head_line + ":";
  for (const auto& b : c.branches) {
    out += "\n" + pad(indent + 2) + "- " + verbal_branch(b.expr, indent + 2);
  }
  return out;
}

std::string verbal(const PathExpr& e, std::size_t indent) {
  if (const auto* t = std::get_if<TypeAtom>(&e.node)) return t->type.str();
  if (const auto* r = std::get_if<RoleStep>(&e.node)) return (r->reversed ? "~" : "") + r->role.str();
  if (const auto* c = std::get_if<Confluence>(&e.node)) return verbal_confluence(*c, indent, c->head.str());
  const auto& parts = std::get<Concat>(e.node).parts;
  std::string text = verbal(parts.front(), indent);
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto* step = std::get_if<RoleStep>(&parts[i].node);
    if (step == nullptr) {
      text += " which is a " + verbal(parts[i], indent);
    } else if (i + 1 < parts.size()) {
      const std::string target = verbal(parts[i + 1], indent);
      text = step->reversed ? text + " is " + step->role.str() + " of " + target
                            : target + " " + step->role.str() + " " + text;
      ++i;
    } else {
      text += " " + step->role.str();
    }
  }
  return text;
}

}  // namespace

std::string render(const PathExpr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

ExprParseError::ExprParseError(std::size_t offset, const std::string& message)
    : std::runtime_error("offset " + std::to_string(offset) + ": " + message), offset_(offset) {}

PathExpr parse_expr(std::string_view text, const std::set<std::string>& role_names) {
  return ExprParser(text, role_names).run();
}

std::set<std::string> role_names_of(const ConceptualSchema& schema) {
  std::set<std::string> out;
  for (const auto& [_, roles] : schema.roles) {
    for (const auto& r : roles) out.insert(r.str());
  }
  return out;
}

std::string verbalize(const PathExpr& e, [[maybe_unused]] const ConceptualSchema& schema) { return verbal(e, 0); }

}  // namespace spider
