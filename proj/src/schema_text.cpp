#include "spider/schema_text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

namespace spider {

std::string Diagnostic::to_string() const {
  std::string out;
  if (line > 0) {
    out += "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    out += ": ";
  }
  return out + message;
}

SchemaParseError::SchemaParseError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg;
        for (const auto& d : diagnostics) {
          if (!msg.empty()) msg += "\n";
          msg += d.to_string();
        }
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

namespace {

struct Token {
  std::string_view text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

struct Located {
  int line;
  int column;
};

class Parser {
 public:
  ConceptualSchema run(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      std::string_view line = text.substr(pos, nl - pos);
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      parse_line(line_no, tokenize(line));
      pos = nl + 1;
    }
    resolve();
    if (!errors_.empty()) {
      // Report in document order; the resolve pass runs after the line pass.
      std::stable_sort(errors_.begin(), errors_.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.line, a.column) < std::tie(b.line, b.column);
      });
      throw SchemaParseError(std::move(errors_));
    }
    return std::move(schema_);
  }

 private:
  void error(int line, int column, std::string message) {
    errors_.push_back({line, column, std::move(message)});
  }

  bool identifier(int line, const Token& tok, std::string_view what) {
    for (char c : tok.text) {
      const auto uc = static_cast<unsigned char>(c);
      if (uc < 0x20 || uc == 0x7f) {
        error(line, tok.column, "control character in " + std::string(what));
        return false;
      }
    }
    if (!is_valid_identifier(tok.text)) {
      error(line, tok.column, "invalid " + std::string(what) + " '" + std::string(tok.text) + "'");
      return false;
    }
    return true;
  }

  std::optional<Weight> weight(int line, const Token& tok) {
    try {
      return Weight::parse(tok.text);
    } catch (const std::invalid_argument& e) {
      error(line, tok.column, e.what());
      return std::nullopt;
    }
  }

  bool declare_type(int line, const Token& tok, bool relationship) {
    TypeName name{std::string(tok.text)};
    if (auto it = type_lines_.find(name); it != type_lines_.end()) {
      error(line, tok.column,
            "duplicate type " + name.str() + " (first declared at line " + std::to_string(it->second.line) + ")");
      return false;
    }
    type_lines_.emplace(name, Located{line, tok.column});
    (relationship ? schema_.rel_types : schema_.obj_types).insert(name);
    schema_.cweight[name] = Weight{};
    return true;
  }

  void parse_line(int line, const std::vector<Token>& toks) {
    if (toks.empty()) return;
    const auto keyword = toks[0].text;
    if (keyword == "objecttype") {
      parse_objecttype(line, toks);
    } else if (keyword == "relationship") {
      parse_relationship(line, toks);
    } else if (keyword == "spec" || keyword == "poly") {
      parse_pair(line, toks, keyword == "spec");
    } else {
      error(line, toks[0].column, "unknown declaration '" + std::string(keyword) + "'");
    }
  }

  void parse_objecttype(int line, const std::vector<Token>& toks) {
    if (toks.size() != 2 && toks.size() != 4) {
      error(line, toks[0].column, "expected 'objecttype <Type> [weight <w>]'");
      return;
    }
    if (!identifier(line, toks[1], "type name")) return;
    std::optional<Weight> w = Weight{};
    if (toks.size() == 4) {
      if (toks[2].text != "weight") {
        error(line, toks[2].column, "expected 'weight', found '" + std::string(toks[2].text) + "'");
        return;
      }
      w = weight(line, toks[3]);
      if (!w) return;
    }
    if (declare_type(line, toks[1], false)) schema_.cweight[TypeName(std::string(toks[1].text))] = *w;
  }

  void parse_relationship(int line, const std::vector<Token>& toks) {
    if (toks.size() < 2) {
      error(line, toks[0].column, "expected 'relationship <Type> [weight <w>] roles <role>:<Player> ...'");
      return;
    }
    if (!identifier(line, toks[1], "type name")) return;
    std::size_t i = 2;
    std::optional<Weight> w = Weight{};
    if (i < toks.size() && toks[i].text == "weight") {
      if (i + 1 >= toks.size()) {
        error(line, toks[i].column, "missing weight value");
        return;
      }
      w = weight(line, toks[i + 1]);
      if (!w) return;
      i += 2;
    }
    if (i >= toks.size() || toks[i].text != "roles") {
      const int col = i < toks.size() ? toks[i].column : toks.back().column;
      error(line, col, "expected 'roles'");
      return;
    }
    ++i;
    if (i >= toks.size()) {
      error(line, toks[i - 1].column, "relationship " + std::string(toks[1].text) + " has no roles");
      return;
    }
    std::vector<std::pair<RoleName, TypeName>> roles;
    std::vector<int> role_columns;
    for (; i < toks.size(); ++i) {
      const auto& tok = toks[i];
      const auto colon = tok.text.find(':');
      if (colon == std::string_view::npos) {
        error(line, tok.column, "expected <role>:<Player>, found '" + std::string(tok.text) + "'");
        return;
      }
      Token role{tok.text.substr(0, colon), tok.column};
      Token player{tok.text.substr(colon + 1), tok.column + static_cast<int>(colon) + 1};
      if (!identifier(line, role, "role name") || !identifier(line, player, "player type name")) return;
      roles.emplace_back(RoleName(std::string(role.text)), TypeName(std::string(player.text)));
      role_columns.push_back(role.column);
      player_refs_.push_back({roles.back().first, Located{line, player.column}});
    }
    if (!declare_type(line, toks[1], true)) return;
    TypeName rel{std::string(toks[1].text)};
    schema_.cweight[rel] = *w;
    auto& list = schema_.roles[rel];
    for (std::size_t k = 0; k < roles.size(); ++k) {
      const auto& [r, p] = roles[k];
      if (auto it = role_lines_.find(r); it != role_lines_.end()) {
        error(line, role_columns[k], "duplicate role " + r.str() + " (first declared at line " +
                                        std::to_string(it->second.line) + ")");
        continue;
      }
      role_lines_.emplace(r, Located{line, role_columns[k]});
      list.push_back(r);
      schema_.player[r] = p;
    }
  }

  void parse_pair(int line, const std::vector<Token>& toks, bool spec) {
    const std::string kind(toks[0].text);
    if (toks.size() != 3) {
      error(line, toks[0].column, "expected '" + kind + " <X> <Y>'");
      return;
    }
    if (!identifier(line, toks[1], "type name") || !identifier(line, toks[2], "type name")) return;
    std::pair<TypeName, TypeName> pair{TypeName(std::string(toks[1].text)), TypeName(std::string(toks[2].text))};
    auto& set = spec ? schema_.spec : schema_.poly;
    if (set.contains(pair)) {
      error(line, toks[0].column, "duplicate " + kind + " " + pair.first.str() + " " + pair.second.str());
      return;
    }
    set.insert(pair);
    pair_refs_.push_back({spec, pair, line, toks[1].column, toks[2].column});
  }

  void resolve() {
    for (const auto& [role, where] : player_refs_) {
      auto it = schema_.player.find(role);
      if (it == schema_.player.end()) continue;
      if (!schema_.has_type(it->second)) {
        error(where.line, where.column, "unknown player type " + it->second.str());
      }
    }
    for (const auto& ref : pair_refs_) {
      const std::string kind = ref.spec ? "spec" : "poly";
      const auto& [x, y] = ref.pair;
      if (!schema_.has_type(x)) {
        error(ref.line, ref.col_x, "unknown type " + x.str());
      } else if (!schema_.obj_types.contains(x)) {
        error(ref.line, ref.col_x, kind + " requires an object type on the left, " + x.str() + " is a relationship");
      }
      if (!schema_.has_type(y)) error(ref.line, ref.col_y, "unknown type " + y.str());
      const auto& set = ref.spec ? schema_.spec : schema_.poly;
      if (y < x && set.contains({y, x})) {
        error(ref.line, ref.col_x, kind + " declared in both directions between " + y.str() + " and " + x.str());
      }
    }
    for (const auto& [role, where] : role_lines_) {
      if (auto t = type_lines_.find(TypeName(role.str())); t != type_lines_.end()) {
        error(where.line, where.column, "role " + role.str() + " has the same name as type declared at line " +
                                 std::to_string(t->second.line));
      }
    }
    if (!errors_.empty()) return;
    // Anything the targeted checks above missed.
    for (const auto& v : validate_schema(schema_)) {
      int line = 0;
      if (auto t = type_lines_.find(TypeName(v.element)); t != type_lines_.end()) line = t->second.line;
      if (auto r = role_lines_.find(RoleName(v.element)); r != role_lines_.end()) line = r->second.line;
      error(line, 0, v.message);
    }
  }

  struct PairRef {
    bool spec;
    std::pair<TypeName, TypeName> pair;
    int line;
    int col_x;
    int col_y;
  };

  ConceptualSchema schema_;
  std::vector<Diagnostic> errors_;
  std::map<TypeName, Located> type_lines_;
  std::map<RoleName, Located> role_lines_;
  std::vector<std::pair<RoleName, Located>> player_refs_;
  std::vector<PairRef> pair_refs_;
};

std::string weight_suffix(const ConceptualSchema& schema, const TypeName& t) {
  const Weight w = schema.weight(t);
  return w == Weight{} ? std::string{} : " weight " + w.to_string();
}

}  // namespace

ConceptualSchema parse_schema(std::string_view text) { return Parser{}.run(text); }

std::string serialize_schema(const ConceptualSchema& schema) {
  std::ostringstream out;
  for (const auto& t : schema.obj_types) out << "objecttype " << t.str() << weight_suffix(schema, t) << '\n';
  for (const auto& t : schema.rel_types) {
    out << "relationship " << t.str() << weight_suffix(schema, t) << " roles";
    if (auto it = schema.roles.find(t); it != schema.roles.end()) {
      for (const auto& r : it->second) out << ' ' << r.str() << ':' << schema.player.at(r).str();
    }
    out << '\n';
  }
  for (const auto& [x, y] : schema.spec) out << "spec " << x.str() << ' ' << y.str() << '\n';
  for (const auto& [x, y] : schema.poly) out << "poly " << x.str() << ' ' << y.str() << '\n';
  return out.str();
}

}  // namespace spider
