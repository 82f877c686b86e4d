#include "spider/schema.hpp"

#include <algorithm>
#include <cctype>

namespace spider {

namespace {

__extension__ using Wide = unsigned __int128;

constexpr std::string_view kReserved = ":,;[]~#";

std::uint64_t pow10(int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= 10;
  return r;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

bool is_valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    const auto uc = static_cast<unsigned char>(c);
    return std::isspace(uc) || std::iscntrl(uc) || kReserved.find(c) != std::string_view::npos;
  });
}

Weight::Weight(std::uint64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {
  while (scale_ > 0 && mantissa_ % 10 == 0) {
    mantissa_ /= 10;
    --scale_;
  }
}

Weight Weight::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty weight");
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || (dot != std::string_view::npos && frac.empty())) {
    throw std::invalid_argument("malformed weight '" + std::string(text) + "'");
  }
  std::string digits;
  for (std::string_view part : {whole, frac}) {
    for (char c : part) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw std::invalid_argument("malformed weight '" + std::string(text) + "'");
      }
      digits += c;
    }
  }
  while (frac.size() > 0 && frac.back() == '0') {
    frac.remove_suffix(1);
    digits.pop_back();
  }
  const auto first = digits.find_first_not_of('0');
  digits = first == std::string::npos ? "0" : digits.substr(first);
  if (digits.size() > 18) {
    throw std::invalid_argument("weight '" + std::string(text) + "' has too many digits");
  }
  return Weight(std::stoull(digits), static_cast<int>(frac.size()));
}

std::string Weight::to_string() const {
  std::string digits = std::to_string(mantissa_);
  if (scale_ == 0) return digits;
  if (static_cast<int>(digits.size()) <= scale_) {
    digits.insert(0, static_cast<std::size_t>(scale_) - digits.size() + 1, '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(scale_), 1, '.');
  return digits;
}

double Weight::to_double() const {
  return static_cast<double>(mantissa_) / static_cast<double>(pow10(scale_));
}

std::strong_ordering operator<=>(const Weight& a, const Weight& b) {
  const int scale = std::max(a.scale_, b.scale_);
  const auto lhs = static_cast<Wide>(a.mantissa_) * pow10(scale - a.scale_);
  const auto rhs = static_cast<Wide>(b.mantissa_) * pow10(scale - b.scale_);
  return lhs <=> rhs;
}

std::set<TypeName> ConceptualSchema::types() const {
  std::set<TypeName> all = obj_types;
  all.insert(rel_types.begin(), rel_types.end());
  return all;
}

const TypeName* ConceptualSchema::rel_of(const RoleName& r) const {
  for (const auto& [rel, rs] : roles) {
    if (std::find(rs.begin(), rs.end(), r) != rs.end()) return &rel;
  }
  return nullptr;
}

Weight ConceptualSchema::weight(const TypeName& t) const {
  auto it = cweight.find(t);
  return it == cweight.end() ? Weight{} : it->second;
}

InvalidSchema::InvalidSchema(std::vector<Violation> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid schema:";
        for (const auto& v : violations) msg += " [" + v.rule + "] " + v.message + ";";
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<Violation> validate_schema(const ConceptualSchema& schema) {
  std::vector<Violation> out;
  auto report = [&](std::string rule, std::string element, std::string message) {
    out.push_back({std::move(rule), std::move(element), std::move(message)});
  };

  for (const auto& set : {&schema.obj_types, &schema.rel_types}) {
    for (const auto& t : *set) {
      if (!is_valid_identifier(t.str())) {
        report("identifier", t.str(), "type name '" + t.str() + "' is not a valid identifier");
      }
    }
  }
  for (const auto& t : schema.obj_types) {
    if (schema.rel_types.contains(t)) {
      report("disjoint-kinds", t.str(),
             "type " + t.str() + " is both an object type and a relationship type");
    }
  }

  // Role partition: each role in exactly one relationship's list.
  std::map<RoleName, std::vector<std::string>> owners;
  for (const auto& [rel, rs] : schema.roles) {
    if (!schema.rel_types.contains(rel)) {
      report("roles-domain", rel.str(), "roles listed for " + rel.str() + ", which is not a relationship type");
    }
    for (const auto& r : rs) owners[r].push_back(rel.str());
  }
  for (const auto& [role, rels] : owners) {
    if (!is_valid_identifier(role.str())) {
      report("identifier", role.str(), "role name '" + role.str() + "' is not a valid identifier");
    }
    if (rels.size() > 1) {
      report("role-partition", role.str(),
             "role " + role.str() + " belongs to more than one relationship (" + join_names(rels) + ")");
    }
    if (schema.has_type(TypeName(role.str()))) {
      report("role-type-collision", role.str(), "role " + role.str() + " has the same name as a type");
    }
    auto p = schema.player.find(role);
    if (p == schema.player.end()) {
      report("player-total", role.str(), "role " + role.str() + " has no player");
    } else if (!schema.has_type(p->second)) {
      report("player-known", role.str(), "unknown player type " + p->second.str() + " for role " + role.str());
    }
  }
  for (const auto& rel : schema.rel_types) {
    auto it = schema.roles.find(rel);
    if (it == schema.roles.end() || it->second.empty()) {
      report("relationship-roles", rel.str(), "relationship " + rel.str() + " has no roles");
    }
  }
  for (const auto& [role, _] : schema.player) {
    if (!owners.contains(role)) {
      report("player-domain", role.str(), "player given for role " + role.str() + ", which no relationship owns");
    }
  }

  auto check_pairs = [&](const std::set<std::pair<TypeName, TypeName>>& pairs, const std::string& kind) {
    for (const auto& [x, y] : pairs) {
      const std::string element = x.str() + " " + y.str();
      if (!schema.obj_types.contains(x)) {
        report(kind + "-domain", element, kind + " pair " + element + ": " + x.str() + " is not an object type");
      }
      if (!schema.has_type(y)) {
        report(kind + "-domain", element, kind + " pair " + element + ": unknown type " + y.str());
      }
      if (x < y && pairs.contains({y, x})) {
        report("parallel-edge", element,
               kind + " declared in both directions between " + x.str() + " and " + y.str());
      }
    }
  };
  check_pairs(schema.spec, "spec");
  check_pairs(schema.poly, "poly");

  for (const auto& t : schema.types()) {
    if (!schema.cweight.contains(t)) report("weight-total", t.str(), "type " + t.str() + " has no weight");
  }
  for (const auto& [t, _] : schema.cweight) {
    if (!schema.has_type(t)) report("weight-domain", t.str(), "weight given for unknown type " + t.str());
  }
  return out;
}

}  // namespace spider
