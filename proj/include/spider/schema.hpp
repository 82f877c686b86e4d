#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spider {

// Identifier wrapper so type names and role names cannot be mixed up.
template <typename Tag>
class Name {
 public:
  Name() = default;
  explicit Name(std::string value) : value_(std::move(value)) {}

  [[nodiscard]] const std::string& str() const { return value_; }
  [[nodiscard]] bool empty() const { return value_.empty(); }

  friend auto operator<=>(const Name&, const Name&) = default;
  friend bool operator==(const Name&, const Name&) = default;

 private:
  std::string value_;
};

struct TypeTag {};
struct RoleTag {};
using TypeName = Name<TypeTag>;
using RoleName = Name<RoleTag>;

// True when `s` is a legal type or role identifier: non-empty, no whitespace,
// none of the reserved characters  : , ; [ ] ~  and no comment marker.
bool is_valid_identifier(std::string_view s);

// Exact non-negative decimal, e.g. "2.5" is mantissa 25, scale 1.
class Weight {
 public:
  Weight() = default;
  static Weight from_int(std::uint64_t v) { return Weight(v, 0); }
  // Throws std::invalid_argument on anything but digits with an optional
  // fractional part (at most 18 significant digits overall).
  static Weight parse(std::string_view text);

  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] double to_double() const;

  friend std::strong_ordering operator<=>(const Weight& a, const Weight& b);
  friend bool operator==(const Weight& a, const Weight& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  Weight(std::uint64_t mantissa, int scale);
  std::uint64_t mantissa_ = 1;
  int scale_ = 0;
};

// The ORM fabric: object types, relationship types with their roles, role
// players, subtype and polymorphy pairs, and conceptual weights.
struct ConceptualSchema {
  std::set<TypeName> obj_types;
  std::set<TypeName> rel_types;
  std::map<TypeName, std::vector<RoleName>> roles;
  std::map<RoleName, TypeName> player;
  std::set<std::pair<TypeName, TypeName>> spec;
  std::set<std::pair<TypeName, TypeName>> poly;
  std::map<TypeName, Weight> cweight;

  [[nodiscard]] std::set<TypeName> types() const;
  [[nodiscard]] bool has_type(const TypeName& t) const {
    return obj_types.contains(t) || rel_types.contains(t);
  }
  [[nodiscard]] bool is_rel_type(const TypeName& t) const { return rel_types.contains(t); }
  // Relationship owning `r`, or nullptr when the role is unknown.
  [[nodiscard]] const TypeName* rel_of(const RoleName& r) const;
  // Weight of `t`; 1 when no weight is recorded.
  [[nodiscard]] Weight weight(const TypeName& t) const;

  friend bool operator==(const ConceptualSchema&, const ConceptualSchema&) = default;
};

struct Violation {
  std::string rule;
  std::string element;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Every broken well-formedness rule, one record per offending element.
std::vector<Violation> validate_schema(const ConceptualSchema& schema);

class InvalidSchema : public std::runtime_error {
 public:
  explicit InvalidSchema(std::vector<Violation> violations);
  [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace spider

template <typename Tag>
struct std::hash<spider::Name<Tag>> {
  std::size_t operator()(const spider::Name<Tag>& n) const noexcept {
    return std::hash<std::string>{}(n.str());
  }
};
