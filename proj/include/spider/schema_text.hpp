#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spider/schema.hpp"

namespace spider {

// Line-oriented schema format (.ssd):
//
//   objecttype <Type> [weight <w>]
//   relationship <Type> [weight <w>] roles <role>:<Player> [<role>:<Player> ...]
//   spec <Sub> <Super>
//   poly <X> <Y>
//
// '#' starts a comment. Missing weights default to 1.

struct Diagnostic {
  int line = 0;    // 1-based; 0 when no single line is responsible
  int column = 0;  // 1-based; 0 when unknown
  std::string message;

  [[nodiscard]] std::string to_string() const;
};

class SchemaParseError : public std::runtime_error {
 public:
  explicit SchemaParseError(std::vector<Diagnostic> diagnostics);
  [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// Returns a schema that passes validate_schema, or throws SchemaParseError
// carrying every syntax and validation problem with its location.
ConceptualSchema parse_schema(std::string_view text);

// Canonical text: object types, relationships, spec pairs, poly pairs, each
// section sorted. Weight 1 is left implicit.
std::string serialize_schema(const ConceptualSchema& schema);

}  // namespace spider
