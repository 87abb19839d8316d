// File formats: derivation files (.jd) and explicit constant-specification
// files. Model files are handled alongside the semantics types.
#pragma once

#include <string>

#include "folp/kernel.hpp"
#include "folp/textio.hpp"

namespace folp {

struct DuplicateIndexError : ParseError {
  using ParseError::ParseError;
};
struct UnknownSectionError : ParseError {
  using ParseError::ParseError;
};

// Does the formula use a justification primitive foreign to the logic
// (b in FOJT45, ? in FOLPb)?
bool formula_in_logic(const FormulaPtr& f, Logic logic);

// `base_dir` resolves the path of an `cs explicit <path>` header line.
Derivation parse_derivation(const std::string& text, const std::string& base_dir = "");
Derivation load_derivation(const std::string& path);
// `cs_path` is emitted in the header when the specification is explicit.
std::string print_derivation(const Derivation& d, const std::string& cs_path = "");

std::vector<std::pair<std::string, FormulaPtr>> parse_cs_entries(const std::string& text);
ConstantSpecification load_explicit_cs(const std::string& path);
std::string print_cs_entries(const std::vector<std::pair<std::string, FormulaPtr>>& entries);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace folp
