// Concrete syntax: parsing and printing of terms, formulas, derivation files
// and model files. Canonical printing is fully parenthesized; parse(print(x))
// is the identity.
#pragma once

#include <stdexcept>
#include <string>

#include "folp/syntax.hpp"

namespace folp {

struct SourceSpan {
  size_t line = 1;
  size_t column = 1;
  size_t length = 0;
};

struct ParseError : std::runtime_error {
  SourceSpan span;
  std::string expected;  // human-readable expected-token set

  ParseError(const std::string& msg, SourceSpan s, std::string exp = "")
      : std::runtime_error(msg), span(s), expected(std::move(exp)) {}
};

std::string print_term(const TermPtr& t);
std::string print_formula(const FormulaPtr& f);

TermPtr parse_term(const std::string& text);
FormulaPtr parse_formula(const std::string& text);

}  // namespace folp
