// Trusted checker for Hilbert-style derivations Gamma |- phi in FOLPb/FOJT45.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "folp/axioms.hpp"
#include "folp/syntax.hpp"

namespace folp {

struct Rule {
  enum class Kind { Ax, Cs, Hyp, Mp, Gen, Taut };
  Kind kind = Kind::Ax;
  SchemaId schema = SchemaId::A1_K;  // Ax
  std::string constant;              // Cs
  size_t k = 0;                      // Hyp (1-based hypothesis index)
  size_t i = 0, j = 0;               // Mp (1-based step indices); Gen uses i
  Var var;                           // Gen (basic)
  std::vector<size_t> cited;         // Taut (1-based step indices)

  static Rule ax(SchemaId s);
  static Rule cs(std::string constant);
  static Rule hyp(size_t k);
  static Rule mp(size_t i, size_t j);
  static Rule gen(size_t i, const Var& x);
  static Rule taut(std::vector<size_t> cited);
};

std::string to_string(Rule::Kind k);

struct Step {
  FormulaPtr formula;
  Rule rule;
};

struct Derivation {
  Logic logic = Logic::FOLPb;
  ConstantSpecification cs = ConstantSpecification::schematic();
  std::vector<FormulaPtr> hypotheses;
  std::vector<Step> steps;

  const FormulaPtr& conclusion() const { return steps.back().formula; }
};

enum class RejectReason {
  None,
  NoSteps,
  NonEmptyHypotheses,
  BadAxiomInstance,
  BadCsEntry,
  BadHypIndex,
  BadStepRef,
  MpMismatch,
  GenOnHypFreeVar,
  GenShapeMismatch,
  TautTooManyAtoms,
  TautNotConsequence,
  TautDisallowed,
};

std::string to_string(RejectReason r);

struct CheckReport {
  bool ok = false;
  size_t failed_step = 0;  // 1-based; 0 when ok or when the derivation is empty
  RejectReason reason = RejectReason::None;
  std::string message;
  size_t step_count = 0;
  std::map<Rule::Kind, size_t> rules_used;
};

struct CheckOptions {
  bool allow_taut = true;  // --no-taut strict mode sets this false
};

CheckReport check(const Derivation& d, const CheckOptions& opts = {});
// Same, but additionally requires an empty hypothesis list.
CheckReport check_theorem(const Derivation& d, const CheckOptions& opts = {});

}  // namespace folp
