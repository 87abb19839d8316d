// Template calculus: propositional modal templates, instantiation-set
// membership, the constructive transformers (semi-replacement, vacuous
// quantification, generalized Barcan, combining) and the sharp operator.
#pragma once

#include "folp/transform.hpp"

namespace folp {

struct TemplateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ArityMismatch : TemplateError {
  using TemplateError::TemplateError;
};
struct NotPositive : TemplateError {
  using TemplateError::TemplateError;
};
struct NotDisjunctive : TemplateError {
  using TemplateError::TemplateError;
};
struct MemberCheckFailed : TemplateError {
  using TemplateError::TemplateError;
};
struct FreeVarViolation : TemplateError {
  using TemplateError::TemplateError;
};

struct Template;
using TemplatePtr = std::shared_ptr<const Template>;

// Templates: pN | ~F | (F & F) | (F | F) | box F, with every letter occurring
// at most once. Letters bind positionally: pN refers to the N-th formula
// (0-based) of the vector supplied to member and the transformers.
struct Template {
  enum class Kind { Letter, Not, And, Or, Box };
  Kind kind;
  size_t letter = 0;  // Letter
  TemplatePtr a, b;   // children (b only for And/Or)
};

TemplatePtr tletter(size_t i);
TemplatePtr tnot(TemplatePtr a);
TemplatePtr tand(TemplatePtr a, TemplatePtr b);  // throws TemplateError on a shared letter
TemplatePtr tor(TemplatePtr a, TemplatePtr b);   // likewise
TemplatePtr tbox(TemplatePtr a);

size_t degree(const TemplatePtr& f);            // connective + box nodes
bool is_positive(const TemplatePtr& f);         // no ~
bool is_disjunctive(const TemplatePtr& f);      // no ~, no &
std::set<size_t> letters_of(const TemplatePtr& f);
size_t letter_count(const TemplatePtr& f);      // 1 + max letter index (0 if none)

TemplatePtr parse_template(const std::string& text);
std::string print_template(const TemplatePtr& f);
bool equal(const TemplatePtr& a, const TemplatePtr& b);

// Is psi in the instantiation set of F over phis? Box members [t]{X} body
// require X to be exactly the witness variables occurring in the body.
// Throws ArityMismatch unless every letter of F has a binding in phis.
bool member(const TemplatePtr& f, const std::vector<FormulaPtr>& phis,
            const FormulaPtr& psi);

struct TemplateResult {
  FormulaPtr theta;
  Derivation derivation;
};

// F positive on letters (p0..p(n-1), q=pn), imp a theorem of chi -> psi,
// phi in [[F(phis, chi)]]. Returns theta in [[F(phis, psi)]] with a theorem
// of phi -> theta.
TemplateResult semi_replacement(const TemplatePtr& f, const Derivation& imp,
                                const std::vector<FormulaPtr>& phis,
                                const FormulaPtr& phi);

// F disjunctive, y not free in any phi_i, psi in [[F(phis)]]. Returns theta in
// [[F(phis)]] with a theorem of exists y. psi -> theta.
TemplateResult vacuous_quantification(const TemplatePtr& f,
                                      const std::vector<FormulaPtr>& phis,
                                      const FormulaPtr& psi, const Var& y,
                                      Logic logic = Logic::FOLPb);

// F disjunctive on letters (p0..p(n-1), q=pn), y not free in any phi_i,
// psi in [[F(phis, phi_y)]]. Returns theta in [[F(phis, forall y. phi_y)]]
// with a theorem of forall y. psi -> theta.
TemplateResult generalized_barcan(const TemplatePtr& f, const Var& y,
                                  const FormulaPtr& phi_y,
                                  const std::vector<FormulaPtr>& phis,
                                  const FormulaPtr& psi,
                                  Logic logic = Logic::FOLPb);

// F disjunctive, psis nonempty members of [[F(phis)]]. Returns theta in
// [[F(phis)]] with a theorem of (psi1 | ... | psik) -> theta (left-nested).
TemplateResult combine(const TemplatePtr& f, const std::vector<FormulaPtr>& phis,
                       const std::vector<FormulaPtr>& psis,
                       Logic logic = Logic::FOLPb);

// For each member [t]{X} body with X exactly the witness variables of the
// body, emit the universal closure of the body; everything else contributes
// nothing. Duplicates are removed; order follows first contribution.
std::vector<FormulaPtr> sharp(const std::vector<FormulaPtr>& gamma);

}  // namespace folp
