// Constructive proof transformers: deduction, internalization, witness
// replacement and the derived Barcan/Buridan term synthesizers. Every output
// is a kernel-checkable Derivation.
#pragma once

#include "folp/kernel.hpp"

namespace folp {

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAccepted : TransformError {
  using TransformError::TransformError;
};
struct HypNotFound : TransformError {
  using TransformError::TransformError;
};
struct HypShapeError : TransformError {
  using TransformError::TransformError;
};
struct CsNotSchematic : TransformError {
  using TransformError::TransformError;
};
struct TautExpansionOverflow : TransformError {
  using TransformError::TransformError;
};
struct NotATautology : TransformError {
  using TransformError::TransformError;
};
struct VarNotFresh : TransformError {
  using TransformError::TransformError;
};
struct PreconditionViolation : TransformError {
  using TransformError::TransformError;
};
struct WrongLogic : TransformError {
  using TransformError::TransformError;
};

// Does v occur anywhere in f (argument positions, subscripts, binders,
// gen subscripts), free or bound?
bool var_occurs(const FormulaPtr& f, const Var& v);

// Incremental construction of a derivation with formula-level deduplication:
// adding a formula that is already a step returns the existing index.
// All indices are 1-based, matching the kernel.
class DerivationBuilder {
 public:
  DerivationBuilder(Logic logic, ConstantSpecification cs, std::vector<FormulaPtr> hyps = {});

  size_t size() const { return d_.steps.size(); }
  const FormulaPtr& formula(size_t idx) const { return d_.steps[idx - 1].formula; }
  const Derivation& derivation() const { return d_; }

  // Primitive steps (formulas are computed or supplied; the kernel re-check
  // downstream is the oracle for their correctness).
  size_t ax(SchemaId s, FormulaPtr f);
  size_t cs_step(const std::string& c, FormulaPtr body);  // adds [c]{} body
  size_t cs_axiom(SchemaId s, FormulaPtr instance);       // schematic convenience
  size_t hyp(size_t k);
  size_t mp(size_t i, size_t j);
  size_t gen_step(size_t i, const Var& x);
  size_t taut(FormulaPtr f, std::vector<size_t> cited);
  // Re-add step idx verbatim as a new step (bypasses deduplication).
  size_t duplicate(size_t idx);
  // Inline another derivation's steps (hypothesis list must be empty or equal
  // to this builder's); returns the index of its conclusion.
  size_t append(const Derivation& other);

  // Derived Hilbert combinators (axioms + MP only).
  size_t prove_id(const FormulaPtr& a);                        // a -> a
  size_t imp_intro_k(size_t i, const FormulaPtr& a);           // from b: a -> b
  size_t syll(size_t i, size_t j);                             // a->b, b->c: a->c
  size_t contrapose(size_t i);                                 // a->b: ~b->~a
  size_t not_bot();                                            // ~false
  size_t dne(const FormulaPtr& a);                             // ~~a -> a
  size_t dni(const FormulaPtr& a);                             // a -> ~~a
  size_t not_elim(size_t ai, size_t ni, const FormulaPtr& g);  // a, ~a: g
  size_t excluded_middle(const FormulaPtr& a);                 // (a | ~a)

  // Subscript plumbing for justification assertions.
  size_t a3_lift(size_t i, const VarSet& target);   // widen subscript to target
  size_t retarget(size_t i, const VarSet& target);  // drop then add via A2/A3

  // Finish; duplicates the conclusion step if it is not last.
  Derivation take(size_t conclusion_idx);

 private:
  size_t add(FormulaPtr f, Rule r);
  Derivation d_;
  std::map<std::string, size_t> memo_;
};

// Discharge hypothesis hyp_index (1-based): from Gamma u {phi} |- psi produce
// Gamma |- phi -> psi.
Derivation deduction(const Derivation& d, size_t hyp_index);

struct Synthesized {
  TermPtr term;
  Derivation derivation;
};

// From a derivation whose hypotheses are p0:_{X0}phi0, ..., pk:_{Xk}phik
// produce t and a derivation of t:_X psi with X the union of the Xi.
Synthesized internalize(const Derivation& d);

// Hilbert proof search for propositional consequences: hypotheses + goal with
// quantified/justified/atomic subformulas opaque. Output uses only AX/HYP/MP.
Derivation prove_sequent(Logic logic, const ConstantSpecification& cs,
                         std::vector<FormulaPtr> hyps, FormulaPtr goal);
Derivation prove_tautology(Logic logic, const ConstantSpecification& cs,
                           const FormulaPtr& goal);

// Replace every occurrence of witness variable a by the fresh basic variable y.
Derivation replace_witness(const Derivation& d, const Var& a, const Var& y);
// replace_witness followed by one generalization step.
Derivation generalize_witness(const Derivation& d, const Var& a, const Var& y);

// |- [t]{X} forall y. phi -> forall y. [(c_UI . t)]{X+y} phi
Synthesized converse_barcan(const TermPtr& t, const VarSet& X, const Var& y,
                            const FormulaPtr& phi, Logic logic = Logic::FOLPb);
// |- exists y. [t]{X+y} phi -> [s]{X} exists y. phi
Synthesized converse_buridan(const TermPtr& t, const VarSet& X, const Var& y,
                             const FormulaPtr& phi, Logic logic = Logic::FOLPb);
// FOJT45 only: |- forall y. [t]{X+y} phi -> [b_t]{X} forall y. phi
Synthesized jt45_barcan(const TermPtr& t, const VarSet& X, const Var& y,
                        const FormulaPtr& phi);

}  // namespace folp
