// Core syntax for first-order justification logics (FOLPb / FOJT45):
// individual variables (basic and witness), justification terms, formulas,
// free variables, substitution and variable variants.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace folp {

enum class Logic { FOLPb, FOJT45 };

std::string to_string(Logic l);
std::optional<Logic> logic_from_string(const std::string& s);

// An individual variable. Witness variables form a separate lexical class
// (written @name); they are never bound by quantifiers or gen subscripts.
struct Var {
  std::string name;
  bool witness = false;

  bool operator==(const Var& o) const { return witness == o.witness && name == o.name; }
  bool operator!=(const Var& o) const { return !(*this == o); }
  bool operator<(const Var& o) const {
    if (witness != o.witness) return witness < o.witness;  // basic sort first
    return name < o.name;
  }
  std::string str() const { return witness ? "@" + name : name; }
};

using VarSet = std::set<Var>;

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Justification terms: p | c | (t.s) | (t+s) | !t | ?t | b(t) | gen[x](t)
struct Term {
  enum class Kind { JVar, JConst, App, Sum, Bang, Query, Bar, Gen };
  Kind kind;
  std::string name;  // JVar / JConst
  TermPtr a, b;      // children (b only for App/Sum)
  Var bound;         // Gen subscript (always basic)
};

TermPtr jvar(const std::string& name);
TermPtr jconst(const std::string& name);
TermPtr app(TermPtr a, TermPtr b);
TermPtr sum(TermPtr a, TermPtr b);
TermPtr bang(TermPtr a);
TermPtr query(TermPtr a);
TermPtr bar(TermPtr a);
TermPtr gen(const Var& x, TermPtr a);

bool equal(const TermPtr& a, const TermPtr& b);
// Does t contain a subterm of the given kind? (used for per-logic admissibility)
bool contains_kind(const TermPtr& t, Term::Kind k);
size_t term_size(const TermPtr& t);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Formulas: P(args) | false | ~A | (A->B) | (A&B) | (A|B) | (A<->B)
//         | forall x. A | exists x. A | [t]{X} A
struct Formula {
  enum class Kind { Atom, Bottom, Not, And, Or, Implies, Iff, Forall, Exists, Just };
  Kind kind;
  std::string pred;       // Atom
  std::vector<Var> args;  // Atom
  FormulaPtr l, r;        // children (r only for binary kinds)
  Var bound;              // Forall/Exists (always basic)
  TermPtr term;           // Just
  VarSet sub;             // Just subscript X
};

FormulaPtr atom(const std::string& pred, std::vector<Var> args = {});
FormulaPtr bottom();
FormulaPtr fnot(FormulaPtr a);
FormulaPtr fand(FormulaPtr a, FormulaPtr b);
FormulaPtr forr(FormulaPtr a, FormulaPtr b);
FormulaPtr implies(FormulaPtr a, FormulaPtr b);
FormulaPtr iff(FormulaPtr a, FormulaPtr b);
FormulaPtr forall(const Var& x, FormulaPtr a);
FormulaPtr exists(const Var& x, FormulaPtr a);
FormulaPtr just(TermPtr t, VarSet sub, FormulaPtr a);

bool equal(const FormulaPtr& a, const FormulaPtr& b);
size_t formula_size(const FormulaPtr& f);

// Free variables. By definition fv([t]{X} A) = X: occurrences of variables in
// the body count as free only when the variable belongs to X.
VarSet free_vars(const FormulaPtr& f);
// All witness variables occurring anywhere in f (argument positions and
// subscripts); witness variables are never bound, but an occurrence inside a
// justification body is free only via the subscript.
VarSet witness_occurring(const FormulaPtr& f);
bool is_closed(const FormulaPtr& f);  // no free basic variable

// y is free for x in f (substituting y for x captures nothing and creates no
// new free occurrence through a subscript).
bool free_for(const Var& y, const Var& x, const FormulaPtr& f);

struct CaptureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Simultaneous substitution of variables for variables on free occurrences.
// Throws CaptureError unless every replacement is free for its target.
FormulaPtr substitute(const FormulaPtr& f, const std::map<Var, Var>& sigma);
// Same replacement but without the free-for precondition; used by the model
// evaluator, where witness variables (never bindable) are being plugged in.
FormulaPtr replace_free(const FormulaPtr& f, const std::map<Var, Var>& sigma);

// If psi is obtained from phi by a bijective renaming of free variables,
// return one such renaming. `pair_ok` can restrict admissible pairs (e.g. to
// basic-to-witness replacements); identity pairs are always admissible.
std::optional<std::map<Var, Var>> variable_variant(
    const FormulaPtr& phi, const FormulaPtr& psi,
    const std::function<bool(const Var&, const Var&)>& pair_ok = nullptr);

// forall-prefix over the free basic variables in lexicographic order.
FormulaPtr universal_closure(const FormulaPtr& f);

}  // namespace folp
