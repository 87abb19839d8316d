// Finite Fitting models: representation, evidence-function modes (full /
// closure / table), truth evaluation, validity, condition auditing, and the
// model file format.
#pragma once

#include "folp/axioms.hpp"
#include "folp/textio.hpp"

namespace folp {

struct SemanticsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// The queried formula has free basic variables, or mentions a witness
// variable outside the model's domain.
struct NotClosed : SemanticsError {
  using SemanticsError::SemanticsError;
};
struct UnknownWorld : SemanticsError {
  using SemanticsError::SemanticsError;
};
// Closure-mode formula universe exceeded the configured budget.
struct UniverseOverflow : SemanticsError {
  using SemanticsError::SemanticsError;
};

// One closure-mode base fact: w is evidence-relevant for (term, formula).
struct EvidenceBase {
  TermPtr term;
  FormulaPtr formula;
  std::string world;
};

// One table-mode entry: the listed worlds are exactly where term is evidence
// for formula (and, via the Instantiation Condition, for its instances).
struct EvidenceEntry {
  TermPtr term;
  FormulaPtr formula;
  std::set<std::string> worlds;
};

struct EvidenceSpec {
  enum class Mode { Full, Closure, Table };
  Mode mode = Mode::Full;
  std::vector<EvidenceBase> base;      // Closure mode
  std::vector<EvidenceEntry> entries;  // Table mode
  // Bound on the closure-mode candidate-formula universe.
  size_t universe_budget = 20000;
};

// Finite Fitting model. Worlds and domain members are named; domain members
// are witness-variable names (written @name inside formulas).
struct FittingModel {
  Logic logic = Logic::FOLPb;
  std::vector<std::string> worlds;
  std::set<std::pair<std::string, std::string>> rel;
  std::vector<std::string> domain;
  // (predicate, world) -> set of argument tuples (domain member names).
  std::map<std::pair<std::string, std::string>, std::set<std::vector<std::string>>> interp;
  EvidenceSpec evidence;
  ConstantSpecification cs = ConstantSpecification::schematic();
};

// Is w in E(t, phi)? Full mode: always. Table mode: entry lookup, where an
// entry on phi(x) covers every instance phi(a) over the domain. Closure mode:
// membership in the least relation containing the base and closed under the
// evidence conditions, decided by backward recursion on t.
bool evidence(const FittingModel& m, const TermPtr& t, const FormulaPtr& phi,
              const std::string& w);

// Truth at a world. phi must be closed (no free basic variable) and mention
// only domain witness variables. [t]{X} psi is true at w iff w is in
// E(t, psi) and every domain instantiation of psi holds at every R-successor.
bool eval(const FittingModel& m, const std::string& w, const FormulaPtr& phi);

// Truth of the universal closure at every world.
bool valid(const FittingModel& m, const FormulaPtr& phi);

struct AuditViolation {
  std::string condition;  // e.g. "R Closure", "strong evidence"
  std::string instance;   // reproducible witnessing instance
};

struct AuditOptions {
  // Skip the FOJT45 strong-evidence check (full mode cannot satisfy it in
  // non-degenerate models; the default audit reports that honestly).
  bool exempt_strong_evidence = false;
};

struct AuditReport {
  bool pass = true;
  std::string header;  // mode and scope of the checks performed
  std::vector<AuditViolation> violations;
};

// Check frame shape, interpretation arity, evidence conditions (table mode in
// table-closed form; closure mode holds by construction), the constant
// specification condition, and in FOJT45 the ? Condition and strong evidence.
AuditReport audit(const FittingModel& m, const AuditOptions& opts = {});

// Model files: sections LOGIC, WORLDS, REL, DOMAIN, INTERP, CS, EVIDENCE with
// entry lines `term | formula | world...` after EVIDENCE.
FittingModel parse_model(const std::string& text, const std::string& base_dir = "");
FittingModel load_model(const std::string& path);
std::string print_model(const FittingModel& m, const std::string& cs_path = "");

}  // namespace folp
