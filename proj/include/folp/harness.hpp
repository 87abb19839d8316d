// Random generators and property drivers: model and axiom-instance
// generation, soundness fuzzing with deliberate-fault canaries, and the
// brute-force instantiation-set oracle.
#pragma once

#include <random>

#include "folp/semantics.hpp"
#include "folp/templates.hpp"

namespace folp {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deliberate-fault modes for canary self-tests: each one must make
// run_soundness report violations quickly.
enum class FaultMode {
  None,
  // FOLPb: skip the transitive closure of R (breaks positive-introspection
  // instances).
  NonTransitiveR,
  // FOJT45: skip the symmetric closure of R (breaks negative-introspection
  // instances).
  NonSymmetricR,
  // Table evidence built without propagating entries along R (breaks the
  // evidence half of positive introspection).
  DropEvidenceRFold,
};

struct GenConfig {
  uint64_t seed = 0;
  size_t max_worlds = 4;
  size_t max_domain = 3;
  size_t max_term_depth = 2;
  size_t max_formula_depth = 4;
  size_t trials = 500;
  Logic logic = Logic::FOLPb;
  FaultMode fault = FaultMode::None;
};

using Rng = std::mt19937_64;

// Per-trial deterministic stream: identical (seed, index) gives an identical
// generator state.
Rng trial_rng(const GenConfig& cfg, size_t trial);

TermPtr gen_term(Rng& rng, const GenConfig& cfg, size_t depth);
// A D-formula over the canonical signature (P/1, Q/0, R/2) with witness
// variables drawn from the first `domain_size` canonical domain names.
FormulaPtr gen_formula(Rng& rng, const GenConfig& cfg, size_t depth, size_t domain_size);

// A random audited model. R is closed under the frame properties of the
// logic, evidence mode is sampled (FOLPb: full or closure; FOJT45: full, the
// strong-evidence check being exempted), and the audit is asserted unless a
// fault mode is active.
FittingModel gen_model(Rng& rng, const GenConfig& cfg);

// A random instance of the schema; match_axiom is asserted. domain_size
// bounds the witness names used (0 means cfg.max_domain).
FormulaPtr gen_axiom_instance(Rng& rng, const GenConfig& cfg, SchemaId schema,
                              size_t domain_size = 0);

struct SoundnessReport {
  size_t trials = 0;
  size_t violations = 0;
  // First counterexample, serialized for replay: model file text followed by
  // a `formula <f>` line. Empty when no violation occurred.
  std::string counterexample;
};

// For each trial: generate an audited model and a theorem (an axiom instance
// or the conclusion of a transformer-built derivation) and check validity.
SoundnessReport run_soundness(const GenConfig& cfg);

// Exhaustive enumeration of the instantiation set of F over phis, with
// justification terms drawn from a fixed 3-symbol alphabet up to the given
// depth. Throws BudgetExceeded if the set would exceed `budget` members.
std::vector<FormulaPtr> brute_member(const TemplatePtr& f,
                                     const std::vector<FormulaPtr>& phis,
                                     size_t term_depth, size_t budget = 200000);

}  // namespace folp
