#include "folp/kernel.hpp"

#include <cstdint>
#include <unordered_map>

#include "folp/textio.hpp"

namespace folp {

Rule Rule::ax(SchemaId s) {
  Rule r;
  r.kind = Kind::Ax;
  r.schema = s;
  return r;
}
Rule Rule::cs(std::string constant) {
  Rule r;
  r.kind = Kind::Cs;
  r.constant = std::move(constant);
  return r;
}
Rule Rule::hyp(size_t k) {
  Rule r;
  r.kind = Kind::Hyp;
  r.k = k;
  return r;
}
Rule Rule::mp(size_t i, size_t j) {
  Rule r;
  r.kind = Kind::Mp;
  r.i = i;
  r.j = j;
  return r;
}
Rule Rule::gen(size_t i, const Var& x) {
  Rule r;
  r.kind = Kind::Gen;
  r.i = i;
  r.var = x;
  return r;
}
Rule Rule::taut(std::vector<size_t> cited) {
  Rule r;
  r.kind = Kind::Taut;
  r.cited = std::move(cited);
  return r;
}

std::string to_string(Rule::Kind k) {
  switch (k) {
    case Rule::Kind::Ax: return "AX";
    case Rule::Kind::Cs: return "CS";
    case Rule::Kind::Hyp: return "HYP";
    case Rule::Kind::Mp: return "MP";
    case Rule::Kind::Gen: return "GEN";
    case Rule::Kind::Taut: return "TAUT";
  }
  return "?";
}

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "None";
    case RejectReason::NoSteps: return "NoSteps";
    case RejectReason::NonEmptyHypotheses: return "NonEmptyHypotheses";
    case RejectReason::BadAxiomInstance: return "BadAxiomInstance";
    case RejectReason::BadCsEntry: return "BadCsEntry";
    case RejectReason::BadHypIndex: return "BadHypIndex";
    case RejectReason::BadStepRef: return "BadStepRef";
    case RejectReason::MpMismatch: return "MpMismatch";
    case RejectReason::GenOnHypFreeVar: return "GenOnHypFreeVar";
    case RejectReason::GenShapeMismatch: return "GenShapeMismatch";
    case RejectReason::TautTooManyAtoms: return "TautTooManyAtoms";
    case RejectReason::TautNotConsequence: return "TautNotConsequence";
    case RejectReason::TautDisallowed: return "TautDisallowed";
  }
  return "?";
}

namespace {

constexpr size_t kMaxTautAtoms = 16;

// Collect the opaque propositional atoms of f (quantified, justified and
// atomic subformulas; Bottom is the constant false).
void collect_atoms(const FormulaPtr& f, std::vector<std::string>& order,
                   std::unordered_map<std::string, size_t>& index) {
  switch (f->kind) {
    case Formula::Kind::Bottom:
      return;
    case Formula::Kind::Not:
      collect_atoms(f->l, order, index);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      collect_atoms(f->l, order, index);
      collect_atoms(f->r, order, index);
      return;
    default: {
      std::string key = print_formula(f);
      if (!index.count(key)) {
        index.emplace(key, order.size());
        order.push_back(key);
      }
      return;
    }
  }
}

bool eval_prop(const FormulaPtr& f, const std::unordered_map<std::string, size_t>& index,
               uint32_t valuation) {
  switch (f->kind) {
    case Formula::Kind::Bottom:
      return false;
    case Formula::Kind::Not:
      return !eval_prop(f->l, index, valuation);
    case Formula::Kind::And:
      return eval_prop(f->l, index, valuation) && eval_prop(f->r, index, valuation);
    case Formula::Kind::Or:
      return eval_prop(f->l, index, valuation) || eval_prop(f->r, index, valuation);
    case Formula::Kind::Implies:
      return !eval_prop(f->l, index, valuation) || eval_prop(f->r, index, valuation);
    case Formula::Kind::Iff:
      return eval_prop(f->l, index, valuation) == eval_prop(f->r, index, valuation);
    default:
      return (valuation >> index.at(print_formula(f))) & 1u;
  }
}

struct Failure {
  RejectReason reason;
  std::string message;
};

// Check one step; n is the 1-based index of the step being checked.
std::optional<Failure> check_step(const Derivation& d, size_t n, const CheckOptions& opts) {
  const Step& step = d.steps[n - 1];
  const FormulaPtr& phi = step.formula;
  const Rule& rule = step.rule;
  auto ref = [&](size_t i) { return i >= 1 && i < n; };
  switch (rule.kind) {
    case Rule::Kind::Ax: {
      if (!match_axiom(rule.schema, phi, d.logic))
        return Failure{RejectReason::BadAxiomInstance,
                       "formula is not an instance of " + to_string(rule.schema)};
      return std::nullopt;
    }
    case Rule::Kind::Cs: {
      if (phi->kind != Formula::Kind::Just || !phi->sub.empty() ||
          phi->term->kind != Term::Kind::JConst || phi->term->name != rule.constant)
        return Failure{RejectReason::BadCsEntry,
                       "CS step must have the form [" + rule.constant + "]{} psi"};
      try {
        if (!csv_contains(d.cs, rule.constant, phi->l, d.logic))
          return Failure{RejectReason::BadCsEntry,
                         "constant specification does not contain this entry"};
      } catch (const UnknownConstant& e) {
        return Failure{RejectReason::BadCsEntry, e.what()};
      }
      return std::nullopt;
    }
    case Rule::Kind::Hyp: {
      if (rule.k < 1 || rule.k > d.hypotheses.size())
        return Failure{RejectReason::BadHypIndex, "hypothesis index out of range"};
      if (!equal(phi, d.hypotheses[rule.k - 1]))
        return Failure{RejectReason::BadHypIndex,
                       "formula differs from hypothesis " + std::to_string(rule.k)};
      return std::nullopt;
    }
    case Rule::Kind::Mp: {
      if (!ref(rule.i) || !ref(rule.j))
        return Failure{RejectReason::BadStepRef, "MP must cite earlier steps"};
      const FormulaPtr& prem = d.steps[rule.i - 1].formula;
      const FormulaPtr& imp = d.steps[rule.j - 1].formula;
      if (imp->kind != Formula::Kind::Implies || !equal(imp->l, prem) || !equal(imp->r, phi))
        return Failure{RejectReason::MpMismatch,
                       "step " + std::to_string(rule.j) + " is not (step " +
                           std::to_string(rule.i) + " -> this step)"};
      return std::nullopt;
    }
    case Rule::Kind::Gen: {
      if (!ref(rule.i))
        return Failure{RejectReason::BadStepRef, "GEN must cite an earlier step"};
      if (rule.var.witness)
        return Failure{RejectReason::GenShapeMismatch,
                       "witness variables cannot be generalized"};
      if (phi->kind != Formula::Kind::Forall || phi->bound != rule.var ||
          !equal(phi->l, d.steps[rule.i - 1].formula))
        return Failure{RejectReason::GenShapeMismatch,
                       "formula is not forall " + rule.var.str() + " of step " +
                           std::to_string(rule.i)};
      for (const FormulaPtr& h : d.hypotheses)
        if (free_vars(h).count(rule.var))
          return Failure{RejectReason::GenOnHypFreeVar,
                         rule.var.str() + " occurs free in a hypothesis"};
      return std::nullopt;
    }
    case Rule::Kind::Taut: {
      if (!opts.allow_taut)
        return Failure{RejectReason::TautDisallowed, "TAUT rejected in strict mode"};
      for (size_t i : rule.cited)
        if (!ref(i)) return Failure{RejectReason::BadStepRef, "TAUT must cite earlier steps"};
      std::vector<std::string> order;
      std::unordered_map<std::string, size_t> index;
      collect_atoms(phi, order, index);
      for (size_t i : rule.cited) collect_atoms(d.steps[i - 1].formula, order, index);
      if (order.size() > kMaxTautAtoms)
        return Failure{RejectReason::TautTooManyAtoms,
                       std::to_string(order.size()) + " distinct atoms (max " +
                           std::to_string(kMaxTautAtoms) + ")"};
      uint64_t count = uint64_t{1} << order.size();
      for (uint64_t v = 0; v < count; ++v) {
        bool premises_hold = true;
        for (size_t i : rule.cited)
          if (!eval_prop(d.steps[i - 1].formula, index, static_cast<uint32_t>(v))) {
            premises_hold = false;
            break;
          }
        if (premises_hold && !eval_prop(phi, index, static_cast<uint32_t>(v)))
          return Failure{RejectReason::TautNotConsequence,
                         "not a tautological consequence of the cited steps"};
      }
      return std::nullopt;
    }
  }
  return Failure{RejectReason::BadStepRef, "unknown rule"};
}

}  // namespace

CheckReport check(const Derivation& d, const CheckOptions& opts) {
  CheckReport r;
  r.step_count = d.steps.size();
  if (d.steps.empty()) {
    r.reason = RejectReason::NoSteps;
    r.message = "derivation has no steps";
    return r;
  }
  for (size_t n = 1; n <= d.steps.size(); ++n) {
    if (auto fail = check_step(d, n, opts)) {
      r.failed_step = n;
      r.reason = fail->reason;
      r.message = fail->message;
      return r;
    }
    r.rules_used[d.steps[n - 1].rule.kind]++;
  }
  r.ok = true;
  return r;
}

CheckReport check_theorem(const Derivation& d, const CheckOptions& opts) {
  if (!d.hypotheses.empty()) {
    CheckReport r;
    r.step_count = d.steps.size();
    r.reason = RejectReason::NonEmptyHypotheses;
    r.message = "theorem check requires an empty hypothesis list";
    return r;
  }
  return check(d, opts);
}

}  // namespace folp
