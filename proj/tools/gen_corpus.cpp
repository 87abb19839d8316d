// Regenerates the golden derivation corpus and its mutation suite.
//
// Usage: gen_corpus <corpus-dir>
//
// Golden files: the two converse-Barcan/Buridan derivations, the 21-step
// explicit-Barcan encoding for FOJT45 with its two classical lemmas and the
// internalization lemma discharging its hypothesis, plus the fully synthesized
// explicit-Barcan theorem. Mutants: for each golden file, single-step edits
// (swapped rule arguments, altered subscript sets, renamed variable
// occurrences, changed schema ids, changed constants); candidates that remain
// kernel-valid are discarded, and at least 50 kernel-rejected mutants per
// golden file are emitted.
#include <filesystem>
#include <iostream>

#include "folp/files.hpp"
#include "folp/transform.hpp"

using namespace folp;

namespace {

// ---------------------------------------------------------------------------
// Formula-rewriting helpers driven by a preorder occurrence counter. `target`
// counts down; the edit applies when it reaches zero.

FormulaPtr edit_subscript(const FormulaPtr& f, int& target, bool add) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom: return f;
    case Formula::Kind::Not: return fnot(edit_subscript(f->l, target, add));
    case Formula::Kind::And:
      return fand(edit_subscript(f->l, target, add), edit_subscript(f->r, target, add));
    case Formula::Kind::Or:
      return forr(edit_subscript(f->l, target, add), edit_subscript(f->r, target, add));
    case Formula::Kind::Implies:
      return implies(edit_subscript(f->l, target, add),
                     edit_subscript(f->r, target, add));
    case Formula::Kind::Iff:
      return iff(edit_subscript(f->l, target, add), edit_subscript(f->r, target, add));
    case Formula::Kind::Forall:
      return forall(f->bound, edit_subscript(f->l, target, add));
    case Formula::Kind::Exists:
      return exists(f->bound, edit_subscript(f->l, target, add));
    case Formula::Kind::Just: {
      VarSet sub = f->sub;
      bool here = target-- == 0;
      if (here) {
        if (add)
          sub.insert(Var{"zz", false});
        else if (!sub.empty())
          sub.erase(sub.begin());
      }
      return just(f->term, sub, edit_subscript(f->l, target, add));
    }
  }
  return f;
}

size_t count_justs(const FormulaPtr& f) {
  size_t n = f->kind == Formula::Kind::Just ? 1 : 0;
  if (f->l) n += count_justs(f->l);
  if (f->r) n += count_justs(f->r);
  return n;
}

// Rename the target-th variable occurrence (atom arguments, quantifier
// binders, subscript members) to zz.
FormulaPtr rename_occurrence(const FormulaPtr& f, int& target) {
  const Var zz{"zz", false};
  switch (f->kind) {
    case Formula::Kind::Atom: {
      std::vector<Var> args = f->args;
      for (Var& v : args)
        if (target-- == 0) v = zz;
      return atom(f->pred, args);
    }
    case Formula::Kind::Bottom: return f;
    case Formula::Kind::Not: return fnot(rename_occurrence(f->l, target));
    case Formula::Kind::And:
      return fand(rename_occurrence(f->l, target), rename_occurrence(f->r, target));
    case Formula::Kind::Or:
      return forr(rename_occurrence(f->l, target), rename_occurrence(f->r, target));
    case Formula::Kind::Implies:
      return implies(rename_occurrence(f->l, target), rename_occurrence(f->r, target));
    case Formula::Kind::Iff:
      return iff(rename_occurrence(f->l, target), rename_occurrence(f->r, target));
    case Formula::Kind::Forall: {
      Var b = f->bound;
      if (target-- == 0) b = zz;
      return forall(b, rename_occurrence(f->l, target));
    }
    case Formula::Kind::Exists: {
      Var b = f->bound;
      if (target-- == 0) b = zz;
      return exists(b, rename_occurrence(f->l, target));
    }
    case Formula::Kind::Just: {
      VarSet sub;
      for (const Var& v : f->sub) sub.insert(target-- == 0 ? zz : v);
      return just(f->term, sub, rename_occurrence(f->l, target));
    }
  }
  return f;
}

size_t count_occurrences(const FormulaPtr& f) {
  size_t n = 0;
  if (f->kind == Formula::Kind::Atom) n += f->args.size();
  if (f->kind == Formula::Kind::Forall || f->kind == Formula::Kind::Exists) n += 1;
  if (f->kind == Formula::Kind::Just) n += f->sub.size();
  if (f->l) n += count_occurrences(f->l);
  if (f->r) n += count_occurrences(f->r);
  return n;
}

// ---------------------------------------------------------------------------

std::vector<Derivation> mutants_of(const Derivation& d, Logic logic) {
  std::vector<Derivation> out;
  auto with_step = [&](size_t idx, Step s) {
    Derivation m = d;
    m.steps[idx] = std::move(s);
    out.push_back(std::move(m));
  };
  for (size_t i = 0; i < d.steps.size(); ++i) {
    const Step& s = d.steps[i];
    // Rule-argument swaps and schema/constant changes.
    switch (s.rule.kind) {
      case Rule::Kind::Mp: {
        Step m = s;
        std::swap(m.rule.i, m.rule.j);
        with_step(i, m);
        if (s.rule.i > 1) {
          Step m2 = s;
          m2.rule.i -= 1;
          with_step(i, m2);
        }
        break;
      }
      case Rule::Kind::Ax: {
        size_t emitted = 0;
        for (SchemaId alt : all_schemas()) {
          if (alt == s.rule.schema || !schema_in_logic(alt, logic)) continue;
          Step m = s;
          m.rule.schema = alt;
          with_step(i, m);
          if (++emitted == 2) break;
        }
        break;
      }
      case Rule::Kind::Cs: {
        Step m = s;
        m.rule.constant = s.rule.constant == "c_K" ? "c_S" : "c_K";
        with_step(i, m);
        break;
      }
      case Rule::Kind::Gen: {
        Step m = s;
        m.rule.var = Var{"zz", false};
        with_step(i, m);
        break;
      }
      case Rule::Kind::Taut: {
        if (!s.rule.cited.empty() && s.rule.cited[0] > 1) {
          Step m = s;
          m.rule.cited[0] -= 1;
          with_step(i, m);
        }
        break;
      }
      default: break;
    }
    // Subscript alterations: one per Just node, add and remove.
    size_t justs = count_justs(s.formula);
    for (size_t j = 0; j < justs; ++j) {
      for (bool add : {true, false}) {
        int target = static_cast<int>(j);
        Step m = s;
        m.formula = edit_subscript(s.formula, target, add);
        if (!equal(m.formula, s.formula)) with_step(i, m);
      }
    }
    // Single-occurrence variable renamings.
    size_t occs = count_occurrences(s.formula);
    for (size_t j = 0; j < occs; ++j) {
      int target = static_cast<int>(j);
      Step m = s;
      m.formula = rename_occurrence(s.formula, target);
      if (!equal(m.formula, s.formula)) with_step(i, m);
    }
  }
  return out;
}

void write_golden(const std::filesystem::path& dir, const std::string& name,
                  const Derivation& d, bool theorem = true) {
  CheckReport r = theorem ? check_theorem(d) : check(d);
  if (!r.ok) {
    std::cerr << name << ": golden derivation rejected at step " << r.failed_step << ": "
              << r.message << "\n";
    std::exit(1);
  }
  write_file((dir / name).string(), print_derivation(d));
  std::cout << name << ": " << d.steps.size() << " steps, conclusion "
            << print_formula(d.conclusion()) << "\n";
}

void write_mutants(const std::filesystem::path& dir, const std::string& base,
                   const Derivation& d, Logic logic) {
  std::filesystem::create_directories(dir / "mutants");
  size_t n = 0;
  for (const Derivation& m : mutants_of(d, logic)) {
    // Keep only mutants the kernel rejects; still-valid edits (e.g. a renamed
    // occurrence that yields another axiom instance) are not counterexamples.
    CheckReport r = check(m);
    if (r.ok) continue;
    std::string text = print_derivation(m);
    Derivation reparsed = parse_derivation(text);  // sanity: mutants stay well-formed
    if (check(reparsed).ok) continue;
    char num[16];
    std::snprintf(num, sizeof num, "_m%02zu.jd", ++n);
    write_file((dir / "mutants" / (base + num)).string(), text);
  }
  std::cout << base << ": " << n << " mutants\n";
  if (n < 50) {
    std::cerr << base << ": fewer than 50 rejected mutants\n";
    std::exit(1);
  }
}

FormulaPtr pf(const std::string& s) { return parse_formula(s); }

// Converse Buridan, 10 steps, X = {}, t = p0, phi = P(y).
Derivation build_cburidan() {
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic());
  size_t s1 = b.ax(SchemaId::A1_EI, pf("(P(y) -> exists y. P(y))"));
  size_t s2 = b.cs_step("c_EI", b.formula(s1));
  size_t s3 = b.ax(SchemaId::A3,
                   pf("([c_EI]{} (P(y) -> exists y. P(y)) -> "
                      "[c_EI]{y} (P(y) -> exists y. P(y)))"));
  size_t s4 = b.ax(SchemaId::B2,
                   pf("([c_EI]{y} (P(y) -> exists y. P(y)) -> "
                      "([p0]{y} P(y) -> [(c_EI . p0)]{y} exists y. P(y)))"));
  size_t s5 = b.taut(pf("([p0]{y} P(y) -> [(c_EI . p0)]{y} exists y. P(y))"),
                     {s2, s3, s4});
  size_t s6 = b.ax(SchemaId::A2,
                   pf("([(c_EI . p0)]{y} exists y. P(y) -> "
                      "[(c_EI . p0)]{} exists y. P(y))"));
  size_t s7 = b.taut(pf("([p0]{y} P(y) -> [(c_EI . p0)]{} exists y. P(y))"), {s5, s6});
  size_t s8 = b.gen_step(s7, Var{"y", false});
  size_t s9 = b.ax(SchemaId::A1_ED,
                   pf("(forall y. ([p0]{y} P(y) -> [(c_EI . p0)]{} exists y. P(y)) -> "
                      "(exists y. [p0]{y} P(y) -> [(c_EI . p0)]{} exists y. P(y)))"));
  b.mp(s8, s9);
  return b.derivation();
}

// The explicit-Barcan encoding for FOJT45, 21 steps, X = {}, t = p0,
// phi = P(y). The internalized premise [r]{}(G -> forall y. P(y)) is taken as
// the single hypothesis; the internalization lemma file provides a concrete
// term in its place.
Derivation build_jt45_barcan() {
  std::string A = "[p0]{y} P(y)";
  std::string F = "forall y. " + A;
  std::string m = "((c_CP . c_UI) . ?p0)";
  std::string G = "~[" + m + "]{} ~" + F;
  FormulaPtr hyp = pf("[r]{} (" + G + " -> forall y. P(y))");
  DerivationBuilder b(Logic::FOJT45, ConstantSpecification::schematic(), {hyp});
  size_t s1 = b.ax(SchemaId::A1_UI, pf("(" + F + " -> " + A + ")"));
  size_t s2 = b.cs_step("c_UI", b.formula(s1));
  size_t s3 = b.ax(SchemaId::A3, pf("([c_UI]{} (" + F + " -> " + A + ") -> "
                                    "[c_UI]{y} (" + F + " -> " + A + "))"));
  size_t s4 = b.ax(SchemaId::A1_CP,
                   pf("((" + F + " -> " + A + ") -> (~" + A + " -> ~" + F + "))"));
  size_t s5 = b.cs_step("c_CP", b.formula(s4));
  std::string four = print_formula(b.formula(s4));
  size_t s6 = b.ax(SchemaId::A3,
                   pf("([c_CP]{} " + four + " -> [c_CP]{y} " + four + ")"));
  size_t s7 = b.ax(SchemaId::B2,
                   pf("([c_CP]{y} " + four + " -> ([c_UI]{y} (" + F + " -> " + A +
                      ") -> [(c_CP . c_UI)]{y} (~" + A + " -> ~" + F + ")))"));
  size_t s8 = b.taut(pf("[(c_CP . c_UI)]{y} (~" + A + " -> ~" + F + ")"),
                     {s2, s3, s5, s6, s7});
  size_t s9 = b.ax(SchemaId::B2,
                   pf("([(c_CP . c_UI)]{y} (~" + A + " -> ~" + F + ") -> "
                      "([?p0]{y} ~" + A + " -> [" + m + "]{y} ~" + F + "))"));
  size_t s10 = b.ax(SchemaId::B6, pf("(~" + A + " -> [?p0]{y} ~" + A + ")"));
  size_t s11 = b.ax(SchemaId::A2,
                    pf("([" + m + "]{y} ~" + F + " -> [" + m + "]{} ~" + F + ")"));
  size_t s12 = b.ax(SchemaId::B1, pf("(" + A + " -> P(y))"));
  size_t s13 = b.taut(pf("(" + G + " -> P(y))"), {s8, s9, s10, s11, s12});
  size_t s14 = b.gen_step(s13, Var{"y", false});
  b.ax(SchemaId::A1_UD, implies(b.formula(s14),
                                pf("(" + G + " -> forall y. P(y))")));
  size_t s16 = b.ax(SchemaId::B1, pf("([" + m + "]{} ~" + F + " -> ~" + F + ")"));
  size_t s17 = b.hyp(1);
  size_t s18 = b.ax(SchemaId::B2,
                    pf("([r]{} (" + G + " -> forall y. P(y)) -> ([?" + m + "]{} " + G +
                       " -> [(r . ?" + m + ")]{} forall y. P(y)))"));
  size_t s19 = b.mp(s17, s18);
  size_t s20 = b.ax(SchemaId::B6, pf("(" + G + " -> [?" + m + "]{} " + G + ")"));
  b.taut(pf("(" + F + " -> [(r . ?" + m + ")]{} forall y. P(y))"), {s16, s19, s20});
  return b.derivation();
}

// The two classically-cited lemmas of the explicit-Barcan proof, as
// standalone theorems.
Derivation build_lemma_neg_intro() {
  DerivationBuilder b(Logic::FOJT45, ConstantSpecification::schematic());
  size_t s1 = b.ax(SchemaId::B6, pf("(~[p0]{y} P(y) -> [?p0]{y} ~[p0]{y} P(y))"));
  size_t s2 = b.ax(SchemaId::B1, pf("([p0]{y} P(y) -> P(y))"));
  b.taut(pf("(~[?p0]{y} ~[p0]{y} P(y) -> P(y))"), {s1, s2});
  return b.derivation();
}

Derivation build_lemma_pos_query() {
  std::string F = "forall y. [p0]{y} P(y)";
  std::string m = "((c_CP . c_UI) . ?p0)";
  std::string G = "~[" + m + "]{} ~" + F;
  DerivationBuilder b(Logic::FOJT45, ConstantSpecification::schematic());
  size_t s1 = b.ax(SchemaId::B1, pf("([" + m + "]{} ~" + F + " -> ~" + F + ")"));
  size_t s2 = b.ax(SchemaId::B6, pf("(" + G + " -> [?" + m + "]{} " + G + ")"));
  b.taut(pf("(" + F + " -> [?" + m + "]{} " + G + ")"), {s1, s2});
  return b.derivation();
}

// A concrete justified form of the hypothesis of the 21-step file:
// internalize a hypothesis-free derivation of G -> forall y. P(y).
Derivation build_lemma_internalization(TermPtr* term_out) {
  // A modus-ponens-only derivation of G -> forall y. P(y) (internalization
  // of Taut steps is exponential, so the classical chaining is done with the
  // builder's Hilbert combinators instead).
  std::string A = "[p0]{y} P(y)";
  std::string F = "forall y. " + A;
  std::string m = "((c_CP . c_UI) . ?p0)";
  std::string G = "~[" + m + "]{} ~" + F;
  DerivationBuilder b(Logic::FOJT45, ConstantSpecification::schematic());
  size_t ui = b.ax(SchemaId::A1_UI, pf("(" + F + " -> " + A + ")"));
  size_t cui = b.cs_step("c_UI", b.formula(ui));
  size_t a3a = b.ax(SchemaId::A3, implies(b.formula(cui),
                                          pf("[c_UI]{y} (" + F + " -> " + A + ")")));
  size_t cui_y = b.mp(cui, a3a);
  size_t cp = b.ax(SchemaId::A1_CP,
                   pf("((" + F + " -> " + A + ") -> (~" + A + " -> ~" + F + "))"));
  size_t ccp = b.cs_step("c_CP", b.formula(cp));
  size_t a3b = b.ax(SchemaId::A3,
                    implies(b.formula(ccp),
                            just(parse_term("c_CP"), {Var{"y", false}}, b.formula(cp))));
  size_t ccp_y = b.mp(ccp, a3b);
  size_t b2a = b.ax(SchemaId::B2,
                    implies(b.formula(ccp_y),
                            implies(b.formula(cui_y),
                                    pf("[(c_CP . c_UI)]{y} (~" + A + " -> ~" + F + ")"))));
  size_t boxed_cp = b.mp(cui_y, b.mp(ccp_y, b2a));
  size_t b2b = b.ax(SchemaId::B2,
                    implies(b.formula(boxed_cp),
                            pf("([?p0]{y} ~" + A + " -> [" + m + "]{y} ~" + F + ")")));
  size_t step_up = b.mp(boxed_cp, b2b);  // [?p0]{y}~A -> [m]{y}~F
  size_t b6 = b.ax(SchemaId::B6, pf("(~" + A + " -> [?p0]{y} ~" + A + ")"));
  size_t a2 = b.ax(SchemaId::A2,
                   pf("([" + m + "]{y} ~" + F + " -> [" + m + "]{} ~" + F + ")"));
  size_t chain = b.syll(b.syll(b6, step_up), a2);  // ~A -> [m]{}~F
  size_t contra = b.contrapose(chain);             // G -> ~~A
  size_t g_a = b.syll(contra, b.dne(pf(A)));       // G -> A
  size_t b1 = b.ax(SchemaId::B1, pf("(" + A + " -> P(y))"));
  size_t g_p = b.syll(g_a, b1);                    // G -> P(y)
  size_t allp = b.gen_step(g_p, Var{"y", false});
  size_t ud = b.ax(SchemaId::A1_UD,
                   implies(b.formula(allp), pf("(" + G + " -> forall y. P(y))")));
  b.mp(allp, ud);
  Synthesized s = internalize(b.derivation());
  if (term_out) *term_out = s.term;
  return s.derivation;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_corpus <corpus-dir>\n";
    return 2;
  }
  std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  Synthesized cb = converse_barcan(jvar("p0"), {}, Var{"y", false}, pf("P(y)"));
  write_golden(dir, "thm2_3_cbarcan.jd", cb.derivation);
  write_mutants(dir, "thm2_3_cbarcan", cb.derivation, Logic::FOLPb);

  Derivation cbu = build_cburidan();
  write_golden(dir, "thm2_3_cburidan.jd", cbu);
  write_mutants(dir, "thm2_3_cburidan", cbu, Logic::FOLPb);

  Derivation jt = build_jt45_barcan();
  write_golden(dir, "jt45_barcan.jd", jt, /*theorem=*/false);
  write_mutants(dir, "jt45_barcan", jt, Logic::FOJT45);

  write_golden(dir, "jt45_lemma_neg_intro.jd", build_lemma_neg_intro());
  write_golden(dir, "jt45_lemma_pos_query.jd", build_lemma_pos_query());
  write_golden(dir, "jt45_lemma_internalization.jd", build_lemma_internalization(nullptr));

  Synthesized full = jt45_barcan(jvar("p0"), {}, Var{"y", false}, pf("P(y)"));
  write_golden(dir, "jt45_barcan_full.jd", full.derivation);
  return 0;
}
