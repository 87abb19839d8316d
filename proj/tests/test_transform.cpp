#include <doctest.h>

#include "folp/textio.hpp"
#include "folp/transform.hpp"

using namespace folp;

namespace {

FormulaPtr pf(const std::string& s) { return parse_formula(s); }

Derivation checked(const Derivation& d) {
  CheckReport r = check(d);
  INFO(r.message << " at step " << r.failed_step);
  CHECK(r.ok);
  return d;
}

}  // namespace

TEST_CASE("builder combinators produce kernel-accepted theorems") {
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic());
  FormulaPtr a = pf("P(x)");
  size_t id = b.prove_id(a);
  CHECK(equal(b.formula(id), pf("(P(x) -> P(x))")));
  size_t nb = b.not_bot();
  CHECK(equal(b.formula(nb), pf("~false")));
  size_t d1 = b.dne(a);
  CHECK(equal(b.formula(d1), pf("(~~P(x) -> P(x))")));
  size_t d2 = b.dni(a);
  CHECK(equal(b.formula(d2), pf("(P(x) -> ~~P(x))")));
  size_t em = b.excluded_middle(a);
  CHECK(equal(b.formula(em), pf("(P(x) | ~P(x))")));
  checked(b.take(em));
}

TEST_CASE("builder syllogism and contraposition") {
  std::vector<FormulaPtr> hyps{pf("(P -> Q)"), pf("(Q -> R)")};
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic(), hyps);
  size_t s = b.syll(b.hyp(1), b.hyp(2));
  CHECK(equal(b.formula(s), pf("(P -> R)")));
  size_t c = b.contrapose(s);
  CHECK(equal(b.formula(c), pf("(~R -> ~P)")));
  checked(b.take(c));
}

TEST_CASE("builder deduplicates identical formulas") {
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic());
  size_t i1 = b.prove_id(pf("Q"));
  size_t n = b.size();
  size_t i2 = b.prove_id(pf("Q"));
  CHECK(i1 == i2);
  CHECK(b.size() == n);
}

TEST_CASE("a3_lift and retarget move subscripts") {
  std::vector<FormulaPtr> hyps{pf("[p0]{x,y} P(x,y)")};
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic(), hyps);
  Var x{"x", false}, y{"y", false}, z{"z", false};
  size_t i = b.a3_lift(b.hyp(1), VarSet{x, y, z});
  CHECK(equal(b.formula(i), pf("[p0]{x,y,z} P(x,y)")));
  size_t j = b.retarget(i, VarSet{x, y});
  CHECK(equal(b.formula(j), pf("[p0]{x,y} P(x,y)")));
  checked(b.take(j));
  // Dropping a subscript variable free in the body is refused.
  DerivationBuilder b2(Logic::FOLPb, ConstantSpecification::schematic(), hyps);
  CHECK_THROWS_AS(b2.retarget(b2.hyp(1), VarSet{x}), PreconditionViolation);
}

TEST_CASE("deduction discharges a hypothesis") {
  Derivation d = checked([] {
    std::vector<FormulaPtr> hyps{pf("P"), pf("(P -> Q)"), pf("(Q -> R)")};
    DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic(), hyps);
    size_t q = b.mp(b.hyp(1), b.hyp(2));
    return b.take(b.mp(q, b.hyp(3)));
  }());
  Derivation dd = deduction(d, 1);
  CHECK(dd.hypotheses.size() == 2);
  CHECK(equal(dd.conclusion(), pf("(P -> R)")));
  checked(dd);
  // Discharge the rest too.
  Derivation d2 = deduction(deduction(dd, 2), 1);
  CHECK(d2.hypotheses.empty());
  CHECK(equal(d2.conclusion(), pf("((P -> Q) -> ((Q -> R) -> (P -> R)))")));
  checked(d2);
  CHECK(check_theorem(d2).ok);
  CHECK_THROWS_AS(deduction(d, 7), HypNotFound);
}

TEST_CASE("deduction handles GEN and TAUT steps") {
  std::vector<FormulaPtr> hyps{pf("Q")};
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic(), hyps);
  size_t h = b.hyp(1);
  size_t a = b.ax(SchemaId::A1_K, pf("(P(x) -> (Q -> P(x)))"));
  Var x{"x", false};
  size_t g = b.gen_step(a, x);
  size_t t = b.taut(pf("(Q & forall x. (P(x) -> (Q -> P(x))))"), {h, g});
  Derivation d = checked(b.take(t));
  Derivation dd = deduction(d, 1);  // x is not free in Q, so GEN translates
  CHECK(equal(dd.conclusion(), pf("(Q -> (Q & forall x. (P(x) -> (Q -> P(x)))))")));
  checked(dd);
}

TEST_CASE("deduction rejects unchecked input") {
  Derivation bogus;
  bogus.hypotheses = {pf("P")};
  bogus.steps.push_back({pf("Q"), Rule::hyp(1)});
  CHECK_THROWS_AS(deduction(bogus, 1), NotAccepted);
}

TEST_CASE("prove_tautology covers each connective") {
  auto cs = ConstantSpecification::schematic();
  for (const char* s : {
           "(P -> P)",
           "(P | ~P)",
           "((P -> Q) -> ((Q -> R) -> (P -> R)))",
           "((P & Q) -> (Q & P))",
           "((P | Q) -> (Q | P))",
           "((P <-> Q) -> (Q <-> P))",
           "(~(P | Q) -> (~P & ~Q))",
           "((~P & ~Q) -> ~(P | Q))",
           "(false -> P)",
           "~(P & ~P)",
           "(((P -> Q) -> P) -> P)",
           "((P <-> ~P) -> false)",
           "(forall x. P(x) -> ([p0]{} Q | forall x. P(x)))",
       }) {
    CAPTURE(s);
    Derivation d = prove_tautology(Logic::FOLPb, cs, pf(s));
    CHECK(equal(d.conclusion(), pf(s)));
    CheckReport r = check_theorem(d, {.allow_taut = false});
    INFO(r.message << " at step " << r.failed_step << " for " << s);
    CHECK(r.ok);
    for (const Step& st : d.steps)
      CHECK((st.rule.kind == Rule::Kind::Ax || st.rule.kind == Rule::Kind::Mp));
  }
}

TEST_CASE("prove_sequent uses hypotheses") {
  auto cs = ConstantSpecification::schematic();
  Derivation d = prove_sequent(Logic::FOLPb, cs,
                               {pf("(P | Q)"), pf("~P")}, pf("Q"));
  CHECK(equal(d.conclusion(), pf("Q")));
  checked(d);
  for (const Step& st : d.steps)
    CHECK((st.rule.kind == Rule::Kind::Ax || st.rule.kind == Rule::Kind::Hyp ||
           st.rule.kind == Rule::Kind::Mp));
  CHECK_THROWS_AS(prove_sequent(Logic::FOLPb, cs, {pf("P")}, pf("Q")), NotATautology);
}

TEST_CASE("prove_tautology rejects non-tautologies and huge splits") {
  auto cs = ConstantSpecification::schematic();
  CHECK_THROWS_AS(prove_tautology(Logic::FOLPb, cs, pf("(P | Q)")), NotATautology);
  FormulaPtr big = pf("A0");
  for (int i = 1; i < 12; ++i)
    big = fand(big, pf("A" + std::to_string(i)));
  CHECK_THROWS_AS(prove_tautology(Logic::FOLPb, cs, forr(big, fnot(big))),
                  TautExpansionOverflow);
}

TEST_CASE("internalize unions the hypothesis subscripts") {
  std::vector<FormulaPtr> hyps{pf("[p0]{x} P(x)"), pf("[p1]{y} (P(x) -> Q(y))")};
  Derivation just_d;
  just_d.logic = Logic::FOLPb;
  just_d.hypotheses = hyps;
  just_d.steps.push_back({hyps[0], Rule::hyp(1)});
  just_d.steps.push_back({hyps[1], Rule::hyp(2)});
  just_d.steps.push_back({fand(hyps[0], hyps[1]), Rule::taut({1, 2})});
  checked(just_d);
  Synthesized s = internalize(just_d);
  checked(s.derivation);
  const FormulaPtr& c = s.derivation.conclusion();
  REQUIRE(c->kind == Formula::Kind::Just);
  CHECK(equal(c->term, s.term));
  CHECK(c->sub == VarSet{Var{"x", false}, Var{"y", false}});
  CHECK(equal(c->l, fand(hyps[0], hyps[1])));
}

TEST_CASE("internalize a closed derivation with GEN") {
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic());
  size_t i = b.ax(SchemaId::A1_K, pf("(P(x) -> (Q -> P(x)))"));
  size_t g = b.gen_step(i, Var{"x", false});
  Derivation d = checked(b.take(g));
  Synthesized s = internalize(d);
  checked(s.derivation);
  const FormulaPtr& c = s.derivation.conclusion();
  REQUIRE(c->kind == Formula::Kind::Just);
  CHECK(c->sub.empty());
  CHECK(equal(c->l, pf("forall x. (P(x) -> (Q -> P(x)))")));
  CHECK(c->term->kind == Term::Kind::Gen);
}

TEST_CASE("internalize preconditions") {
  Derivation d;
  d.logic = Logic::FOLPb;
  d.hypotheses = {pf("P")};  // not a justification assertion
  d.steps.push_back({pf("P"), Rule::hyp(1)});
  CHECK_THROWS_AS(internalize(d), HypShapeError);
  Derivation e;
  e.logic = Logic::FOLPb;
  e.cs = ConstantSpecification::explicit_list({});
  e.steps.push_back({pf("(P -> (Q -> P))"), Rule::ax(SchemaId::A1_K)});
  CHECK_THROWS_AS(internalize(e), CsNotSchematic);
  Derivation f;
  f.logic = Logic::FOLPb;
  f.steps.push_back({pf("P"), Rule::hyp(1)});
  CHECK_THROWS_AS(internalize(f), NotAccepted);
}

TEST_CASE("internalization expands TAUT steps") {
  std::vector<FormulaPtr> hyps{pf("[p0]{} P"), pf("[p1]{} Q")};
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic(), hyps);
  size_t t = b.taut(pf("(([p0]{} P & [p1]{} Q) | R)"), {b.hyp(1), b.hyp(2)});
  Derivation d = checked(b.take(t));
  Synthesized s = internalize(d);
  checked(s.derivation);
  CHECK(equal(s.derivation.conclusion()->l, d.conclusion()));
  for (const Step& st : s.derivation.steps)
    CHECK(st.rule.kind != Rule::Kind::Taut);
}

TEST_CASE("witness replacement and generalization") {
  Var a{"a", true}, y{"y", false};
  std::vector<FormulaPtr> hyps;
  DerivationBuilder b(Logic::FOLPb, ConstantSpecification::schematic());
  size_t i = b.ax(SchemaId::A1_K, pf("(P(@a) -> (Q -> P(@a)))"));
  Derivation d = checked(b.take(i));
  Derivation r = replace_witness(d, a, y);
  checked(r);
  CHECK(equal(r.conclusion(), pf("(P(y) -> (Q -> P(y)))")));
  Derivation g = generalize_witness(d, a, y);
  checked(g);
  CHECK(equal(g.conclusion(), pf("forall y. (P(y) -> (Q -> P(y)))")));
  // Freshness and class checks.
  CHECK_THROWS_AS(replace_witness(d, a, Var{"a", true}), PreconditionViolation);
  CHECK_THROWS_AS(replace_witness(d, y, y), PreconditionViolation);
  DerivationBuilder b2(Logic::FOLPb, ConstantSpecification::schematic());
  Derivation d2 = b2.take(b2.ax(SchemaId::A1_K, pf("(P(@a,y) -> (Q -> P(@a,y)))")));
  CHECK_THROWS_AS(replace_witness(d2, a, y), VarNotFresh);
}

TEST_CASE("converse Barcan synthesizer") {
  Var y{"y", false};
  Synthesized s = converse_barcan(jvar("p0"), {}, y, pf("P(y)"));
  CHECK(s.derivation.steps.size() == 9);
  CHECK(check_theorem(s.derivation).ok);
  CHECK(equal(s.derivation.conclusion(),
              pf("([p0]{} forall y. P(y) -> forall y. [(c_UI . p0)]{y} P(y))")));
  CHECK(equal(s.term, parse_term("(c_UI . p0)")));
  // Non-empty subscript set.
  Var x{"x", false};
  Synthesized s2 = converse_barcan(jvar("p0"), {x}, y, pf("P(x,y)"));
  CHECK(check_theorem(s2.derivation).ok);
  CHECK(equal(s2.derivation.conclusion(),
              pf("([p0]{x} forall y. P(x,y) -> forall y. [(c_UI . p0)]{x,y} P(x,y))")));
  CHECK_THROWS_AS(converse_barcan(jvar("p0"), {y}, y, pf("P(y)")),
                  PreconditionViolation);
}

TEST_CASE("converse Buridan synthesizer") {
  Var y{"y", false};
  Synthesized s = converse_buridan(jvar("p0"), {}, y, pf("P(y)"));
  CHECK(check_theorem(s.derivation).ok);
  CHECK(equal(s.derivation.conclusion(),
              implies(pf("exists y. [p0]{y} P(y)"),
                      just(s.term, {}, pf("exists y. P(y)")))));
  Var x{"x", false};
  Synthesized s2 = converse_buridan(jvar("p0"), {x}, y, pf("P(x,y)"));
  CHECK(check_theorem(s2.derivation).ok);
  CHECK(equal(s2.derivation.conclusion(),
              implies(pf("exists y. [p0]{x,y} P(x,y)"),
                      just(s2.term, {Var{"x", false}}, pf("exists y. P(x,y)")))));
}

TEST_CASE("explicit Barcan synthesizer for FOJT45") {
  Var y{"y", false};
  Synthesized s = jt45_barcan(jvar("p0"), {}, y, pf("P(y)"));
  CHECK(check_theorem(s.derivation).ok);
  CHECK(equal(s.derivation.conclusion(),
              implies(pf("forall y. [p0]{y} P(y)"),
                      just(s.term, {}, pf("forall y. P(y)")))));
  Var x{"x", false};
  Synthesized s2 = jt45_barcan(jvar("p0"), {x}, y, pf("P(x,y)"));
  CHECK(check_theorem(s2.derivation).ok);
  CHECK(equal(s2.derivation.conclusion(),
              implies(pf("forall y. [p0]{x,y} P(x,y)"),
                      just(s2.term, {Var{"x", false}}, pf("forall y. P(x,y)")))));
  CHECK_THROWS_AS(jt45_barcan(jvar("p0"), {}, y, pf("[b(p0)]{} P")), WrongLogic);
}
