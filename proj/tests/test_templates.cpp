#include <doctest.h>

#include "folp/templates.hpp"
#include "folp/textio.hpp"

using namespace folp;

namespace {

FormulaPtr pf(const std::string& s) { return parse_formula(s); }

void accepted(const Derivation& d) {
  CheckReport r = check_theorem(d);
  INFO(r.message << " at step " << r.failed_step);
  CHECK(r.ok);
}

}  // namespace

TEST_CASE("template construction, classification, printing") {
  TemplatePtr f = tbox(tor(tletter(0), tletter(1)));
  CHECK(degree(f) == 2);
  CHECK(is_positive(f));
  CHECK(is_disjunctive(f));
  CHECK(letter_count(f) == 2);
  CHECK(print_template(f) == "box (p0 | p1)");
  CHECK(equal(parse_template("box (p0 | p1)"), f));
  CHECK(equal(parse_template(" ~ ( p2 & box p0 ) "),
              tnot(tand(tletter(2), tbox(tletter(0))))));
  CHECK(!is_positive(tnot(tletter(0))));
  CHECK(!is_disjunctive(tand(tletter(0), tletter(1))));
  CHECK(is_disjunctive(tletter(3)));
  CHECK_THROWS_AS(tor(tletter(0), tbox(tletter(0))), TemplateError);
  CHECK_THROWS_AS(parse_template("box"), ParseError);
  CHECK_THROWS_AS(parse_template("(p0 + p1)"), ParseError);
}

TEST_CASE("instantiation-set membership") {
  std::vector<FormulaPtr> phis{pf("P(@a)"), pf("Q")};
  CHECK(member(tletter(0), phis, pf("P(@a)")));
  CHECK(!member(tletter(0), phis, pf("Q")));
  CHECK(member(tnot(tletter(1)), phis, pf("~Q")));
  CHECK(member(tor(tletter(0), tletter(1)), phis, pf("(P(@a) | Q)")));
  CHECK(!member(tor(tletter(0), tletter(1)), phis, pf("(Q | P(@a))")));
  // Box: subscript must be exactly the witness variables of the body.
  CHECK(member(tbox(tletter(0)), phis, pf("[p7]{@a} P(@a)")));
  CHECK(member(tbox(tletter(0)), phis, pf("[((p1 . p2) + !p3)]{@a} P(@a)")));
  CHECK(!member(tbox(tletter(0)), phis, pf("[p7]{} P(@a)")));
  CHECK(!member(tbox(tletter(1)), phis, pf("[p7]{@a} Q")));
  CHECK(member(tbox(tletter(1)), phis, pf("[p7]{} Q")));
  CHECK(member(tbox(tbox(tletter(1))), phis, pf("[p7]{} [p8]{} Q")));
  CHECK_THROWS_AS(member(tletter(5), phis, pf("Q")), ArityMismatch);
}

TEST_CASE("semi-replacement: letters, connectives, boxes") {
  Derivation imp = prove_tautology(Logic::FOLPb, ConstantSpecification::schematic(),
                                   pf("((P(@a) & Q) -> Q)"));
  FormulaPtr chi = pf("(P(@a) & Q)");
  std::vector<FormulaPtr> phis{pf("R")};
  // q is letter p1 here.
  TemplatePtr f = tand(tletter(0), tbox(tletter(1)));
  FormulaPtr phi = fand(pf("R"), pf("[p0]{@a} (P(@a) & Q)"));
  REQUIRE(member(f, {pf("R"), chi}, phi));
  TemplateResult res = semi_replacement(f, imp, phis, phi);
  accepted(res.derivation);
  CHECK(equal(res.derivation.conclusion(), implies(phi, res.theta)));
  CHECK(member(f, {pf("R"), pf("Q")}, res.theta));
  // The box retargets from {@a} to the witness variables of Q, i.e. {}.
  REQUIRE(res.theta->kind == Formula::Kind::And);
  CHECK(res.theta->r->sub.empty());
}

TEST_CASE("semi-replacement trivial and error cases") {
  Derivation imp = prove_tautology(Logic::FOLPb, ConstantSpecification::schematic(),
                                   pf("(P -> (P | Q))"));
  // Letter not q: identity.
  TemplateResult res = semi_replacement(tletter(0), imp, {pf("R")}, pf("R"));
  accepted(res.derivation);
  CHECK(equal(res.theta, pf("R")));
  // Letter q: the implication itself.
  TemplateResult res2 = semi_replacement(tletter(0), imp, {}, pf("P"));
  CHECK(equal(res2.theta, pf("(P | Q)")));
  accepted(res2.derivation);
  CHECK_THROWS_AS(semi_replacement(tnot(tletter(0)), imp, {}, pf("~P")), NotPositive);
  CHECK_THROWS_AS(semi_replacement(tletter(0), imp, {}, pf("Q")), MemberCheckFailed);
}

TEST_CASE("semi-replacement with chi -> chi stays in the same set") {
  Derivation imp = prove_tautology(Logic::FOLPb, ConstantSpecification::schematic(),
                                   pf("(P(@a) -> P(@a))"));
  TemplatePtr f = tbox(tletter(0));
  FormulaPtr phi = pf("[p0]{@a} P(@a)");
  TemplateResult res = semi_replacement(f, imp, {}, phi);
  accepted(res.derivation);
  CHECK(member(f, {pf("P(@a)")}, res.theta));
}

TEST_CASE("vacuous quantification") {
  Var y{"y", false};
  std::vector<FormulaPtr> phis{pf("P(@a)")};
  // Letter case.
  TemplateResult r1 = vacuous_quantification(tletter(0), phis, pf("P(@a)"), y);
  accepted(r1.derivation);
  CHECK(equal(r1.derivation.conclusion(), pf("(exists y. P(@a) -> P(@a))")));
  // Box case.
  FormulaPtr psi = pf("[p0]{@a} P(@a)");
  TemplateResult r2 = vacuous_quantification(tbox(tletter(0)), phis, psi, y);
  accepted(r2.derivation);
  CHECK(member(tbox(tletter(0)), phis, r2.theta));
  CHECK(equal(r2.derivation.conclusion(), implies(exists(y, psi), r2.theta)));
  // Or of letter and box.
  TemplatePtr f = tor(tletter(0), tbox(tletter(1)));
  std::vector<FormulaPtr> phis2{pf("P(@a)"), pf("Q")};
  FormulaPtr psi2 = forr(pf("P(@a)"), pf("[p1]{} Q"));
  TemplateResult r3 = vacuous_quantification(f, phis2, psi2, y);
  accepted(r3.derivation);
  CHECK(member(f, phis2, r3.theta));
  // Errors.
  CHECK_THROWS_AS(vacuous_quantification(tand(tletter(0), tletter(1)), phis2,
                                         fand(pf("P(@a)"), pf("Q")), y),
                  NotDisjunctive);
  CHECK_THROWS_AS(
      vacuous_quantification(tletter(0), {pf("P(y)")}, pf("P(y)"), y),
      FreeVarViolation);
  CHECK_THROWS_AS(vacuous_quantification(tletter(0), phis, pf("Q"), y),
                  MemberCheckFailed);
}

TEST_CASE("generalized Barcan in FOLPb") {
  Var y{"y", false};
  FormulaPtr phi_y = pf("P(y)");
  // Box around q: the b(t) axiom route.
  TemplatePtr f = tbox(tletter(0));
  FormulaPtr psi = pf("[p0]{} P(y)");
  TemplateResult r = generalized_barcan(f, y, phi_y, {}, psi);
  accepted(r.derivation);
  CHECK(member(f, {forall(y, phi_y)}, r.theta));
  CHECK(equal(r.derivation.conclusion(), implies(forall(y, psi), r.theta)));
  REQUIRE(r.theta->kind == Formula::Kind::Just);
  CHECK(contains_kind(r.theta->term, Term::Kind::Bar));
  // Or with q on the left, a box on the right.
  TemplatePtr f2 = tor(tletter(1), tbox(tletter(0)));
  std::vector<FormulaPtr> phis{pf("Q(@b)")};
  FormulaPtr psi2 = forr(pf("P(y)"), pf("[p3]{@b} Q(@b)"));
  TemplateResult r2 = generalized_barcan(f2, y, phi_y, phis, psi2);
  accepted(r2.derivation);
  CHECK(member(f2, {pf("Q(@b)"), forall(y, phi_y)}, r2.theta));
  // Errors.
  CHECK_THROWS_AS(generalized_barcan(tnot(tletter(0)), y, phi_y, {}, fnot(phi_y)),
                  NotDisjunctive);
  CHECK_THROWS_AS(generalized_barcan(f, y, phi_y, {}, pf("[p0]{} Q")),
                  MemberCheckFailed);
}

TEST_CASE("generalized Barcan in FOJT45 uses a synthesized term") {
  Var y{"y", false};
  FormulaPtr phi_y = pf("P(y)");
  TemplatePtr f = tbox(tletter(0));
  FormulaPtr psi = pf("[p0]{} P(y)");
  TemplateResult r = generalized_barcan(f, y, phi_y, {}, psi, Logic::FOJT45);
  accepted(r.derivation);
  CHECK(r.derivation.logic == Logic::FOJT45);
  CHECK(member(f, {forall(y, phi_y)}, r.theta));
  REQUIRE(r.theta->kind == Formula::Kind::Just);
  CHECK(contains_kind(r.theta->term, Term::Kind::Query));
  CHECK(!contains_kind(r.theta->term, Term::Kind::Bar));
}

TEST_CASE("combine members of one instantiation set") {
  std::vector<FormulaPtr> phis{pf("P(@a)")};
  TemplatePtr f = tbox(tletter(0));
  std::vector<FormulaPtr> psis{pf("[p1]{@a} P(@a)"), pf("[p2]{@a} P(@a)"),
                               pf("[(p1 + p3)]{@a} P(@a)")};
  TemplateResult r = combine(f, phis, psis);
  accepted(r.derivation);
  CHECK(member(f, phis, r.theta));
  REQUIRE(r.theta->kind == Formula::Kind::Just);
  CHECK(r.theta->term->kind == Term::Kind::Sum);
  FormulaPtr antecedent = forr(forr(psis[0], psis[1]), psis[2]);
  CHECK(equal(r.derivation.conclusion(), implies(antecedent, r.theta)));
  // k = 1.
  TemplateResult r1 = combine(f, phis, {psis[0]});
  accepted(r1.derivation);
  CHECK(member(f, phis, r1.theta));
  // Letter template, k = 3.
  TemplateResult r2 = combine(tletter(0), phis, {phis[0], phis[0], phis[0]});
  accepted(r2.derivation);
  CHECK(equal(r2.theta, phis[0]));
  // Or template.
  TemplatePtr f3 = tor(tbox(tletter(0)), tletter(1));
  std::vector<FormulaPtr> phis3{pf("P(@a)"), pf("Q")};
  std::vector<FormulaPtr> psis3{forr(pf("[p1]{@a} P(@a)"), pf("Q")),
                                forr(pf("[p2]{@a} P(@a)"), pf("Q"))};
  TemplateResult r3 = combine(f3, phis3, psis3);
  accepted(r3.derivation);
  CHECK(member(f3, phis3, r3.theta));
  // Errors.
  CHECK_THROWS_AS(combine(f, phis, {}), MemberCheckFailed);
  CHECK_THROWS_AS(combine(f, phis, {pf("[p1]{} P(@a)")}), MemberCheckFailed);
}

TEST_CASE("sharp extracts universal closures of justified bodies") {
  std::vector<FormulaPtr> gamma{
      pf("[t0]{@a} P(@a,y)"),   // contributes forall y. P(@a,y)
      pf("P(@a)"),              // not a justification assertion
      pf("[t1]{} P(@a)"),       // subscript not the witness set: skipped
      pf("[t2]{} Q"),           // contributes Q (no free basic variables)
      pf("[t3]{@a} P(@a,y)"),   // duplicate closure
  };
  std::vector<FormulaPtr> out = sharp(gamma);
  REQUIRE(out.size() == 2);
  CHECK(equal(out[0], pf("forall y. P(@a,y)")));
  CHECK(equal(out[1], pf("Q")));
  CHECK(sharp({}).empty());
}
