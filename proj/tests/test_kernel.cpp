#include <doctest.h>

#include "folp/kernel.hpp"
#include "folp/textio.hpp"

using namespace folp;

namespace {
FormulaPtr F(const std::string& s) { return parse_formula(s); }
Var bv(const std::string& n) { return Var{n, false}; }
}  // namespace

TEST_CASE("a small axiomatic derivation is accepted") {
  Derivation d;
  d.hypotheses = {F("P"), F("(P -> Q)")};
  d.steps = {
      {F("P"), Rule::hyp(1)},
      {F("(P -> Q)"), Rule::hyp(2)},
      {F("Q"), Rule::mp(1, 2)},
      {F("(Q -> (P -> Q))"), Rule::ax(SchemaId::A1_K)},
      {F("(P -> Q)"), Rule::mp(3, 4)},
  };
  CheckReport r = check(d);
  CHECK(r.ok);
  CHECK(r.step_count == 5);
  CHECK(r.rules_used.at(Rule::Kind::Mp) == 2);
}

TEST_CASE("rejections carry the failing step and a reason") {
  Derivation d;
  d.steps = {{F("P(x)"), Rule::ax(SchemaId::A1_K)}};
  CheckReport r = check(d);
  CHECK_FALSE(r.ok);
  CHECK(r.failed_step == 1);
  CHECK(r.reason == RejectReason::BadAxiomInstance);

  Derivation empty;
  r = check(empty);
  CHECK(r.reason == RejectReason::NoSteps);
  CHECK(r.failed_step == 0);
}

TEST_CASE("generalization restriction on hypothesis variables") {
  Derivation d;
  d.hypotheses = {F("P(x)")};
  d.steps = {
      {F("P(x)"), Rule::hyp(1)},
      {F("forall x. P(x)"), Rule::gen(1, bv("x"))},
  };
  CheckReport r = check(d);
  CHECK(r.reason == RejectReason::GenOnHypFreeVar);
  CHECK(r.failed_step == 2);

  // Same shape with no hypotheses is fine.
  Derivation d2;
  d2.steps = {
      {F("(P(x) -> (Q -> P(x)))"), Rule::ax(SchemaId::A1_K)},
      {F("forall x. (P(x) -> (Q -> P(x)))"), Rule::gen(1, bv("x"))},
  };
  CHECK(check(d2).ok);

  // Generalizing a variable not free in the hypotheses is fine too.
  Derivation d3;
  d3.hypotheses = {F("P(x)")};
  d3.steps = {
      {F("(Q(y) -> (P(x) -> Q(y)))"), Rule::ax(SchemaId::A1_K)},
      {F("forall y. (Q(y) -> (P(x) -> Q(y)))"), Rule::gen(1, bv("y"))},
  };
  CHECK(check(d3).ok);
}

TEST_CASE("generalization shape mismatch") {
  Derivation d;
  d.steps = {
      {F("(P(x) -> (Q -> P(x)))"), Rule::ax(SchemaId::A1_K)},
      {F("forall y. (P(x) -> (Q -> P(x)))"), Rule::gen(1, bv("x"))},
  };
  CHECK(check(d).reason == RejectReason::GenShapeMismatch);
}

TEST_CASE("modus ponens mismatch and bad references") {
  Derivation d;
  d.steps = {
      {F("(P -> (Q -> P))"), Rule::ax(SchemaId::A1_K)},
      {F("Q"), Rule::mp(1, 1)},
  };
  CHECK(check(d).reason == RejectReason::MpMismatch);

  Derivation d2;
  d2.steps = {{F("Q"), Rule::mp(1, 2)}};
  CHECK(check(d2).reason == RejectReason::BadStepRef);
}

TEST_CASE("CS steps") {
  Derivation d;
  d.steps = {{F("[c_B1]{} ([t]{} P -> P)"), Rule::cs("c_B1")}};
  CHECK(check(d).ok);

  Derivation d2;
  d2.steps = {{F("[c_B1]{} P"), Rule::cs("c_B1")}};
  CHECK(check(d2).reason == RejectReason::BadCsEntry);

  Derivation d3;  // nonempty subscript is not a CS step
  d3.steps = {{F("[c_B1]{x} ([t]{x} P(x) -> P(x))"), Rule::cs("c_B1")}};
  CHECK(check(d3).reason == RejectReason::BadCsEntry);

  Derivation d4;  // witness instance, allowed through CS(V)
  d4.steps = {{F("[c_UI]{} (forall x. P(x) -> P(@a))"), Rule::cs("c_UI")}};
  CHECK(check(d4).ok);
}

TEST_CASE("hypothesis steps") {
  Derivation d;
  d.hypotheses = {F("P")};
  d.steps = {{F("Q"), Rule::hyp(1)}};
  CHECK(check(d).reason == RejectReason::BadHypIndex);
  d.steps = {{F("P"), Rule::hyp(2)}};
  CHECK(check(d).reason == RejectReason::BadHypIndex);
}

TEST_CASE("tautological consequence steps") {
  Derivation d;
  d.hypotheses = {F("(P -> Q)"), F("(Q -> R)")};
  d.steps = {
      {F("(P -> Q)"), Rule::hyp(1)},
      {F("(Q -> R)"), Rule::hyp(2)},
      {F("(P -> R)"), Rule::taut({1, 2})},
  };
  CHECK(check(d).ok);

  Derivation d2;
  d2.steps = {{F("((P -> Q) | (Q -> P))"), Rule::taut({})}};
  CHECK(check(d2).ok);

  Derivation d3;
  d3.hypotheses = {F("(P | Q)")};
  d3.steps = {
      {F("(P | Q)"), Rule::hyp(1)},
      {F("P"), Rule::taut({1})},
  };
  CHECK(check(d3).reason == RejectReason::TautNotConsequence);

  // Quantified and justified formulas are opaque atoms.
  Derivation d4;
  d4.steps = {{F("(forall x. P(x) -> P(y))"), Rule::taut({})}};
  CHECK(check(d4).reason == RejectReason::TautNotConsequence);

  Derivation d5;
  d5.steps = {{F("([t]{} P -> [t]{} P)"), Rule::taut({})}};
  CHECK(check(d5).ok);

  CheckOptions strict;
  strict.allow_taut = false;
  CHECK(check(d5, strict).reason == RejectReason::TautDisallowed);
}

TEST_CASE("check_theorem requires no hypotheses") {
  Derivation d;
  d.hypotheses = {F("P")};
  d.steps = {{F("P"), Rule::hyp(1)}};
  CHECK(check(d).ok);
  CHECK(check_theorem(d).reason == RejectReason::NonEmptyHypotheses);
}

TEST_CASE("logic gates the modal schemas") {
  Derivation d;
  d.logic = Logic::FOJT45;
  d.steps = {{F("(forall y. [t]{y} P(y) -> [b(t)]{} forall y. P(y))"), Rule::ax(SchemaId::Bb)}};
  CHECK(check(d).reason == RejectReason::BadAxiomInstance);
  d.logic = Logic::FOLPb;
  CHECK(check(d).ok);
}
