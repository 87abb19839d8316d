#include <doctest.h>

#include "folp/files.hpp"

using namespace folp;

TEST_CASE("derivation files round-trip and check") {
  const std::string text =
      "logic FOLPb\n"
      "cs schematic\n"
      "hyp 1: P\n"
      "hyp 2: (P -> Q)\n"
      "1. P ; HYP 1\n"
      "2. (P -> Q) ; HYP 2\n"
      "3. Q ; MP 1 2\n"
      "4. (Q -> (P -> Q)) ; AX A1.K\n"
      "5. ((Q | R) -> (Q | R)) ; TAUT\n"
      "6. (Q & (Q | R)) ; TAUT 3,5\n";
  Derivation d = parse_derivation(text);
  CHECK(d.logic == Logic::FOLPb);
  CHECK(d.hypotheses.size() == 2);
  CHECK(d.steps.size() == 6);
  CHECK(check(d).ok);
  CHECK(print_derivation(d) == text);
  Derivation again = parse_derivation(print_derivation(d));
  CHECK(check(again).ok);
}

TEST_CASE("derivation files with comments and blank lines") {
  const std::string text =
      "# a comment\n"
      "logic FOJT45\n"
      "cs schematic\n"
      "\n"
      "1. (P -> (Q -> P)) ; AX A1.K\n";
  Derivation d = parse_derivation(text);
  CHECK(d.logic == Logic::FOJT45);
  CHECK(check(d).ok);
}

TEST_CASE("derivation file errors") {
  CHECK_THROWS_AS(parse_derivation("1. P ; HYP 1\n"), ParseError);  // missing logic header
  CHECK_THROWS_AS(parse_derivation("logic FOLP\n"), ParseError);
  CHECK_THROWS_AS(parse_derivation("logic FOLPb\n2. P ; TAUT\n"), DuplicateIndexError);
  CHECK_THROWS_AS(parse_derivation("logic FOLPb\n1. P ; TAUT\n1. P ; TAUT\n"),
                  DuplicateIndexError);
  CHECK_THROWS_AS(parse_derivation("logic FOLPb\nhyp 2: P\n"), DuplicateIndexError);
  CHECK_THROWS_AS(parse_derivation("logic FOLPb\nbogus line\n"), UnknownSectionError);
  CHECK_THROWS_AS(parse_derivation("logic FOLPb\n1. P ; ZAP 1\n"), ParseError);
}

TEST_CASE("per-logic primitive gating in derivation files") {
  // ? is FOJT45-only, b is FOLPb-only.
  CHECK_THROWS_AS(parse_derivation("logic FOLPb\n1. [?p0]{} P ; TAUT\n"), ParseError);
  CHECK_THROWS_AS(parse_derivation("logic FOJT45\n1. [b(p0)]{} P ; TAUT\n"), ParseError);
  CHECK_NOTHROW(parse_derivation("logic FOJT45\n1. ([?p0]{} P -> [?p0]{} P) ; TAUT\n"));
  CHECK_NOTHROW(parse_derivation("logic FOLPb\n1. ([b(p0)]{} P -> [b(p0)]{} P) ; TAUT\n"));
}

TEST_CASE("explicit constant-specification files") {
  auto entries = parse_cs_entries("# cs\nc0 : (P(x) -> (Q -> P(x)))\nc1 : (false -> R)\n");
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].first == "c0");
  CHECK(print_cs_entries(entries) ==
        "c0 : (P(x) -> (Q -> P(x)))\nc1 : (false -> R)\n");
  CHECK_THROWS_AS(parse_cs_entries("just some text\n"), ParseError);
}
