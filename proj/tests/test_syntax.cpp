#include <doctest.h>

#include "folp/syntax.hpp"
#include "folp/textio.hpp"

using namespace folp;

namespace {
Var bv(const std::string& n) { return Var{n, false}; }
Var wv(const std::string& n) { return Var{n, true}; }
FormulaPtr F(const std::string& s) { return parse_formula(s); }
}  // namespace

TEST_CASE("free variables of a justification assertion are exactly the subscript") {
  FormulaPtr f = F("[t]{x} (P(x) & Q(y))");
  VarSet fv = free_vars(f);
  CHECK(fv == VarSet{bv("x")});
  CHECK(free_vars(F("[t]{} P(x)")).empty());
  CHECK(free_vars(F("[t]{x,@a} P(x)")) == VarSet{bv("x"), wv("a")});
}

TEST_CASE("free variables under quantifiers and connectives") {
  CHECK(free_vars(F("forall x. P(x,y)")) == VarSet{bv("y")});
  CHECK(free_vars(F("(P(x) -> exists y. Q(y))")) == VarSet{bv("x")});
  CHECK(is_closed(F("forall x. [t]{x} P(x)")));
  CHECK_FALSE(is_closed(F("[t]{x} P(y)")));
  // A witness variable free in a formula does not spoil closedness.
  CHECK(is_closed(F("P(@a)")));
}

TEST_CASE("witness variables cannot be bound") {
  CHECK_THROWS_AS(forall(wv("a"), F("P(x)")), std::invalid_argument);
  CHECK_THROWS_AS(gen(wv("a"), jvar("p0")), std::invalid_argument);
}

TEST_CASE("witness_occurring sees argument positions and subscripts") {
  CHECK(witness_occurring(F("[t]{@a} P(@b)")) == VarSet{wv("a"), wv("b")});
  CHECK(witness_occurring(F("forall x. P(x)")).empty());
}

TEST_CASE("free_for and substitution") {
  FormulaPtr f = F("forall y. P(x,y)");
  CHECK_FALSE(free_for(bv("y"), bv("x"), f));
  CHECK(free_for(bv("z"), bv("x"), f));
  CHECK(print_formula(substitute(f, {{bv("x"), bv("z")}})) == "forall y. P(z,y)");
  CHECK_THROWS_AS(substitute(f, {{bv("x"), bv("y")}}), CaptureError);

  // Substitution into a subscript renames the subscript and pushes into the body.
  FormulaPtr j = F("[t]{x} P(x)");
  CHECK(print_formula(substitute(j, {{bv("x"), bv("z")}})) == "[t]{z} P(z)");
  // A body occurrence outside the subscript is not free, hence untouched.
  FormulaPtr j2 = F("[t]{} P(x)");
  CHECK(print_formula(substitute(j2, {{bv("x"), bv("z")}})) == "[t]{} P(x)");
}

TEST_CASE("substituting a witness variable for a basic variable") {
  FormulaPtr f = F("forall x. P(x,y)");
  CHECK(print_formula(substitute(f, {{bv("y"), wv("a")}})) == "forall x. P(x,@a)");
  // Witness variables are never captured by quantifiers.
  CHECK(free_for(wv("a"), bv("y"), f));
}

TEST_CASE("variable variants") {
  auto v = variable_variant(F("P(x,y)"), F("P(y,x)"));
  REQUIRE(v.has_value());
  CHECK(v->at(bv("x")) == bv("y"));
  CHECK_FALSE(variable_variant(F("P(x,x)"), F("P(x,y)")).has_value());
  // Bound structure must agree.
  CHECK(variable_variant(F("forall x. P(x,y)"), F("forall x. P(x,z)")).has_value());
  CHECK_FALSE(variable_variant(F("forall x. P(x)"), F("forall y. P(y)")).has_value());
  // pair_ok restricting to basic-to-witness replacement.
  auto bw = [](const Var& a, const Var& b) { return !a.witness && b.witness; };
  CHECK(variable_variant(F("P(x,y)"), F("P(@a,y)"), bw).has_value());
  CHECK_FALSE(variable_variant(F("P(x,y)"), F("P(z,y)"), bw).has_value());
}

TEST_CASE("variable variants across subscripts") {
  auto v = variable_variant(F("[t]{x} P(x)"), F("[t]{y} P(y)"));
  CHECK(v.has_value());
  CHECK_FALSE(variable_variant(F("[t]{x} P(x)"), F("[s]{y} P(y)")).has_value());
  CHECK_FALSE(variable_variant(F("[t]{x} P(x)"), F("[t]{y} P(x)")).has_value());
}

TEST_CASE("universal closure") {
  CHECK(print_formula(universal_closure(F("P(x,y)"))) == "forall x. forall y. P(x,y)");
  CHECK(print_formula(universal_closure(F("P(@a)"))) == "P(@a)");
  CHECK(print_formula(universal_closure(F("[t]{y} P(y)"))) == "forall y. [t]{y} P(y)");
}

TEST_CASE("replace_free ignores the free-for precondition") {
  FormulaPtr f = F("forall y. P(x)");
  CHECK(print_formula(replace_free(f, {{bv("x"), bv("y")}})) == "forall y. P(y)");
}
