#include <doctest.h>

#include "folp/files.hpp"
#include "folp/semantics.hpp"

using namespace folp;

namespace {

FormulaPtr pf(const std::string& s) { return parse_formula(s); }
TermPtr pt(const std::string& s) { return parse_term(s); }

// Independent reference evaluator: direct recursion, no memoization, and a
// naive table/full evidence lookup of its own.
bool ref_evidence(const FittingModel& m, const TermPtr& t, const FormulaPtr& phi) {
  // world-independent part for table mode handled by caller
  (void)m;
  (void)t;
  (void)phi;
  return true;
}

std::vector<Var> ref_free_basic(const FormulaPtr& f) {
  std::vector<Var> out;
  for (const Var& v : free_vars(f))
    if (!v.witness) out.push_back(v);
  return out;
}

bool ref_instance_of(const FormulaPtr& pattern, const FormulaPtr& target,
                     const std::vector<std::string>& domain) {
  std::vector<Var> vars = ref_free_basic(pattern);
  std::vector<size_t> pick(vars.size(), 0);  // 0 = keep, i+1 = domain[i]
  while (true) {
    std::map<Var, Var> sigma;
    for (size_t i = 0; i < vars.size(); ++i)
      if (pick[i] > 0) sigma[vars[i]] = Var{domain[pick[i] - 1], true};
    if (equal(replace_free(pattern, sigma), target)) return true;
    size_t i = 0;
    for (; i < vars.size(); ++i) {
      if (++pick[i] <= domain.size()) break;
      pick[i] = 0;
    }
    if (i == vars.size()) return false;
  }
}

bool ref_ev(const FittingModel& m, const TermPtr& t, const FormulaPtr& phi,
            const std::string& w) {
  if (m.evidence.mode == EvidenceSpec::Mode::Full) return true;
  REQUIRE(m.evidence.mode == EvidenceSpec::Mode::Table);
  for (const EvidenceEntry& e : m.evidence.entries)
    if (e.worlds.count(w) && equal(e.term, t) &&
        ref_instance_of(e.formula, phi, m.domain))
      return true;
  return false;
}

bool ref_eval(const FittingModel& m, const std::string& w, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      std::vector<std::string> tup;
      for (const Var& v : f->args) tup.push_back(v.name);
      auto it = m.interp.find({f->pred, w});
      return it != m.interp.end() && it->second.count(tup) > 0;
    }
    case Formula::Kind::Bottom:
      return false;
    case Formula::Kind::Not:
      return !ref_eval(m, w, f->l);
    case Formula::Kind::And:
      return ref_eval(m, w, f->l) && ref_eval(m, w, f->r);
    case Formula::Kind::Or:
      return ref_eval(m, w, f->l) || ref_eval(m, w, f->r);
    case Formula::Kind::Implies:
      return !ref_eval(m, w, f->l) || ref_eval(m, w, f->r);
    case Formula::Kind::Iff:
      return ref_eval(m, w, f->l) == ref_eval(m, w, f->r);
    case Formula::Kind::Forall:
      for (const std::string& d : m.domain)
        if (!ref_eval(m, w, replace_free(f->l, {{f->bound, Var{d, true}}})))
          return false;
      return true;
    case Formula::Kind::Exists:
      for (const std::string& d : m.domain)
        if (ref_eval(m, w, replace_free(f->l, {{f->bound, Var{d, true}}})))
          return true;
      return false;
    case Formula::Kind::Just: {
      if (!ref_ev(m, f->term, f->l, w)) return false;
      std::vector<Var> vars = ref_free_basic(f->l);
      std::vector<size_t> pick(vars.size(), 0);
      for (const auto& [u, v] : m.rel) {
        if (u != w) continue;
        std::fill(pick.begin(), pick.end(), 0);
        while (true) {
          std::map<Var, Var> sigma;
          for (size_t i = 0; i < vars.size(); ++i)
            sigma[vars[i]] = Var{m.domain[pick[i]], true};
          if (!ref_eval(m, v, replace_free(f->l, sigma))) return false;
          size_t i = 0;
          for (; i < vars.size(); ++i) {
            if (++pick[i] < m.domain.size()) break;
            pick[i] = 0;
          }
          if (i == vars.size()) break;
        }
      }
      return true;
    }
  }
  return false;
}

FittingModel base_model() {
  FittingModel m;
  m.worlds = {"w"};
  m.rel = {{"w", "w"}};
  m.domain = {"a"};
  return m;
}

}  // namespace

TEST_CASE("eval basic clauses") {
  FittingModel m = base_model();
  m.domain = {"a", "b"};
  m.interp[{"P", "w"}] = {{"a"}, {"b"}};
  CHECK(!eval(m, "w", pf("false")));
  CHECK(eval(m, "w", pf("P(@a)")));
  CHECK(eval(m, "w", pf("forall x. P(x)")));
  CHECK(eval(m, "w", pf("[t]{} forall x. P(x)")));
  CHECK(eval(m, "w", pf("[t]{} P(x)")));  // fv = {}, x instantiated over D
  CHECK(!eval(m, "w", pf("exists x. ~P(x)")));
  CHECK(eval(m, "w", pf("(P(@a) & ~false)")));
  CHECK_THROWS_AS(eval(m, "v", pf("false")), UnknownWorld);
  CHECK_THROWS_AS(eval(m, "w", pf("P(x)")), NotClosed);
  CHECK_THROWS_AS(eval(m, "w", pf("P(@zz)")), NotClosed);
}

TEST_CASE("justification truth needs all successors and all instances") {
  FittingModel m;
  m.worlds = {"w", "v"};
  m.rel = {{"w", "w"}, {"v", "v"}, {"w", "v"}};
  m.domain = {"d", "e"};
  m.interp[{"P", "w"}] = {{"d"}, {"e"}};
  m.interp[{"P", "v"}] = {{"e"}};  // P(@d) fails at v
  CHECK(!eval(m, "w", pf("[t]{} P(@d)")));
  CHECK(eval(m, "w", pf("[t]{} P(@e)")));
  CHECK(!eval(m, "w", pf("[t]{} P(x)")));  // the @d instance fails at v
  CHECK(eval(m, "v", pf("[t]{} P(@e)")));
  CHECK(valid(m, pf("(P(x) -> P(x))")));
  CHECK(!valid(m, pf("P(x)")));
}

TEST_CASE("closure evidence: application and instantiation") {
  FittingModel m = base_model();
  m.evidence.mode = EvidenceSpec::Mode::Closure;
  m.evidence.base = {{pt("t"), pf("(P -> Q)"), "w"}, {pt("s"), pf("P"), "w"}};
  CHECK(evidence(m, pt("(t . s)"), pf("Q"), "w"));
  CHECK(!evidence(m, pt("(s . t)"), pf("Q"), "w"));
  CHECK(!evidence(m, pt("t"), pf("Q"), "w"));
  CHECK(evidence(m, pt("(t + s)"), pf("P"), "w"));
  CHECK(evidence(m, pt("(s + t)"), pf("(P -> Q)"), "w"));

  FittingModel m2 = base_model();
  m2.evidence.mode = EvidenceSpec::Mode::Closure;
  m2.evidence.base = {{pt("t"), pf("P(x)"), "w"}};
  CHECK(evidence(m2, pt("t"), pf("P(@a)"), "w"));
  CHECK(evidence(m2, pt("t"), pf("P(x)"), "w"));
  CHECK(!evidence(m2, pt("t"), pf("Q"), "w"));
}

TEST_CASE("closure evidence: bang, gen, bar, R propagation") {
  FittingModel m;
  m.worlds = {"w", "v"};
  m.rel = {{"w", "w"}, {"v", "v"}, {"w", "v"}};
  m.domain = {"a", "b"};
  m.evidence.mode = EvidenceSpec::Mode::Closure;
  m.evidence.base = {{pt("t"), pf("P(x,@a)"), "w"}};
  // R Closure: base at w propagates to v.
  CHECK(evidence(m, pt("t"), pf("P(@b,@a)"), "v"));
  // ! with minimal and widened subscripts.
  CHECK(evidence(m, pt("!t"), pf("[t]{@a} P(x,@a)"), "w"));
  CHECK(evidence(m, pt("!t"), pf("[t]{@a,@b} P(x,@a)"), "w"));
  CHECK(!evidence(m, pt("!t"), pf("[t]{} P(x,@a)"), "w"));
  CHECK(!evidence(m, pt("!t"), pf("[t]{@a,@zz} P(x,@a)"), "w"));
  // gen wraps the exact bound variable.
  CHECK(evidence(m, pt("gen[x](t)"), pf("forall x. P(x,@a)"), "w"));
  CHECK(!evidence(m, pt("gen[y](t)"), pf("forall x. P(x,@a)"), "w"));
  // bar needs every instance; instantiation of the base supplies them.
  CHECK(evidence(m, pt("b(t)"), pf("forall y. P(y,@a)"), "w"));
  CHECK(evidence(m, pt("b(t)"), pf("forall z. P(z,@a)"), "w"));
  CHECK(!evidence(m, pt("b(t)"), pf("forall y. P(@a,y)"), "w"));
}

TEST_CASE("closure evidence: query in FOJT45 and universe overflow") {
  FittingModel m = base_model();
  m.logic = Logic::FOJT45;
  m.evidence.mode = EvidenceSpec::Mode::Closure;
  m.evidence.base = {{pt("t"), pf("P"), "w"}};
  CHECK(evidence(m, pt("?s"), pf("~[s]{} P"), "w"));
  CHECK(!evidence(m, pt("?t"), pf("~[t]{} P"), "w"));
  CHECK(evidence(m, pt("?t"), pf("~[t]{} Q"), "w"));
  CHECK(!evidence(m, pt("?t"), pf("~[t]{@a} P"), "w"));  // X must be the witness set

  FittingModel m3 = base_model();
  m3.evidence.mode = EvidenceSpec::Mode::Closure;
  m3.evidence.universe_budget = 2;
  m3.evidence.base = {{pt("t"), pf("((P -> Q) -> (Q -> R))"), "w"}};
  CHECK_THROWS_AS(evidence(m3, pt("(t . t)"), pf("R"), "w"), UniverseOverflow);
}

TEST_CASE("closure evidence is monotone in the base") {
  std::vector<EvidenceBase> pool = {
      {pt("t"), pf("(P -> Q)"), "w"},  {pt("s"), pf("P"), "w"},
      {pt("t"), pf("P(x)"), "v"},      {pt("s"), pf("(Q -> P)"), "v"},
      {pt("(t . s)"), pf("R"), "w"},   {pt("p1"), pf("forall x. P(x)"), "w"},
  };
  std::vector<std::pair<TermPtr, FormulaPtr>> queries = {
      {pt("(t . s)"), pf("Q")},        {pt("(t + s)"), pf("P")},
      {pt("!s"), pf("[s]{} P")},       {pt("b(t)"), pf("forall y. P(y)")},
      {pt("gen[x](p1)"), pf("forall x. forall x. P(x)")},
      {pt("((t . s) + s)"), pf("R")},
  };
  FittingModel m;
  m.worlds = {"w", "v"};
  m.rel = {{"w", "w"}, {"v", "v"}, {"w", "v"}};
  m.domain = {"a"};
  m.evidence.mode = EvidenceSpec::Mode::Closure;
  for (size_t mask = 0; mask < (1u << pool.size()); ++mask) {
    m.evidence.base.clear();
    for (size_t i = 0; i < pool.size(); ++i)
      if (mask & (1u << i)) m.evidence.base.push_back(pool[i]);
    for (const auto& [t, f] : queries) {
      bool small = evidence(m, t, f, "w");
      if (!small) continue;
      // Supersets must preserve a positive answer.
      FittingModel big = m;
      for (size_t i = 0; i < pool.size(); ++i)
        if (!(mask & (1u << i))) big.evidence.base.push_back(pool[i]);
      CHECK(evidence(big, t, f, "w"));
    }
  }
}

TEST_CASE("table evidence lookup with instantiation matching") {
  FittingModel m;
  m.worlds = {"w", "v"};
  m.rel = {{"w", "w"}, {"v", "v"}};
  m.domain = {"a"};
  m.evidence.mode = EvidenceSpec::Mode::Table;
  m.evidence.entries = {{pt("t"), pf("P(x)"), {"w"}}};
  CHECK(evidence(m, pt("t"), pf("P(x)"), "w"));
  CHECK(evidence(m, pt("t"), pf("P(@a)"), "w"));
  CHECK(!evidence(m, pt("t"), pf("P(@a)"), "v"));
  CHECK(!evidence(m, pt("s"), pf("P(x)"), "w"));
  CHECK(!evidence(m, pt("t"), pf("Q"), "w"));
}

TEST_CASE("audit: frame shape and full mode") {
  FittingModel m = base_model();
  CHECK(audit(m).pass);
  m.worlds = {"w", "v", "u"};
  m.rel = {{"w", "w"}, {"v", "v"}, {"u", "u"}, {"w", "v"}, {"v", "u"}};
  AuditReport r = audit(m);
  CHECK(!r.pass);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].condition == "R transitive");
  m.rel.insert({"w", "u"});
  CHECK(audit(m).pass);
  m.logic = Logic::FOJT45;
  r = audit(m, {.exempt_strong_evidence = true});
  CHECK(!r.pass);  // not symmetric
  CHECK(r.violations[0].condition == "R symmetric");
}

TEST_CASE("audit: FOJT45 strong evidence in full mode") {
  FittingModel m = base_model();
  m.logic = Logic::FOJT45;
  AuditReport r = audit(m);
  CHECK(!r.pass);
  CHECK(r.violations[0].condition == "strong evidence");
  CHECK(audit(m, {.exempt_strong_evidence = true}).pass);
}

TEST_CASE("audit: table R Closure and application condition") {
  FittingModel m;
  m.worlds = {"w", "v"};
  m.rel = {{"w", "w"}, {"v", "v"}, {"w", "v"}};
  m.domain = {"a"};
  m.evidence.mode = EvidenceSpec::Mode::Table;
  m.evidence.entries = {{pt("t"), pf("P"), {"w"}}};
  AuditReport r = audit(m);
  CHECK(!r.pass);
  CHECK(r.violations[0].condition == "R Closure");
  m.evidence.entries = {{pt("t"), pf("P"), {"w", "v"}}};
  CHECK(audit(m).pass);
  // Application: premises present, conclusion term mentioned, entry missing.
  m.evidence.entries = {{pt("t"), pf("(P -> Q)"), {"w", "v"}},
                        {pt("s"), pf("P"), {"w", "v"}},
                        {pt("(t . s)"), pf("R"), {"w", "v"}}};
  r = audit(m);
  CHECK(!r.pass);
  bool found = false;
  for (const auto& v : r.violations) found |= v.condition == ". Condition";
  CHECK(found);
  m.evidence.entries.push_back({pt("(t . s)"), pf("Q"), {"w", "v"}});
  CHECK(audit(m).pass);
}

TEST_CASE("audit: table bang, sum, gen, bar conditions") {
  FittingModel m = base_model();
  m.evidence.mode = EvidenceSpec::Mode::Table;
  // Sum mentioned without the lifted entry.
  m.evidence.entries = {{pt("t"), pf("P"), {"w"}}, {pt("(t + s)"), pf("Q"), {"w"}}};
  AuditReport r = audit(m);
  CHECK(!r.pass);
  CHECK(r.violations[0].condition == "+ Condition");
  m.evidence.entries.push_back({pt("(t + s)"), pf("P"), {"w"}});
  CHECK(audit(m).pass);
  // Bang: minimal and widened subscripts both required.
  m.evidence.entries = {{pt("t"), pf("P"), {"w"}},
                        {pt("!t"), pf("[t]{} P"), {"w"}}};
  r = audit(m);
  CHECK(!r.pass);
  CHECK(r.violations[0].condition == "! Condition (widened X sample)");
  m.evidence.entries.push_back({pt("!t"), pf("[t]{@a} P"), {"w"}});
  CHECK(audit(m).pass);
  // gen.
  m.evidence.entries = {{pt("t"), pf("Q"), {"w"}},
                        {pt("gen[x](t)"), pf("R"), {"w"}}};
  r = audit(m);
  CHECK(!r.pass);
  CHECK(r.violations[0].condition == "gen Condition");
  m.evidence.entries.push_back({pt("gen[x](t)"), pf("forall x. Q"), {"w"}});
  CHECK(audit(m).pass);
  // bar: all instances covered forces the quantified conclusion.
  m.evidence.entries = {{pt("t"), pf("P(y)"), {"w"}},
                        {pt("b(t)"), pf("Q"), {"w"}}};
  r = audit(m);
  CHECK(!r.pass);
  CHECK(r.violations[0].condition == "b Condition");
  m.evidence.entries.push_back({pt("b(t)"), pf("forall y. P(y)"), {"w"}});
  CHECK(audit(m).pass);
}

TEST_CASE("audit: CS condition") {
  FittingModel m = base_model();
  m.worlds = {"w", "v"};
  m.rel = {{"w", "w"}, {"v", "v"}};
  m.evidence.mode = EvidenceSpec::Mode::Table;
  FormulaPtr k_instance = pf("(P -> (Q -> P))");
  m.evidence.entries = {{pt("c_K"), k_instance, {"w"}}};
  AuditReport r = audit(m);
  CHECK(!r.pass);
  bool found = false;
  for (const auto& v : r.violations) found |= v.condition == "CS Condition";
  CHECK(found);
  m.evidence.entries = {{pt("c_K"), k_instance, {"w", "v"}}};
  CHECK(audit(m).pass);
}

TEST_CASE("audit: FOJT45 table query and strong evidence") {
  FittingModel m = base_model();
  m.logic = Logic::FOJT45;
  m.interp[{"P", "w"}] = {{}};
  m.evidence.mode = EvidenceSpec::Mode::Table;
  // Strong evidence: entry without the truth behind it.
  m.evidence.entries = {{pt("t"), pf("Q"), {"w"}}};
  AuditReport r = audit(m);
  CHECK(!r.pass);
  bool strong = false;
  for (const auto& v : r.violations) strong |= v.condition == "strong evidence";
  CHECK(strong);
  // A truthful table: P holds everywhere, evidence everywhere; ? entries for
  // the query term mentioned.
  m.evidence.entries = {{pt("t"), pf("P"), {"w"}}};
  r = audit(m);
  CHECK(r.pass);
  m.evidence.entries.push_back({pt("?t"), pf("~[t]{} Q"), {"w"}});
  r = audit(m);  // ? Condition: worlds outside E(t,Q) = {w} must be covered — ok
  CHECK(r.pass);
  m.evidence.entries.push_back({pt("?s"), pf("~[s]{} P"), {}});
  r = audit(m);
  CHECK(!r.pass);
  bool qc = false;
  for (const auto& v : r.violations) qc |= v.condition == "? Condition";
  CHECK(qc);
}

TEST_CASE("model file round trip and audit of a parsed model") {
  std::string text =
      "LOGIC FOLPb\n"
      "WORLDS w v\n"
      "REL w w\n"
      "REL v v\n"
      "REL w v\n"
      "DOMAIN a b\n"
      "INTERP P @ w : (a)\n"
      "INTERP P @ w : (b)\n"
      "INTERP R @ v : (a,b)\n"
      "INTERP Z @ w : ()\n"
      "CS schematic\n"
      "EVIDENCE mode=closure\n"
      "t | (P(@a) -> Q) | w\n"
      "s | P(@a) | w v\n";
  FittingModel m = parse_model(text);
  CHECK(m.worlds.size() == 2);
  CHECK(m.domain.size() == 2);
  CHECK(m.evidence.base.size() == 3);
  CHECK(m.interp.at({"Z", "w"}).count({}) == 1);
  CHECK(evidence(m, pt("(t . s)"), pf("Q"), "w"));
  CHECK(audit(m).pass);
  std::string printed = print_model(m);
  FittingModel m2 = parse_model(printed);
  CHECK(print_model(m2) == printed);
  // Missing reflexive pair parses fine; audit flags it.
  std::string broken =
      "LOGIC FOLPb\nWORLDS w\nDOMAIN a\nEVIDENCE mode=full\n";
  FittingModel mb = parse_model(broken);
  AuditReport r = audit(mb);
  CHECK(!r.pass);
  CHECK(r.violations[0].condition == "R reflexive");
  CHECK_THROWS_AS(parse_model("BOGUS x\n"), UnknownSectionError);
  CHECK_THROWS_AS(parse_model("LOGIC FOLPb\nWORLDS w\nDOMAIN a\n"
                              "EVIDENCE mode=full\nt | P | w\n"),
                  ParseError);
}

TEST_CASE("eval agrees with the naive reference evaluator exhaustively") {
  // Deterministic family: every combination of world count, relation shape,
  // domain size, interpretation pattern and evidence mode, against a fixed
  // bank of formulas of depth <= 4.
  std::vector<FormulaPtr> bank = {
      pf("false"),
      pf("P(@a)"),
      pf("(P(@a) -> Q)"),
      pf("~(Q & P(@a))"),
      pf("forall x. P(x)"),
      pf("exists x. (P(x) | Q)"),
      pf("[t]{} P(@a)"),
      pf("[t]{} P(x)"),
      pf("[(t . s)]{} Q"),
      pf("[t]{@a} (P(@a) -> Q)"),
      pf("([t]{} P(x) -> forall x. P(x))"),
      pf("~[s]{} forall x. (P(x) & Q)"),
      pf("[t]{} [s]{} P(x)"),
      pf("(forall x. P(x) <-> ~exists x. ~P(x))"),
  };
  size_t checked = 0;
  for (size_t nw = 1; nw <= 3; ++nw) {
    std::vector<std::string> worlds;
    for (size_t i = 0; i < nw; ++i) worlds.push_back("w" + std::to_string(i));
    std::vector<std::set<std::pair<std::string, std::string>>> rels;
    {
      std::set<std::pair<std::string, std::string>> identity, chain, total;
      for (size_t i = 0; i < nw; ++i) {
        identity.insert({worlds[i], worlds[i]});
        for (size_t j = 0; j < nw; ++j) {
          total.insert({worlds[i], worlds[j]});
          if (i <= j) chain.insert({worlds[i], worlds[j]});
        }
      }
      rels = {identity, chain, total};
    }
    for (size_t nd = 1; nd <= 2; ++nd) {
      std::vector<std::string> domain(nd == 1 ? std::vector<std::string>{"a"}
                                              : std::vector<std::string>{"a", "b"});
      for (const auto& rel : rels) {
        for (int ipat = 0; ipat < 4; ++ipat) {
          FittingModel m;
          m.worlds = worlds;
          m.rel = rel;
          m.domain = domain;
          for (size_t i = 0; i < nw; ++i) {
            if (ipat & 1) m.interp[{"P", worlds[i]}].insert({domain[0]});
            if ((ipat & 2) && i % 2 == 0) {
              m.interp[{"Q", worlds[i]}].insert(std::vector<std::string>{});
              if (nd > 1) m.interp[{"P", worlds[i]}].insert({domain[1]});
            }
          }
          for (int emode = 0; emode < 2; ++emode) {
            if (emode == 0) {
              m.evidence.mode = EvidenceSpec::Mode::Full;
              m.evidence.entries.clear();
            } else {
              m.evidence.mode = EvidenceSpec::Mode::Table;
              m.evidence.entries = {
                  {pt("t"), pf("P(x)"), {worlds[0]}},
                  {pt("s"), pf("Q"), {worlds.back()}},
                  {pt("(t . s)"), pf("Q"), {worlds[0]}},
              };
            }
            for (const FormulaPtr& f : bank)
              for (const std::string& w : worlds) {
                CHECK(eval(m, w, f) == ref_eval(m, w, f));
                ++checked;
              }
          }
        }
      }
    }
  }
  CHECK(checked > 4000);
  (void)ref_evidence;
}

TEST_CASE("validity of axiom instances in audited models") {
  FittingModel m;
  m.worlds = {"w", "v"};
  m.rel = {{"w", "w"}, {"v", "v"}, {"w", "v"}};
  m.domain = {"a", "b"};
  m.interp[{"P", "w"}] = {{"a"}};
  REQUIRE(audit(m).pass);
  CHECK(valid(m, pf("([t]{x} P(x) -> P(x))")));                      // B1
  CHECK(valid(m, pf("([t]{} P(@a) -> [(t + s)]{} P(@a))")));         // B3
  CHECK(valid(m, pf("([t]{} Q -> [!t]{} [t]{} Q)")));                // B4
  CHECK(valid(m, pf("(forall y. [t]{y} P(y) -> [b(t)]{} forall y. P(y))")));
  CHECK(valid(m, pf("(forall x. P(x) -> P(y))")));
  CHECK(!valid(m, pf("P(x)")));
}
