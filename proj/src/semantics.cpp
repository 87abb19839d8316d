#include "folp/semantics.hpp"

#include <algorithm>
#include <sstream>

#include "folp/files.hpp"

namespace folp {

namespace {

std::vector<Var> free_basic_vars(const FormulaPtr& f) {
  std::vector<Var> out;
  for (const Var& v : free_vars(f))
    if (!v.witness) out.push_back(v);
  return out;
}

// All formulas obtained from f by replacing free basic variables with domain
// members; each variable is independently kept (unless full_only) or replaced.
std::vector<FormulaPtr> instantiations(const FormulaPtr& f,
                                       const std::vector<std::string>& domain,
                                       bool full_only) {
  std::vector<Var> vars = free_basic_vars(f);
  if (vars.size() > 10)
    throw UniverseOverflow("too many free variables to instantiate: " +
                           print_formula(f));
  std::vector<FormulaPtr> out;
  std::map<Var, Var> sigma;
  std::function<void(size_t)> go = [&](size_t i) {
    if (i == vars.size()) {
      out.push_back(replace_free(f, sigma));
      return;
    }
    if (!full_only) go(i + 1);
    for (const std::string& d : domain) {
      sigma[vars[i]] = Var{d, true};
      go(i + 1);
      sigma.erase(vars[i]);
    }
  };
  go(0);
  return out;
}

// Is target an instance of pattern over the domain (Instantiation Condition)?
bool covers(const FormulaPtr& pattern, const FormulaPtr& target,
            const std::vector<std::string>& domain) {
  if (equal(pattern, target)) return true;
  for (const FormulaPtr& g : instantiations(pattern, domain, false))
    if (equal(g, target)) return true;
  return false;
}

void collect_subformulas(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  out.push_back(f);
  if (f->l) collect_subformulas(f->l, out);
  if (f->r) collect_subformulas(f->r, out);
}

void collect_subterms(const TermPtr& t, std::vector<TermPtr>& out) {
  out.push_back(t);
  if (t->a) collect_subterms(t->a, out);
  if (t->b) collect_subterms(t->b, out);
}

std::string world_list(const std::set<std::string>& ws) {
  std::string s;
  for (const std::string& w : ws) s += (s.empty() ? "" : " ") + w;
  return s;
}

// Memoizing interpreter over one model; built per top-level query.
struct Interp {
  const FittingModel& m;
  std::set<std::string> world_set;
  VarSet domain_vars;
  // Reflexive-transitive reachability, for closure-mode R propagation.
  std::map<std::string, std::set<std::string>> reach;
  std::map<std::string, bool> ev_memo;    // term|formula|world
  std::map<std::string, bool> eval_memo;  // world|formula
  bool universe_built = false;
  std::vector<FormulaPtr> universe;  // closure-mode candidate formulas

  explicit Interp(const FittingModel& model) : m(model) {
    for (const std::string& w : m.worlds) {
      world_set.insert(w);
      reach[w].insert(w);
    }
    for (const std::string& d : m.domain) domain_vars.insert(Var{d, true});
    bool grew = true;  // naive transitive closure; |W| is tiny
    while (grew) {
      grew = false;
      for (const auto& [u, v] : m.rel)
        for (auto& [w0, rs] : reach)
          if (rs.count(u) && rs.insert(v).second) grew = true;
    }
  }

  void require_world(const std::string& w) const {
    if (!world_set.count(w)) throw UnknownWorld("unknown world: " + w);
  }

  void require_closed(const FormulaPtr& f) const {
    for (const Var& v : free_vars(f))
      if (!v.witness)
        throw NotClosed("free basic variable " + v.name + " in " + print_formula(f));
    for (const Var& v : witness_occurring(f))
      if (!domain_vars.count(v))
        throw NotClosed("witness variable @" + v.name + " is not a domain member");
  }

  const std::vector<FormulaPtr>& closure_universe() {
    if (universe_built) return universe;
    std::vector<FormulaPtr> subs;
    for (const EvidenceBase& b : m.evidence.base) collect_subformulas(b.formula, subs);
    std::set<std::string> seen;
    for (const FormulaPtr& f : subs)
      for (const FormulaPtr& g : instantiations(f, m.domain, false)) {
        if (!seen.insert(print_formula(g)).second) continue;
        universe.push_back(g);
        if (universe.size() > m.evidence.universe_budget)
          throw UniverseOverflow("closure formula universe exceeds budget of " +
                                 std::to_string(m.evidence.universe_budget));
      }
    universe_built = true;
    return universe;
  }

  bool table_lookup(const TermPtr& t, const FormulaPtr& phi, const std::string& w) {
    for (const EvidenceEntry& e : m.evidence.entries)
      if (e.worlds.count(w) && equal(e.term, t) && covers(e.formula, phi, m.domain))
        return true;
    return false;
  }

  // Least evidence relation containing the base, closed under the conditions;
  // backward recursion on the term (every condition's premises use strictly
  // smaller terms, R propagation and instantiation are absorbed by the
  // base-hit test).
  bool closure_ev(const TermPtr& t, const FormulaPtr& phi, const std::string& w) {
    std::string key = print_term(t) + "|" + print_formula(phi) + "|" + w;
    auto it = ev_memo.find(key);
    if (it != ev_memo.end()) return it->second;
    bool r = closure_ev_raw(t, phi, w);
    ev_memo[key] = r;
    return r;
  }

  bool closure_ev_raw(const TermPtr& t, const FormulaPtr& phi, const std::string& w) {
    for (const EvidenceBase& b : m.evidence.base)
      if (reach.at(b.world).count(w) && equal(b.term, t) && covers(b.formula, phi, m.domain))
        return true;
    switch (t->kind) {
      case Term::Kind::JVar:
      case Term::Kind::JConst:
        return false;
      case Term::Kind::App: {
        // Application: some antecedent from the candidate universe works.
        for (const FormulaPtr& psi : closure_universe()) {
          if (!closure_ev(t->b, psi, w)) continue;
          if (closure_ev(t->a, implies(psi, phi), w)) return true;
        }
        return false;
      }
      case Term::Kind::Sum:
        return closure_ev(t->a, phi, w) || closure_ev(t->b, phi, w);
      case Term::Kind::Bang: {
        if (phi->kind != Formula::Kind::Just || !equal(phi->term, t->a)) return false;
        VarSet need = witness_occurring(phi->l);
        for (const Var& v : need)
          if (!phi->sub.count(v)) return false;
        for (const Var& v : phi->sub)
          if (!v.witness || !domain_vars.count(v)) return false;
        return closure_ev(t->a, phi->l, w);
      }
      case Term::Kind::Gen:
        if (phi->kind != Formula::Kind::Forall || phi->bound != t->bound) return false;
        return closure_ev(t->a, phi->l, w);
      case Term::Kind::Bar: {
        if (phi->kind != Formula::Kind::Forall) return false;
        for (const std::string& d : m.domain) {
          std::map<Var, Var> sigma{{phi->bound, Var{d, true}}};
          if (!closure_ev(t->a, replace_free(phi->l, sigma), w)) return false;
        }
        return true;
      }
      case Term::Kind::Query: {
        if (m.logic != Logic::FOJT45) return false;
        if (phi->kind != Formula::Kind::Not) return false;
        const FormulaPtr inner = phi->l;
        if (inner->kind != Formula::Kind::Just || !equal(inner->term, t->a)) return false;
        if (inner->sub != witness_occurring(inner->l)) return false;
        return !closure_ev(t->a, inner->l, w);
      }
    }
    return false;
  }

  bool evidence(const TermPtr& t, const FormulaPtr& phi, const std::string& w) {
    switch (m.evidence.mode) {
      case EvidenceSpec::Mode::Full:
        return true;
      case EvidenceSpec::Mode::Table:
        return table_lookup(t, phi, w);
      case EvidenceSpec::Mode::Closure:
        return closure_ev(t, phi, w);
    }
    return false;
  }

  bool eval(const std::string& w, const FormulaPtr& phi) {
    std::string key = w + "|" + print_formula(phi);
    auto it = eval_memo.find(key);
    if (it != eval_memo.end()) return it->second;
    bool r = eval_raw(w, phi);
    eval_memo[key] = r;
    return r;
  }

  bool eval_raw(const std::string& w, const FormulaPtr& phi) {
    switch (phi->kind) {
      case Formula::Kind::Atom: {
        std::vector<std::string> tuple;
        for (const Var& v : phi->args) {
          if (!v.witness) throw NotClosed("free basic variable " + v.name);
          tuple.push_back(v.name);
        }
        auto it = m.interp.find({phi->pred, w});
        return it != m.interp.end() && it->second.count(tuple) > 0;
      }
      case Formula::Kind::Bottom:
        return false;
      case Formula::Kind::Not:
        return !eval(w, phi->l);
      case Formula::Kind::And:
        return eval(w, phi->l) && eval(w, phi->r);
      case Formula::Kind::Or:
        return eval(w, phi->l) || eval(w, phi->r);
      case Formula::Kind::Implies:
        return !eval(w, phi->l) || eval(w, phi->r);
      case Formula::Kind::Iff:
        return eval(w, phi->l) == eval(w, phi->r);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        bool all = phi->kind == Formula::Kind::Forall;
        for (const std::string& d : m.domain) {
          std::map<Var, Var> sigma{{phi->bound, Var{d, true}}};
          bool v = eval(w, replace_free(phi->l, sigma));
          if (all && !v) return false;
          if (!all && v) return true;
        }
        return all;
      }
      case Formula::Kind::Just: {
        if (!evidence(phi->term, phi->l, w)) return false;
        std::vector<FormulaPtr> bodies = instantiations(phi->l, m.domain, true);
        for (const auto& [u, v] : m.rel) {
          if (u != w) continue;
          for (const FormulaPtr& body : bodies)
            if (!eval(v, body)) return false;
        }
        return true;
      }
    }
    return false;
  }
};

}  // namespace

bool evidence(const FittingModel& m, const TermPtr& t, const FormulaPtr& phi,
              const std::string& w) {
  Interp in(m);
  in.require_world(w);
  return in.evidence(t, phi, w);
}

bool eval(const FittingModel& m, const std::string& w, const FormulaPtr& phi) {
  Interp in(m);
  in.require_world(w);
  in.require_closed(phi);
  return in.eval(w, phi);
}

bool valid(const FittingModel& m, const FormulaPtr& phi) {
  Interp in(m);
  for (const Var& v : witness_occurring(phi))
    if (!in.domain_vars.count(v))
      throw NotClosed("witness variable @" + v.name + " is not a domain member");
  FormulaPtr closed = universal_closure(phi);
  for (const std::string& w : m.worlds)
    if (!in.eval(w, closed)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Audit

namespace {

struct Auditor {
  const FittingModel& m;
  Interp in;
  AuditReport rep;

  explicit Auditor(const FittingModel& model) : m(model), in(model) {}

  void flag(const std::string& cond, const std::string& inst) {
    rep.pass = false;
    rep.violations.push_back({cond, inst});
  }

  void check_shape() {
    if (m.worlds.empty()) flag("frame", "no worlds");
    if (m.domain.empty()) flag("frame", "empty domain");
    for (const std::string& w : m.worlds)
      if (!m.rel.count({w, w})) flag("R reflexive", w);
    for (const auto& [u, v] : m.rel)
      for (const auto& [x, y] : m.rel)
        if (v == x && !m.rel.count({u, y}))
          flag("R transitive", u + " " + v + " " + y);
    if (m.logic == Logic::FOJT45)
      for (const auto& [u, v] : m.rel)
        if (!m.rel.count({v, u})) flag("R symmetric", u + " " + v);
    std::map<std::string, size_t> arity;
    for (const auto& [key, tuples] : m.interp)
      for (const auto& tup : tuples) {
        auto it = arity.find(key.first);
        if (it == arity.end())
          arity.emplace(key.first, tup.size());
        else if (it->second != tup.size())
          flag("interpretation arity", key.first);
        for (const std::string& d : tup)
          if (std::find(m.domain.begin(), m.domain.end(), d) == m.domain.end())
            flag("domain", key.first + " uses unknown member " + d);
      }
  }

  void check_formula_domain(const FormulaPtr& f, const std::string& where) {
    for (const Var& v : witness_occurring(f))
      if (!in.domain_vars.count(v))
        flag("domain", where + ": @" + v.name + " is not a domain member");
  }

  std::set<std::string> worlds_of(const TermPtr& t, const FormulaPtr& phi) {
    std::set<std::string> out;
    for (const std::string& w : m.worlds)
      if (in.table_lookup(t, phi, w)) out.insert(w);
    return out;
  }

  void require_covered(const std::string& cond, const TermPtr& t,
                       const FormulaPtr& phi, const std::set<std::string>& need) {
    std::set<std::string> have = worlds_of(t, phi);
    for (const std::string& w : need)
      if (!have.count(w)) {
        flag(cond, print_term(t) + " | " + print_formula(phi) + " | missing " + w);
        return;
      }
  }

  void check_table() {
    const auto& entries = m.evidence.entries;
    std::vector<TermPtr> terms;  // entry terms, deduplicated
    std::vector<TermPtr> all_subterms;
    std::set<std::string> seen;
    for (const EvidenceEntry& e : entries) {
      check_formula_domain(e.formula, print_term(e.term));
      for (const std::string& w : e.worlds)
        if (!in.world_set.count(w)) flag("frame", "entry names unknown world " + w);
      std::vector<TermPtr> subs;
      collect_subterms(e.term, subs);
      for (const TermPtr& s : subs)
        if (seen.insert(print_term(s)).second) all_subterms.push_back(s);
      bool fresh = true;
      for (const TermPtr& t : terms)
        if (equal(t, e.term)) fresh = false;
      if (fresh) terms.push_back(e.term);
    }
    // R Closure and Instantiation.
    for (const EvidenceEntry& e : entries) {
      for (const std::string& w : e.worlds)
        for (const auto& [u, v] : m.rel)
          if (u == w && !in.table_lookup(e.term, e.formula, v))
            flag("R Closure", print_term(e.term) + " | " + print_formula(e.formula) +
                                  " | " + w + " -> " + v);
      for (const FormulaPtr& inst : instantiations(e.formula, m.domain, false))
        require_covered("Instantiation", e.term, inst, e.worlds);
    }
    // Application condition over pairs of entry terms.
    for (const EvidenceEntry& e1 : entries) {
      if (e1.formula->kind != Formula::Kind::Implies) continue;
      for (const FormulaPtr& chi : instantiations(e1.formula, m.domain, false)) {
        std::set<std::string> w1 = worlds_of(e1.term, chi);
        for (const TermPtr& b : terms) {
          std::set<std::string> prem;
          std::set<std::string> w2 = worlds_of(b, chi->l);
          std::set_intersection(w1.begin(), w1.end(), w2.begin(), w2.end(),
                                std::inserter(prem, prem.begin()));
          if (!prem.empty())
            require_covered(". Condition", app(e1.term, b), chi->r, prem);
        }
      }
    }
    for (const TermPtr& u : all_subterms) {
      switch (u->kind) {
        case Term::Kind::Sum:
          for (const TermPtr* c : {&u->a, &u->b})
            for (const EvidenceEntry& e : entries)
              if (equal(e.term, *c))
                for (const FormulaPtr& inst : instantiations(e.formula, m.domain, false))
                  require_covered("+ Condition", u, inst, worlds_of(*c, inst));
          break;
        case Term::Kind::Bang:
          for (const EvidenceEntry& e : entries) {
            if (!equal(e.term, u->a)) continue;
            for (const FormulaPtr& inst : instantiations(e.formula, m.domain, false)) {
              std::set<std::string> prem = worlds_of(u->a, inst);
              VarSet xmin = witness_occurring(inst);
              require_covered("! Condition", u, just(u->a, xmin, inst), prem);
              VarSet xmax = xmin;
              for (const std::string& d : m.domain) xmax.insert(Var{d, true});
              if (xmax != xmin)
                require_covered("! Condition (widened X sample)", u,
                                just(u->a, xmax, inst), prem);
            }
          }
          break;
        case Term::Kind::Gen:
          for (const EvidenceEntry& e : entries)
            if (equal(e.term, u->a))
              for (const FormulaPtr& inst : instantiations(e.formula, m.domain, false))
                require_covered("gen Condition", u, forall(u->bound, inst),
                                worlds_of(u->a, inst));
          break;
        case Term::Kind::Bar:
          check_bar(u, entries);
          break;
        case Term::Kind::Query:
          if (m.logic == Logic::FOJT45) check_query(u, entries);
          break;
        default:
          break;
      }
    }
    check_cs(entry_formulas(), terms_constants(all_subterms));
    if (m.logic == Logic::FOJT45 && !exempt_strong) check_strong_table();
  }

  void check_bar(const TermPtr& u, const std::vector<EvidenceEntry>& entries) {
    std::set<std::string> done;
    auto one = [&](const FormulaPtr& conclusion, const FormulaPtr& body, const Var& y) {
      if (!done.insert(print_formula(conclusion)).second) return;
      std::set<std::string> need;
      bool first = true;
      for (const std::string& d : m.domain) {
        std::map<Var, Var> sigma{{y, Var{d, true}}};
        std::set<std::string> w = worlds_of(u->a, replace_free(body, sigma));
        if (first) {
          need = w;
          first = false;
        } else {
          std::set<std::string> inter;
          std::set_intersection(need.begin(), need.end(), w.begin(), w.end(),
                                std::inserter(inter, inter.begin()));
          need = inter;
        }
      }
      require_covered("b Condition", u, conclusion, need);
    };
    for (const EvidenceEntry& e : entries) {
      if (equal(e.term, u->a))
        for (const FormulaPtr& pat : instantiations(e.formula, m.domain, false))
          for (const Var& y : free_basic_vars(pat)) one(forall(y, pat), pat, y);
      // Conclusion-driven: any universally quantified formula in the table.
      for (const FormulaPtr& inst : instantiations(e.formula, m.domain, false))
        if (inst->kind == Formula::Kind::Forall) one(inst, inst->l, inst->bound);
    }
  }

  void check_query(const TermPtr& u, const std::vector<EvidenceEntry>& entries) {
    std::set<std::string> done;
    auto one = [&](const FormulaPtr& phi) {
      if (!done.insert(print_formula(phi)).second) return;
      std::set<std::string> have = worlds_of(u->a, phi);
      std::set<std::string> need;
      for (const std::string& w : m.worlds)
        if (!have.count(w)) need.insert(w);
      require_covered("? Condition", u,
                      fnot(just(u->a, witness_occurring(phi), phi)), need);
    };
    for (const EvidenceEntry& e : entries) {
      if (equal(e.term, u->a))
        for (const FormulaPtr& inst : instantiations(e.formula, m.domain, false))
          one(inst);
      if (equal(e.term, u) && e.formula->kind == Formula::Kind::Not &&
          e.formula->l->kind == Formula::Kind::Just && equal(e.formula->l->term, u->a))
        for (const FormulaPtr& inst : instantiations(e.formula->l->l, m.domain, false))
          one(inst);
    }
  }

  std::vector<FormulaPtr> entry_formulas() const {
    std::vector<FormulaPtr> out;
    if (m.evidence.mode == EvidenceSpec::Mode::Table)
      for (const EvidenceEntry& e : m.evidence.entries) out.push_back(e.formula);
    if (m.evidence.mode == EvidenceSpec::Mode::Closure)
      for (const EvidenceBase& b : m.evidence.base) out.push_back(b.formula);
    return out;
  }

  static std::set<std::string> terms_constants(const std::vector<TermPtr>& ts) {
    std::set<std::string> out;
    for (const TermPtr& t : ts)
      if (t->kind == Term::Kind::JConst) out.insert(t->name);
    return out;
  }

  void check_cs(const std::vector<FormulaPtr>& formulas,
                const std::set<std::string>& constants) {
    for (const FormulaPtr& phi : formulas)
      for (const std::string& c : constants) {
        bool member = false;
        try {
          member = cs_contains(m.cs, c, phi, m.logic);
        } catch (const UnknownConstant&) {
        }
        if (!member) continue;
        for (const std::string& w : m.worlds)
          if (!in.evidence(jconst(c), phi, w))
            flag("CS Condition", c + " : " + print_formula(phi) + " | missing " + w);
      }
  }

  void strong_check(const TermPtr& t, const FormulaPtr& phi) {
    for (const FormulaPtr& inst : instantiations(phi, m.domain, true)) {
      FormulaPtr assertion = just(t, witness_occurring(inst), inst);
      for (const std::string& w : m.worlds) {
        if (!in.evidence(t, inst, w)) continue;
        bool ok = false;
        try {
          ok = in.eval(w, assertion);
        } catch (const SemanticsError& e) {
          flag("strong evidence", std::string("eval error: ") + e.what());
          return;
        }
        if (!ok)
          flag("strong evidence",
               print_formula(assertion) + " false at " + w + " despite evidence");
      }
    }
  }

  void check_strong_table() {
    for (const EvidenceEntry& e : m.evidence.entries) strong_check(e.term, e.formula);
  }

  void check_strong_closure() {
    for (const EvidenceBase& b : m.evidence.base) strong_check(b.term, b.formula);
  }

  void check_strong_full() {
    // Full evidence asserts E(t, false) = W; strong evidence would force
    // [t]{} false to hold wherever R has a successor.
    TermPtr t = jvar("p0");
    FormulaPtr assertion = just(t, {}, bottom());
    for (const std::string& w : m.worlds)
      if (!in.eval(w, assertion)) {
        flag("strong evidence", print_formula(assertion) + " false at " + w +
                                    " but full evidence covers it");
        return;
      }
  }

  bool exempt_strong = false;

  AuditReport run(const AuditOptions& opts) {
    exempt_strong = opts.exempt_strong_evidence;
    check_shape();
    switch (m.evidence.mode) {
      case EvidenceSpec::Mode::Full:
        rep.header = "mode=full: evidence conditions hold trivially";
        if (m.logic == Logic::FOJT45 && !exempt_strong) check_strong_full();
        break;
      case EvidenceSpec::Mode::Closure: {
        rep.header =
            "mode=closure: evidence conditions hold by construction; "
            "constant-specification and strong-evidence checks sample the base";
        for (const EvidenceBase& b : m.evidence.base) {
          check_formula_domain(b.formula, print_term(b.term));
          if (!in.world_set.count(b.world))
            flag("frame", "base names unknown world " + b.world);
        }
        std::vector<TermPtr> ts;
        for (const EvidenceBase& b : m.evidence.base) collect_subterms(b.term, ts);
        check_cs(entry_formulas(), terms_constants(ts));
        if (m.logic == Logic::FOJT45 && !exempt_strong) check_strong_closure();
        break;
      }
      case EvidenceSpec::Mode::Table:
        rep.header =
            "mode=table: conditions checked in table-closed form over the "
            "entry universe (conclusions outside it are not audited)";
        check_table();
        break;
    }
    return rep;
  }
};

}  // namespace

AuditReport audit(const FittingModel& m, const AuditOptions& opts) {
  Auditor a(m);
  return a.run(opts);
}

// ---------------------------------------------------------------------------
// Model files

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(size_t line, const std::string& msg) {
  throw ParseError(msg, SourceSpan{line, 1, 0});
}

// `P @ w : (d1,...,dn)`
void parse_interp_line(FittingModel& m, const std::string& rest, size_t line) {
  std::vector<std::string> head = split_ws(rest.substr(0, rest.find(':')));
  size_t colon = rest.find(':');
  if (head.size() != 3 || head[1] != "@" || colon == std::string::npos)
    fail(line, "expected `INTERP P @ w : (d1,...,dn)`");
  std::string args = trim(rest.substr(colon + 1));
  if (args.size() < 2 || args.front() != '(' || args.back() != ')')
    fail(line, "expected a parenthesized tuple");
  std::string inner = trim(args.substr(1, args.size() - 2));
  std::vector<std::string> tuple;
  if (!inner.empty()) {
    std::istringstream is(inner);
    std::string part;
    while (std::getline(is, part, ',')) {
      part = trim(part);
      if (part.empty()) fail(line, "empty tuple component");
      if (part.front() == '@') part = part.substr(1);
      tuple.push_back(part);
    }
  }
  m.interp[{head[0], head[2]}].insert(tuple);
}

void parse_entry_line(FittingModel& m, const std::string& s, size_t line) {
  size_t p1 = s.find('|');
  size_t p2 = s.find('|', p1 == std::string::npos ? p1 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos)
    fail(line, "expected `term | formula | world...`");
  TermPtr t;
  FormulaPtr f;
  try {
    t = parse_term(trim(s.substr(0, p1)));
    f = parse_formula(trim(s.substr(p1 + 1, p2 - p1 - 1)));
  } catch (ParseError& e) {
    throw ParseError(e.what(), SourceSpan{line, 1, 0}, e.expected);
  }
  std::vector<std::string> ws = split_ws(s.substr(p2 + 1));
  if (ws.empty()) fail(line, "entry lists no worlds");
  if (m.evidence.mode == EvidenceSpec::Mode::Closure) {
    for (const std::string& w : ws) m.evidence.base.push_back({t, f, w});
  } else if (m.evidence.mode == EvidenceSpec::Mode::Table) {
    m.evidence.entries.push_back({t, f, {ws.begin(), ws.end()}});
  } else {
    fail(line, "evidence entries are not allowed in mode=full");
  }
}

}  // namespace

FittingModel parse_model(const std::string& text, const std::string& base_dir) {
  FittingModel m;
  bool evidence_seen = false;
  std::istringstream is(text);
  std::string raw;
  size_t lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    size_t hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (evidence_seen && line.find('|') != std::string::npos) {
      parse_entry_line(m, line, lineno);
      continue;
    }
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    std::string rest = trim(line.substr(kw.size()));
    if (kw == "LOGIC") {
      auto l = logic_from_string(rest);
      if (!l) fail(lineno, "unknown logic: " + rest);
      m.logic = *l;
    } else if (kw == "WORLDS") {
      for (const std::string& w : split_ws(rest)) m.worlds.push_back(w);
    } else if (kw == "REL") {
      std::vector<std::string> ws = split_ws(rest);
      if (ws.size() != 2) fail(lineno, "expected `REL w v`");
      m.rel.insert({ws[0], ws[1]});
    } else if (kw == "DOMAIN") {
      for (std::string d : split_ws(rest)) {
        if (!d.empty() && d.front() == '@') d = d.substr(1);
        m.domain.push_back(d);
      }
    } else if (kw == "INTERP") {
      parse_interp_line(m, rest, lineno);
    } else if (kw == "CS") {
      std::vector<std::string> ws = split_ws(rest);
      if (ws.size() == 1 && ws[0] == "schematic") {
        m.cs = ConstantSpecification::schematic();
      } else if (ws.size() == 2 && ws[0] == "explicit") {
        std::string path = ws[1];
        if (!base_dir.empty() && path.front() != '/') path = base_dir + "/" + path;
        m.cs = load_explicit_cs(path);
      } else {
        fail(lineno, "expected `CS schematic` or `CS explicit <path>`");
      }
    } else if (kw == "EVIDENCE") {
      if (rest.rfind("mode=", 0) != 0) fail(lineno, "expected `EVIDENCE mode=<m>`");
      std::string mode = rest.substr(5);
      if (mode == "full")
        m.evidence.mode = EvidenceSpec::Mode::Full;
      else if (mode == "closure")
        m.evidence.mode = EvidenceSpec::Mode::Closure;
      else if (mode == "table")
        m.evidence.mode = EvidenceSpec::Mode::Table;
      else
        fail(lineno, "unknown evidence mode: " + mode);
      evidence_seen = true;
    } else {
      throw UnknownSectionError("unknown model section: " + kw,
                                SourceSpan{lineno, 1, 0});
    }
  }
  if (m.worlds.empty()) fail(lineno, "model declares no worlds");
  if (m.domain.empty()) fail(lineno, "model declares an empty domain");
  std::set<std::string> wset(m.worlds.begin(), m.worlds.end());
  std::set<std::string> dset(m.domain.begin(), m.domain.end());
  for (const auto& [u, v] : m.rel)
    if (!wset.count(u) || !wset.count(v)) fail(lineno, "REL names an unknown world");
  for (const auto& [key, tuples] : m.interp) {
    if (!wset.count(key.second)) fail(lineno, "INTERP names an unknown world");
    for (const auto& tup : tuples)
      for (const std::string& d : tup)
        if (!dset.count(d)) fail(lineno, "INTERP names an unknown domain member");
  }
  for (const EvidenceBase& b : m.evidence.base)
    if (!wset.count(b.world)) fail(lineno, "evidence entry names an unknown world");
  for (const EvidenceEntry& e : m.evidence.entries)
    for (const std::string& w : e.worlds)
      if (!wset.count(w)) fail(lineno, "evidence entry names an unknown world");
  return m;
}

FittingModel load_model(const std::string& path) {
  std::string dir;
  size_t slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_model(read_file(path), dir);
}

std::string print_model(const FittingModel& m, const std::string& cs_path) {
  std::ostringstream os;
  os << "LOGIC " << to_string(m.logic) << "\n";
  os << "WORLDS";
  for (const std::string& w : m.worlds) os << " " << w;
  os << "\n";
  for (const auto& [u, v] : m.rel) os << "REL " << u << " " << v << "\n";
  os << "DOMAIN";
  for (const std::string& d : m.domain) os << " " << d;
  os << "\n";
  for (const auto& [key, tuples] : m.interp)
    for (const auto& tup : tuples) {
      os << "INTERP " << key.first << " @ " << key.second << " : (";
      for (size_t i = 0; i < tup.size(); ++i) os << (i ? "," : "") << tup[i];
      os << ")\n";
    }
  if (m.cs.mode == ConstantSpecification::Mode::Schematic)
    os << "CS schematic\n";
  else
    os << "CS explicit " << cs_path << "\n";
  switch (m.evidence.mode) {
    case EvidenceSpec::Mode::Full:
      os << "EVIDENCE mode=full\n";
      break;
    case EvidenceSpec::Mode::Closure:
      os << "EVIDENCE mode=closure\n";
      for (const EvidenceBase& b : m.evidence.base)
        os << print_term(b.term) << " | " << print_formula(b.formula) << " | "
           << b.world << "\n";
      break;
    case EvidenceSpec::Mode::Table:
      os << "EVIDENCE mode=table\n";
      for (const EvidenceEntry& e : m.evidence.entries)
        os << print_term(e.term) << " | " << print_formula(e.formula) << " | "
           << world_list(e.worlds) << "\n";
      break;
  }
  return os.str();
}

}  // namespace folp
