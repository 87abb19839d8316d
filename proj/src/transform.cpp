#include "folp/transform.hpp"

#include <unordered_map>
#include <unordered_set>

#include "folp/files.hpp"
#include "folp/textio.hpp"

namespace folp {

bool var_occurs(const FormulaPtr& f, const Var& v) {
  switch (f->kind) {
    case Formula::Kind::Atom:
      for (const Var& a : f->args)
        if (a == v) return true;
      return false;
    case Formula::Kind::Bottom:
      return false;
    case Formula::Kind::Not:
      return var_occurs(f->l, v);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return var_occurs(f->l, v) || var_occurs(f->r, v);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return f->bound == v || var_occurs(f->l, v);
    case Formula::Kind::Just: {
      if (f->sub.count(v)) return true;
      // gen subscripts inside the term
      std::function<bool(const TermPtr&)> tv = [&](const TermPtr& t) {
        switch (t->kind) {
          case Term::Kind::Gen:
            return t->bound == v || tv(t->a);
          case Term::Kind::App:
          case Term::Kind::Sum:
            return tv(t->a) || tv(t->b);
          case Term::Kind::Bang:
          case Term::Kind::Query:
          case Term::Kind::Bar:
            return tv(t->a);
          default:
            return false;
        }
      };
      return tv(f->term) || var_occurs(f->l, v);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// DerivationBuilder

DerivationBuilder::DerivationBuilder(Logic logic, ConstantSpecification cs,
                                     std::vector<FormulaPtr> hyps) {
  d_.logic = logic;
  d_.cs = std::move(cs);
  d_.hypotheses = std::move(hyps);
}

size_t DerivationBuilder::add(FormulaPtr f, Rule r) {
  std::string key = print_formula(f);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  d_.steps.push_back({std::move(f), std::move(r)});
  size_t idx = d_.steps.size();
  memo_.emplace(std::move(key), idx);
  return idx;
}

size_t DerivationBuilder::ax(SchemaId s, FormulaPtr f) { return add(std::move(f), Rule::ax(s)); }

size_t DerivationBuilder::cs_step(const std::string& c, FormulaPtr body) {
  return add(just(jconst(c), {}, std::move(body)), Rule::cs(c));
}

size_t DerivationBuilder::cs_axiom(SchemaId s, FormulaPtr instance) {
  if (d_.cs.mode != ConstantSpecification::Mode::Schematic)
    throw CsNotSchematic("schematic constant specification required");
  return cs_step(d_.cs.constant_for(s), std::move(instance));
}

size_t DerivationBuilder::hyp(size_t k) {
  if (k < 1 || k > d_.hypotheses.size()) throw HypNotFound("hypothesis index out of range");
  return add(d_.hypotheses[k - 1], Rule::hyp(k));
}

size_t DerivationBuilder::mp(size_t i, size_t j) {
  const FormulaPtr& imp = formula(j);
  if (imp->kind != Formula::Kind::Implies || !equal(imp->l, formula(i)))
    throw std::logic_error("builder MP shape mismatch: " + print_formula(formula(i)) +
                           " vs " + print_formula(imp));
  return add(imp->r, Rule::mp(i, j));
}

size_t DerivationBuilder::gen_step(size_t i, const Var& x) {
  return add(forall(x, formula(i)), Rule::gen(i, x));
}

size_t DerivationBuilder::taut(FormulaPtr f, std::vector<size_t> cited) {
  return add(std::move(f), Rule::taut(std::move(cited)));
}

size_t DerivationBuilder::duplicate(size_t idx) {
  d_.steps.push_back(d_.steps[idx - 1]);
  return d_.steps.size();
}

size_t DerivationBuilder::append(const Derivation& other) {
  if (!other.hypotheses.empty()) {
    bool same = other.hypotheses.size() == d_.hypotheses.size();
    for (size_t i = 0; same && i < other.hypotheses.size(); ++i)
      same = equal(other.hypotheses[i], d_.hypotheses[i]);
    if (!same) throw HypShapeError("appended derivation has a different hypothesis list");
  }
  std::vector<size_t> map(other.steps.size() + 1, 0);
  for (size_t n = 1; n <= other.steps.size(); ++n) {
    const Step& s = other.steps[n - 1];
    Rule r = s.rule;
    switch (r.kind) {
      case Rule::Kind::Mp:
        r.i = map[r.i];
        r.j = map[r.j];
        break;
      case Rule::Kind::Gen:
        r.i = map[r.i];
        break;
      case Rule::Kind::Taut:
        for (size_t& c : r.cited) c = map[c];
        break;
      default:
        break;
    }
    map[n] = add(s.formula, std::move(r));
  }
  return map[other.steps.size()];
}

size_t DerivationBuilder::prove_id(const FormulaPtr& a) {
  FormulaPtr aa = implies(a, a);
  size_t k1 = ax(SchemaId::A1_K, implies(a, implies(aa, a)));
  size_t s1 = ax(SchemaId::A1_S,
                 implies(implies(a, implies(aa, a)), implies(implies(a, aa), aa)));
  size_t m1 = mp(k1, s1);
  size_t k2 = ax(SchemaId::A1_K, implies(a, aa));
  return mp(k2, m1);
}

size_t DerivationBuilder::imp_intro_k(size_t i, const FormulaPtr& a) {
  const FormulaPtr& b = formula(i);
  size_t k = ax(SchemaId::A1_K, implies(b, implies(a, b)));
  return mp(i, k);
}

size_t DerivationBuilder::syll(size_t i, size_t j) {
  // Copies: step references are invalidated when steps are appended.
  FormulaPtr ab = formula(i);
  FormulaPtr bc = formula(j);
  if (ab->kind != Formula::Kind::Implies || bc->kind != Formula::Kind::Implies ||
      !equal(ab->r, bc->l))
    throw std::logic_error("builder syllogism shape mismatch");
  FormulaPtr a = ab->l;
  size_t q = imp_intro_k(j, a);  // a -> (b -> c)
  size_t s = ax(SchemaId::A1_S, implies(formula(q), implies(ab, implies(a, bc->r))));
  size_t m = mp(q, s);
  return mp(i, m);
}

size_t DerivationBuilder::contrapose(size_t i) {
  FormulaPtr f = formula(i);
  if (f->kind != Formula::Kind::Implies) throw std::logic_error("contrapose needs ->");
  size_t cp = ax(SchemaId::A1_CP, implies(f, implies(fnot(f->r), fnot(f->l))));
  return mp(i, cp);
}

size_t DerivationBuilder::dne(const FormulaPtr& a) {
  FormulaPtr nna = fnot(fnot(a));
  size_t d1 = ax(SchemaId::A1_K, implies(nna, implies(fnot(fnot(nna)), nna)));
  size_t d2 = ax(SchemaId::A1_NEG,
                 implies(implies(fnot(fnot(nna)), nna), implies(fnot(a), fnot(nna))));
  size_t d3 = syll(d1, d2);  // ~~a -> (~a -> ~~~a)
  size_t d4 = ax(SchemaId::A1_NEG,
                 implies(implies(fnot(a), fnot(nna)), implies(nna, a)));
  size_t d5 = syll(d3, d4);  // ~~a -> (~~a -> a)
  size_t d6 = ax(SchemaId::A1_S,
                 implies(formula(d5), implies(implies(nna, nna), implies(nna, a))));
  size_t d7 = mp(d5, d6);
  size_t d8 = prove_id(nna);
  return mp(d8, d7);
}

size_t DerivationBuilder::dni(const FormulaPtr& a) {
  size_t dd = dne(fnot(a));  // ~~~a -> ~a
  size_t n = ax(SchemaId::A1_NEG, implies(formula(dd), implies(a, fnot(fnot(a)))));
  return mp(dd, n);
}

size_t DerivationBuilder::not_bot() {
  FormulaPtr bot = bottom();
  FormulaPtr idb = implies(bot, bot);
  size_t i = prove_id(bot);
  size_t d = dne(bot);                                   // ~~false -> false
  size_t b = ax(SchemaId::A1_BOT, implies(bot, fnot(idb)));
  size_t s = syll(d, b);                                 // ~~false -> ~(false->false)
  size_t n = ax(SchemaId::A1_NEG, implies(formula(s), implies(idb, fnot(bot))));
  size_t m = mp(s, n);
  return mp(i, m);
}

size_t DerivationBuilder::not_elim(size_t ai, size_t ni, const FormulaPtr& g) {
  FormulaPtr a = formula(ai);
  size_t s1 = imp_intro_k(ni, fnot(g));  // ~g -> ~a
  size_t n = ax(SchemaId::A1_NEG, implies(formula(s1), implies(a, g)));
  size_t m = mp(s1, n);
  return mp(ai, m);
}

size_t DerivationBuilder::excluded_middle(const FormulaPtr& a) {
  FormulaPtr na = fnot(a);
  FormulaPtr dd = forr(a, na);
  FormulaPtr nd = fnot(dd);
  FormulaPtr nb = fnot(bottom());
  size_t o1 = ax(SchemaId::A1_OR1, implies(a, dd));
  size_t c1 = contrapose(o1);  // ~(a|~a) -> ~a
  size_t o2 = ax(SchemaId::A1_OR2, implies(na, dd));
  size_t c2 = contrapose(o2);  // ~(a|~a) -> ~~a
  size_t k = ax(SchemaId::A1_K, implies(fnot(na), implies(nb, fnot(na))));
  size_t n = ax(SchemaId::A1_NEG,
                implies(implies(nb, fnot(na)), implies(na, bottom())));
  size_t s1 = syll(k, n);   // ~~a -> (~a -> false)
  size_t t1 = syll(c2, s1);  // ~(a|~a) -> (~a -> false)
  size_t s = ax(SchemaId::A1_S,
                implies(formula(t1), implies(formula(c1), implies(nd, bottom()))));
  size_t m1 = mp(t1, s);
  size_t m2 = mp(c1, m1);    // ~(a|~a) -> false
  size_t cp = contrapose(m2);
  size_t m3 = mp(not_bot(), cp);  // ~~(a|~a)
  size_t de = dne(dd);
  return mp(m3, de);
}

size_t DerivationBuilder::a3_lift(size_t i, const VarSet& target) {
  FormulaPtr f = formula(i);
  if (f->kind != Formula::Kind::Just) throw std::logic_error("a3_lift needs [t]{X}");
  VarSet cur = f->sub;
  for (const Var& v : target) {
    if (cur.count(v)) continue;
    VarSet next = cur;
    next.insert(v);
    FormulaPtr g = just(f->term, next, f->l);
    size_t a = ax(SchemaId::A3, implies(f, g));
    i = mp(i, a);
    f = g;
    cur = next;
  }
  return i;
}

size_t DerivationBuilder::retarget(size_t i, const VarSet& target) {
  FormulaPtr f = formula(i);
  if (f->kind != Formula::Kind::Just) throw std::logic_error("retarget needs [t]{X}");
  VarSet body_free = free_vars(f->l);
  VarSet cur = f->sub;
  for (const Var& v : cur) {
    if (target.count(v)) continue;
    if (body_free.count(v))
      throw PreconditionViolation("cannot drop " + v.str() + ": free in the body");
    VarSet next = formula(i)->sub;
    next.erase(v);
    FormulaPtr g = just(f->term, next, f->l);
    size_t a = ax(SchemaId::A2, implies(formula(i), g));
    i = mp(i, a);
    f = g;
  }
  return a3_lift(i, target);
}

Derivation DerivationBuilder::take(size_t conclusion_idx) {
  if (conclusion_idx != d_.steps.size()) duplicate(conclusion_idx);
  return std::move(d_);
}

// ---------------------------------------------------------------------------
// Deduction (hypothesis discharge)

Derivation deduction(const Derivation& d, size_t hyp_index) {
  CheckReport r = check(d);
  if (!r.ok) throw NotAccepted("input derivation rejected: " + r.message);
  if (hyp_index < 1 || hyp_index > d.hypotheses.size())
    throw HypNotFound("no hypothesis " + std::to_string(hyp_index));
  const FormulaPtr phi = d.hypotheses[hyp_index - 1];
  std::vector<FormulaPtr> rest;
  for (size_t i = 0; i < d.hypotheses.size(); ++i)
    if (i + 1 != hyp_index) rest.push_back(d.hypotheses[i]);
  DerivationBuilder b(d.logic, d.cs, rest);
  std::vector<size_t> map(d.steps.size() + 1, 0);
  for (size_t n = 1; n <= d.steps.size(); ++n) {
    const Step& s = d.steps[n - 1];
    const FormulaPtr& sigma = s.formula;
    switch (s.rule.kind) {
      case Rule::Kind::Hyp: {
        if (s.rule.k == hyp_index) {
          map[n] = b.prove_id(phi);
        } else {
          size_t k = s.rule.k < hyp_index ? s.rule.k : s.rule.k - 1;
          map[n] = b.imp_intro_k(b.hyp(k), phi);
        }
        break;
      }
      case Rule::Kind::Ax:
        map[n] = b.imp_intro_k(b.ax(s.rule.schema, sigma), phi);
        break;
      case Rule::Kind::Cs:
        map[n] = b.imp_intro_k(b.cs_step(s.rule.constant, sigma->l), phi);
        break;
      case Rule::Kind::Mp: {
        const FormulaPtr& si = d.steps[s.rule.i - 1].formula;
        size_t sx = b.ax(SchemaId::A1_S,
                         implies(implies(phi, implies(si, sigma)),
                                 implies(implies(phi, si), implies(phi, sigma))));
        size_t m = b.mp(map[s.rule.j], sx);
        map[n] = b.mp(map[s.rule.i], m);
        break;
      }
      case Rule::Kind::Gen: {
        size_t g = b.gen_step(map[s.rule.i], s.rule.var);
        size_t ud = b.ax(SchemaId::A1_UD, implies(b.formula(g), implies(phi, sigma)));
        map[n] = b.mp(g, ud);
        break;
      }
      case Rule::Kind::Taut: {
        std::vector<size_t> cited;
        for (size_t c : s.rule.cited) cited.push_back(map[c]);
        map[n] = b.taut(implies(phi, sigma), std::move(cited));
        break;
      }
    }
  }
  return b.take(map[d.steps.size()]);
}

// ---------------------------------------------------------------------------
// Propositional proof search (axioms + MP only)

namespace {

void collect_opaque(const FormulaPtr& f, std::vector<FormulaPtr>& order,
                    std::unordered_set<std::string>& seen) {
  switch (f->kind) {
    case Formula::Kind::Bottom:
      return;
    case Formula::Kind::Not:
      collect_opaque(f->l, order, seen);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      collect_opaque(f->l, order, seen);
      collect_opaque(f->r, order, seen);
      return;
    default:
      if (seen.insert(print_formula(f)).second) order.push_back(f);
      return;
  }
}

bool eval_opaque(const FormulaPtr& f, const std::unordered_map<std::string, bool>& val) {
  switch (f->kind) {
    case Formula::Kind::Bottom:
      return false;
    case Formula::Kind::Not:
      return !eval_opaque(f->l, val);
    case Formula::Kind::And:
      return eval_opaque(f->l, val) && eval_opaque(f->r, val);
    case Formula::Kind::Or:
      return eval_opaque(f->l, val) || eval_opaque(f->r, val);
    case Formula::Kind::Implies:
      return !eval_opaque(f->l, val) || eval_opaque(f->r, val);
    case Formula::Kind::Iff:
      return eval_opaque(f->l, val) == eval_opaque(f->r, val);
    default:
      return val.at(print_formula(f));
  }
}

constexpr size_t kMaxSplitAtoms = 8;

struct Leaf {
  DerivationBuilder& b;
  const std::vector<FormulaPtr>& hyps;
  const std::unordered_map<std::string, bool>& val;

  size_t hyp_proving(const FormulaPtr& f) {
    for (size_t k = 1; k <= hyps.size(); ++k)
      if (equal(hyps[k - 1], f)) return b.hyp(k);
    throw std::logic_error("leaf: missing decided hypothesis " + print_formula(f));
  }

  // Prove f (when true under val) or ~f (when false); returns (truth, index).
  std::pair<bool, size_t> go(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::Bottom:
        return {false, b.not_bot()};
      case Formula::Kind::Not: {
        auto [ta, ia] = go(f->l);
        if (!ta) return {true, ia};                // ia proves ~a == f
        return {false, b.mp(ia, b.dni(f->l))};     // ~~a == ~f
      }
      case Formula::Kind::And: {
        auto [ta, ia] = go(f->l);
        auto [tb, ib] = go(f->r);
        if (ta && tb) {
          size_t a3 = b.ax(SchemaId::A1_AND3, implies(f->l, implies(f->r, f)));
          return {true, b.mp(ib, b.mp(ia, a3))};
        }
        if (!ta) {
          size_t a1 = b.ax(SchemaId::A1_AND1, implies(f, f->l));
          return {false, b.mp(ia, b.contrapose(a1))};
        }
        size_t a2 = b.ax(SchemaId::A1_AND2, implies(f, f->r));
        return {false, b.mp(ib, b.contrapose(a2))};
      }
      case Formula::Kind::Or: {
        auto [ta, ia] = go(f->l);
        if (ta) return {true, b.mp(ia, b.ax(SchemaId::A1_OR1, implies(f->l, f)))};
        auto [tb, ib] = go(f->r);
        if (tb) return {true, b.mp(ib, b.ax(SchemaId::A1_OR2, implies(f->r, f)))};
        size_t fa = imp_false(f->l, ia);
        size_t fb = imp_false(f->r, ib);
        size_t o3 = b.ax(SchemaId::A1_OR3,
                         implies(b.formula(fa),
                                 implies(b.formula(fb), implies(f, bottom()))));
        size_t m = b.mp(fb, b.mp(fa, o3));  // (a|b) -> false
        return {false, b.mp(b.not_bot(), b.contrapose(m))};
      }
      case Formula::Kind::Implies:
        return imp_case(f->l, f->r);
      case Formula::Kind::Iff: {
        auto [t1, i1] = imp_case(f->l, f->r);
        if (!t1) {
          size_t x = b.ax(SchemaId::A1_IFF1, implies(f, implies(f->l, f->r)));
          return {false, b.mp(i1, b.contrapose(x))};
        }
        auto [t2, i2] = imp_case(f->r, f->l);
        if (!t2) {
          size_t x = b.ax(SchemaId::A1_IFF2, implies(f, implies(f->r, f->l)));
          return {false, b.mp(i2, b.contrapose(x))};
        }
        size_t x = b.ax(SchemaId::A1_IFF3,
                        implies(b.formula(i1), implies(b.formula(i2), f)));
        return {true, b.mp(i2, b.mp(i1, x))};
      }
      default:
        // opaque atom
        if (val.at(print_formula(f))) return {true, hyp_proving(f)};
        return {false, hyp_proving(fnot(f))};
    }
  }

  // From a proof of ~a, derive a -> false.
  size_t imp_false(const FormulaPtr& a, size_t na_idx) {
    size_t k = b.imp_intro_k(na_idx, fnot(bottom()));  // ~false -> ~a
    size_t n = b.ax(SchemaId::A1_NEG, implies(b.formula(k), implies(a, bottom())));
    return b.mp(k, n);
  }

  std::pair<bool, size_t> imp_case(const FormulaPtr& a, const FormulaPtr& c) {
    FormulaPtr f = implies(a, c);
    auto [ta, ia] = go(a);
    auto [tc, ic] = go(c);
    if (tc) return {true, b.imp_intro_k(ic, a)};
    if (!ta) {
      size_t k = b.imp_intro_k(ia, fnot(c));  // ~c -> ~a
      size_t n = b.ax(SchemaId::A1_NEG, implies(b.formula(k), f));
      return {true, b.mp(k, n)};
    }
    // a true, c false: refute a -> c
    size_t k = b.ax(SchemaId::A1_K, implies(a, implies(f, a)));
    size_t m1 = b.mp(ia, k);  // (a->c) -> a
    size_t id = b.prove_id(f);
    size_t s = b.ax(SchemaId::A1_S,
                    implies(b.formula(id), implies(b.formula(m1), implies(f, c))));
    size_t m3 = b.mp(m1, b.mp(id, s));  // (a->c) -> c
    return {false, b.mp(ic, b.contrapose(m3))};
  }
};

}  // namespace

Derivation prove_sequent(Logic logic, const ConstantSpecification& cs,
                         std::vector<FormulaPtr> hyps, FormulaPtr goal) {
  // Direct hits first.
  if (auto m = match_any_axiom(goal, logic)) {
    DerivationBuilder b(logic, cs, hyps);
    return b.take(b.ax(m->schema, goal));
  }
  for (size_t k = 1; k <= hyps.size(); ++k) {
    if (equal(hyps[k - 1], goal)) {
      DerivationBuilder b(logic, cs, hyps);
      return b.take(b.hyp(k));
    }
  }
  if (goal->kind == Formula::Kind::Implies) {
    std::vector<FormulaPtr> inner = hyps;
    inner.push_back(goal->l);
    Derivation sub = prove_sequent(logic, cs, std::move(inner), goal->r);
    return deduction(sub, hyps.size() + 1);
  }
  // Ground phase: decide opaque atoms, split on the first undecided one.
  std::vector<FormulaPtr> atoms;
  std::unordered_set<std::string> seen;
  for (const FormulaPtr& h : hyps) collect_opaque(h, atoms, seen);
  collect_opaque(goal, atoms, seen);
  std::unordered_map<std::string, bool> val;
  DerivationBuilder b(logic, cs, hyps);
  for (const FormulaPtr& a : atoms) {
    std::optional<size_t> pos, neg;
    for (size_t k = 1; k <= hyps.size(); ++k) {
      if (equal(hyps[k - 1], a)) pos = k;
      if (hyps[k - 1]->kind == Formula::Kind::Not && equal(hyps[k - 1]->l, a)) neg = k;
    }
    if (pos && neg)  // contradictory hypotheses prove anything
      return b.take(b.not_elim(b.hyp(*pos), b.hyp(*neg), goal));
    if (pos) val[print_formula(a)] = true;
    if (neg) val[print_formula(a)] = false;
  }
  std::vector<FormulaPtr> undecided;
  for (const FormulaPtr& a : atoms)
    if (!val.count(print_formula(a))) undecided.push_back(a);
  if (undecided.size() > kMaxSplitAtoms)
    throw TautExpansionOverflow(std::to_string(undecided.size()) +
                                " undecided atoms exceeds the split budget");
  if (!undecided.empty()) {
    const FormulaPtr& q = undecided.front();
    std::vector<FormulaPtr> h1 = hyps, h2 = hyps;
    h1.push_back(q);
    h2.push_back(fnot(q));
    Derivation i1 = deduction(prove_sequent(logic, cs, std::move(h1), goal), hyps.size() + 1);
    Derivation i2 = deduction(prove_sequent(logic, cs, std::move(h2), goal), hyps.size() + 1);
    size_t a1 = b.append(i1);  // q -> goal
    size_t a2 = b.append(i2);  // ~q -> goal
    size_t em = b.excluded_middle(q);
    size_t o3 = b.ax(SchemaId::A1_OR3,
                     implies(b.formula(a1),
                             implies(b.formula(a2), implies(b.formula(em), goal))));
    return b.take(b.mp(em, b.mp(a2, b.mp(a1, o3))));
  }
  // Every atom decided: evaluate. A false hypothesis yields the goal by
  // explosion; otherwise the goal must be true and is proved structurally.
  Leaf leaf{b, hyps, val};
  for (size_t k = 1; k <= hyps.size(); ++k) {
    if (!eval_opaque(hyps[k - 1], val)) {
      auto [t, ni] = leaf.go(hyps[k - 1]);
      if (t) throw std::logic_error("leaf evaluation inconsistency");
      return b.take(b.not_elim(b.hyp(k), ni, goal));
    }
  }
  if (!eval_opaque(goal, val))
    throw NotATautology("goal is not a tautological consequence: " + print_formula(goal));
  auto [t, i] = leaf.go(goal);
  if (!t) throw std::logic_error("leaf evaluation inconsistency");
  return b.take(i);
}

Derivation prove_tautology(Logic logic, const ConstantSpecification& cs,
                           const FormulaPtr& goal) {
  return prove_sequent(logic, cs, {}, goal);
}

// ---------------------------------------------------------------------------
// Internalization

namespace {

// Internalize the steps of src into b at subscript X. When with_hyps is true,
// src's hypotheses (shape pi:_{Xi} phii) must equal b's. Returns the term and
// step index for src's conclusion.
std::pair<TermPtr, size_t> internalize_into(DerivationBuilder& b, const Derivation& src,
                                            const VarSet& X, bool with_hyps) {
  std::vector<TermPtr> terms(src.steps.size() + 1);
  std::vector<size_t> idx(src.steps.size() + 1, 0);
  for (size_t n = 1; n <= src.steps.size(); ++n) {
    const Step& s = src.steps[n - 1];
    const FormulaPtr& sigma = s.formula;
    switch (s.rule.kind) {
      case Rule::Kind::Ax: {
        size_t c = b.cs_axiom(s.rule.schema, sigma);
        terms[n] = jconst(src.cs.constant_for(s.rule.schema));
        idx[n] = b.a3_lift(c, X);
        break;
      }
      case Rule::Kind::Cs: {
        size_t base = b.cs_step(s.rule.constant, sigma->l);
        TermPtr u = bang(jconst(s.rule.constant));
        size_t b4 = b.ax(SchemaId::B4, implies(sigma, just(u, VarSet{}, sigma)));
        idx[n] = b.a3_lift(b.mp(base, b4), X);
        terms[n] = u;
        break;
      }
      case Rule::Kind::Hyp: {
        if (!with_hyps) throw HypShapeError("hypothesis step in a closed subderivation");
        size_t h = b.hyp(s.rule.k);
        TermPtr u = bang(sigma->term);
        size_t b4 = b.ax(SchemaId::B4, implies(sigma, just(u, sigma->sub, sigma)));
        idx[n] = b.a3_lift(b.mp(h, b4), X);
        terms[n] = u;
        break;
      }
      case Rule::Kind::Mp: {
        const FormulaPtr& si = src.steps[s.rule.i - 1].formula;
        TermPtr u = app(terms[s.rule.j], terms[s.rule.i]);
        size_t b2 = b.ax(SchemaId::B2,
                         implies(b.formula(idx[s.rule.j]),
                                 implies(b.formula(idx[s.rule.i]), just(u, X, sigma))));
        (void)si;
        idx[n] = b.mp(idx[s.rule.i], b.mp(idx[s.rule.j], b2));
        terms[n] = u;
        break;
      }
      case Rule::Kind::Gen: {
        TermPtr u = gen(s.rule.var, terms[s.rule.i]);
        size_t b5 = b.ax(SchemaId::B5,
                         implies(b.formula(idx[s.rule.i]), just(u, X, sigma)));
        idx[n] = b.mp(idx[s.rule.i], b5);
        terms[n] = u;
        break;
      }
      case Rule::Kind::Taut: {
        FormulaPtr chi = sigma;
        for (auto it = s.rule.cited.rbegin(); it != s.rule.cited.rend(); ++it)
          chi = implies(src.steps[*it - 1].formula, chi);
        Derivation t = prove_tautology(src.logic, src.cs, chi);
        auto [u, i] = internalize_into(b, t, X, false);
        for (size_t c : s.rule.cited) {
          const FormulaPtr& cur = b.formula(i);  // u:_X (sigma_c -> rest)
          TermPtr nu = app(u, terms[c]);
          size_t b2 = b.ax(SchemaId::B2,
                           implies(cur, implies(b.formula(idx[c]),
                                                just(nu, X, cur->l->r))));
          i = b.mp(idx[c], b.mp(i, b2));
          u = nu;
        }
        idx[n] = i;
        terms[n] = u;
        break;
      }
    }
  }
  return {terms[src.steps.size()], idx[src.steps.size()]};
}

}  // namespace

Synthesized internalize(const Derivation& d) {
  CheckReport r = check(d);
  if (!r.ok) throw NotAccepted("input derivation rejected: " + r.message);
  if (d.cs.mode != ConstantSpecification::Mode::Schematic)
    throw CsNotSchematic("internalization requires a schematic constant specification");
  VarSet X;
  std::set<std::string> names;
  for (const FormulaPtr& h : d.hypotheses) {
    if (h->kind != Formula::Kind::Just || h->term->kind != Term::Kind::JVar ||
        !names.insert(h->term->name).second)
      throw HypShapeError(
          "hypotheses must be justification assertions on distinct justification variables");
    X.insert(h->sub.begin(), h->sub.end());
  }
  DerivationBuilder b(d.logic, d.cs, d.hypotheses);
  auto [t, idx] = internalize_into(b, d, X, true);
  return {t, b.take(idx)};
}

// ---------------------------------------------------------------------------
// Witness replacement

Derivation replace_witness(const Derivation& d, const Var& a, const Var& y) {
  CheckReport r = check(d);
  if (!r.ok) throw NotAccepted("input derivation rejected: " + r.message);
  if (!a.witness || y.witness)
    throw PreconditionViolation("replace_witness maps a witness variable to a basic one");
  for (const FormulaPtr& h : d.hypotheses)
    if (var_occurs(h, y)) throw VarNotFresh(y.str() + " occurs in a hypothesis");
  for (const Step& s : d.steps)
    if (var_occurs(s.formula, y) || (s.rule.kind == Rule::Kind::Gen && s.rule.var == y))
      throw VarNotFresh(y.str() + " occurs in the derivation");
  Derivation out;
  out.logic = d.logic;
  out.cs = d.cs;
  std::map<Var, Var> sigma{{a, y}};
  for (const FormulaPtr& h : d.hypotheses) out.hypotheses.push_back(replace_free(h, sigma));
  for (const Step& s : d.steps) out.steps.push_back({replace_free(s.formula, sigma), s.rule});
  return out;
}

Derivation generalize_witness(const Derivation& d, const Var& a, const Var& y) {
  Derivation out = replace_witness(d, a, y);
  size_t last = out.steps.size();
  out.steps.push_back({forall(y, out.steps[last - 1].formula), Rule::gen(last, y)});
  return out;
}

// ---------------------------------------------------------------------------
// Derived Barcan/Buridan terms

namespace {

void check_yx(const VarSet& X, const Var& y) {
  if (y.witness) throw PreconditionViolation("the quantified variable must be basic");
  if (X.count(y)) throw PreconditionViolation(y.str() + " must not be in the subscript set");
}

}  // namespace

Synthesized converse_barcan(const TermPtr& t, const VarSet& X, const Var& y,
                            const FormulaPtr& phi, Logic logic) {
  check_yx(X, y);
  VarSet Xy = X;
  Xy.insert(y);
  TermPtr c1 = jconst(schematic_constant_name(SchemaId::A1_UI));
  FormulaPtr all = forall(y, phi);
  FormulaPtr l1 = implies(all, phi);
  DerivationBuilder b(logic, ConstantSpecification::schematic());
  size_t s1 = b.ax(SchemaId::A1_UI, l1);
  (void)s1;
  size_t s2 = b.cs_axiom(SchemaId::A1_UI, l1);
  std::vector<size_t> cited{s2};
  VarSet cur;
  for (const Var& v : Xy) {  // axiom-only A3 chain for c1
    VarSet next = cur;
    next.insert(v);
    cited.push_back(b.ax(SchemaId::A3, implies(just(c1, cur, l1), just(c1, next, l1))));
    cur = next;
  }
  cited.push_back(b.ax(
      SchemaId::B2,
      implies(just(c1, Xy, l1), implies(just(t, Xy, all), just(app(c1, t), Xy, phi)))));
  cited.push_back(b.ax(SchemaId::A3, implies(just(t, X, all), just(t, Xy, all))));
  size_t tt = b.taut(implies(just(t, X, all), just(app(c1, t), Xy, phi)), cited);
  size_t g = b.gen_step(tt, y);
  size_t ud = b.ax(SchemaId::A1_UD,
                   implies(b.formula(g), implies(just(t, X, all),
                                                 forall(y, just(app(c1, t), Xy, phi)))));
  return {app(c1, t), b.take(b.mp(g, ud))};
}

Synthesized converse_buridan(const TermPtr& t, const VarSet& X, const Var& y,
                             const FormulaPtr& phi, Logic logic) {
  check_yx(X, y);
  VarSet Xy = X;
  Xy.insert(y);
  FormulaPtr ex = exists(y, phi);
  FormulaPtr psi = implies(phi, ex);
  TermPtr cei = jconst(schematic_constant_name(SchemaId::A1_EI));
  TermPtr r = gen(y, cei);
  DerivationBuilder b(logic, ConstantSpecification::schematic());
  size_t s1 = b.ax(SchemaId::A1_EI, psi);
  size_t s2 = b.gen_step(s1, y);  // forall y. (phi -> exists y. phi)
  (void)s2;
  size_t s3 = b.cs_axiom(SchemaId::A1_EI, psi);
  size_t s4 = b.ax(SchemaId::B5, implies(b.formula(s3), just(r, VarSet{}, forall(y, psi))));
  size_t s5 = b.mp(s3, s4);        // [r]{} forall y. psi
  size_t s6 = b.a3_lift(s5, X);    // [r]{X} forall y. psi
  Synthesized cb = converse_barcan(r, X, y, psi, logic);
  TermPtr fr = cb.term;            // (c_UI . r)
  size_t cbi = b.append(cb.derivation);
  size_t s7 = b.mp(s6, cbi);       // forall y. [f(r)]{Xy} psi
  size_t ui = b.ax(SchemaId::A1_UI, implies(b.formula(s7), just(fr, Xy, psi)));
  size_t s8 = b.mp(s7, ui);        // [f(r)]{Xy} psi
  TermPtr st = app(fr, t);
  size_t b2 = b.ax(SchemaId::B2,
                   implies(b.formula(s8), implies(just(t, Xy, phi), just(st, Xy, ex))));
  size_t s9 = b.mp(s8, b2);        // [t]{Xy} phi -> [s]{Xy} exists y. phi
  size_t a2 = b.ax(SchemaId::A2, implies(just(st, Xy, ex), just(st, X, ex)));
  size_t s10 = b.taut(implies(just(t, Xy, phi), just(st, X, ex)), {s9, a2});
  size_t s11 = b.gen_step(s10, y);
  size_t ed = b.ax(SchemaId::A1_ED,
                   implies(b.formula(s11),
                           implies(exists(y, just(t, Xy, phi)), just(st, X, ex))));
  return {st, b.take(b.mp(s11, ed))};
}

Synthesized jt45_barcan(const TermPtr& t, const VarSet& X, const Var& y,
                        const FormulaPtr& phi) {
  check_yx(X, y);
  if (!formula_in_logic(phi, Logic::FOJT45))
    throw WrongLogic("b(...) terms are not part of FOJT45");
  const Logic logic = Logic::FOJT45;
  VarSet Xy = X;
  Xy.insert(y);
  TermPtr c1 = jconst(schematic_constant_name(SchemaId::A1_UI));
  TermPtr c2 = jconst(schematic_constant_name(SchemaId::A1_CP));
  TermPtr qt = query(t);
  TermPtr m = app(app(c2, c1), qt);
  TermPtr qm = query(m);
  FormulaPtr A = just(t, Xy, phi);
  FormulaPtr F = forall(y, A);
  FormulaPtr NA = fnot(A), NF = fnot(F);
  FormulaPtr l1f = implies(F, A);
  FormulaPtr cpinst = implies(l1f, implies(NA, NF));
  FormulaPtr M_Xy = just(m, Xy, NF);
  FormulaPtr M_X = just(m, X, NF);
  FormulaPtr QT = just(qt, Xy, NA);
  FormulaPtr l16f = implies(fnot(M_X), forall(y, phi));

  // Steps 1-16 of the construction: a closed, TAUT-free derivation suitable
  // for internalization.
  DerivationBuilder b16(logic, ConstantSpecification::schematic());
  size_t l1 = b16.ax(SchemaId::A1_UI, l1f);
  (void)l1;
  size_t l2 = b16.cs_axiom(SchemaId::A1_UI, l1f);
  size_t l3 = b16.a3_lift(l2, Xy);
  size_t l4 = b16.ax(SchemaId::A1_CP, cpinst);
  (void)l4;
  size_t l5 = b16.cs_axiom(SchemaId::A1_CP, cpinst);
  size_t l6 = b16.a3_lift(l5, Xy);
  size_t b2a = b16.ax(SchemaId::B2,
                      implies(b16.formula(l6),
                              implies(b16.formula(l3),
                                      just(app(c2, c1), Xy, implies(NA, NF)))));
  size_t l7 = b16.mp(l3, b16.mp(l6, b2a));
  size_t b2b = b16.ax(SchemaId::B2,
                      implies(b16.formula(l7), implies(QT, M_Xy)));
  size_t l8 = b16.mp(l7, b2b);    // [?t]{Xy} ~A -> [m]{Xy} ~F
  size_t l9 = b16.contrapose(l8);
  size_t b6 = b16.ax(SchemaId::B6, implies(NA, QT));
  size_t c = b16.contrapose(b6);  // ~QT -> ~~A
  size_t l10 = b16.syll(b16.syll(c, b16.dne(A)), b16.ax(SchemaId::B1, implies(A, phi)));
  size_t l11 = b16.syll(l9, l10);
  size_t l12 = b16.ax(SchemaId::A2, implies(M_Xy, M_X));
  size_t l13 = b16.contrapose(l12);
  size_t l14 = b16.syll(l13, l11);
  size_t l15 = b16.gen_step(l14, y);
  size_t ud = b16.ax(SchemaId::A1_UD, implies(b16.formula(l15), l16f));
  size_t l16 = b16.mp(l15, ud);
  Synthesized inner = internalize(b16.take(l16));
  const TermPtr& r = inner.term;

  DerivationBuilder b(logic, ConstantSpecification::schematic());
  size_t i17 = b.append(inner.derivation);  // [r]{} l16f
  size_t i18 = b.a3_lift(i17, X);
  size_t b2c = b.ax(SchemaId::B2,
                    implies(b.formula(i18),
                            implies(just(qm, X, fnot(M_X)),
                                    just(app(r, qm), X, forall(y, phi)))));
  size_t i19 = b.mp(i18, b2c);
  size_t b1x = b.ax(SchemaId::B1, implies(M_X, NF));
  size_t b6x = b.ax(SchemaId::B6, implies(fnot(M_X), just(qm, X, fnot(M_X))));
  size_t i20 = b.taut(implies(F, just(qm, X, fnot(M_X))), {b1x, b6x});
  size_t i21 = b.taut(implies(F, just(app(r, qm), X, forall(y, phi))), {i19, i20});
  return {app(r, qm), b.take(i21)};
}

}  // namespace folp
