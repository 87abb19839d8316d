#include "folp/syntax.hpp"

#include <algorithm>

namespace folp {

std::string to_string(Logic l) { return l == Logic::FOLPb ? "FOLPb" : "FOJT45"; }

std::optional<Logic> logic_from_string(const std::string& s) {
  if (s == "FOLPb") return Logic::FOLPb;
  if (s == "FOJT45") return Logic::FOJT45;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Term constructors

static TermPtr mk_term(Term t) { return std::make_shared<const Term>(std::move(t)); }

TermPtr jvar(const std::string& name) {
  return mk_term({Term::Kind::JVar, name, nullptr, nullptr, {}});
}
TermPtr jconst(const std::string& name) {
  return mk_term({Term::Kind::JConst, name, nullptr, nullptr, {}});
}
TermPtr app(TermPtr a, TermPtr b) {
  return mk_term({Term::Kind::App, "", std::move(a), std::move(b), {}});
}
TermPtr sum(TermPtr a, TermPtr b) {
  return mk_term({Term::Kind::Sum, "", std::move(a), std::move(b), {}});
}
TermPtr bang(TermPtr a) { return mk_term({Term::Kind::Bang, "", std::move(a), nullptr, {}}); }
TermPtr query(TermPtr a) { return mk_term({Term::Kind::Query, "", std::move(a), nullptr, {}}); }
TermPtr bar(TermPtr a) { return mk_term({Term::Kind::Bar, "", std::move(a), nullptr, {}}); }
TermPtr gen(const Var& x, TermPtr a) {
  if (x.witness) throw std::invalid_argument("gen subscript must be a basic variable");
  return mk_term({Term::Kind::Gen, "", std::move(a), nullptr, x});
}

bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::JVar:
    case Term::Kind::JConst:
      return a->name == b->name;
    case Term::Kind::App:
    case Term::Kind::Sum:
      return equal(a->a, b->a) && equal(a->b, b->b);
    case Term::Kind::Bang:
    case Term::Kind::Query:
    case Term::Kind::Bar:
      return equal(a->a, b->a);
    case Term::Kind::Gen:
      return a->bound == b->bound && equal(a->a, b->a);
  }
  return false;
}

bool contains_kind(const TermPtr& t, Term::Kind k) {
  if (!t) return false;
  if (t->kind == k) return true;
  return contains_kind(t->a, k) || contains_kind(t->b, k);
}

size_t term_size(const TermPtr& t) {
  if (!t) return 0;
  return 1 + term_size(t->a) + term_size(t->b);
}

// ---------------------------------------------------------------------------
// Formula constructors

static FormulaPtr mk_formula(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

FormulaPtr atom(const std::string& pred, std::vector<Var> args) {
  Formula f;
  f.kind = Formula::Kind::Atom;
  f.pred = pred;
  f.args = std::move(args);
  return mk_formula(std::move(f));
}
FormulaPtr bottom() {
  Formula f;
  f.kind = Formula::Kind::Bottom;
  return mk_formula(std::move(f));
}
static FormulaPtr unary(Formula::Kind k, FormulaPtr a) {
  Formula f;
  f.kind = k;
  f.l = std::move(a);
  return mk_formula(std::move(f));
}
static FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = k;
  f.l = std::move(a);
  f.r = std::move(b);
  return mk_formula(std::move(f));
}
FormulaPtr fnot(FormulaPtr a) { return unary(Formula::Kind::Not, std::move(a)); }
FormulaPtr fand(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::And, std::move(a), std::move(b));
}
FormulaPtr forr(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::Or, std::move(a), std::move(b));
}
FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::Implies, std::move(a), std::move(b));
}
FormulaPtr iff(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::Iff, std::move(a), std::move(b));
}
static FormulaPtr quant(Formula::Kind k, const Var& x, FormulaPtr a) {
  if (x.witness) throw std::invalid_argument("quantified variable must be basic");
  Formula f;
  f.kind = k;
  f.l = std::move(a);
  f.bound = x;
  return mk_formula(std::move(f));
}
FormulaPtr forall(const Var& x, FormulaPtr a) {
  return quant(Formula::Kind::Forall, x, std::move(a));
}
FormulaPtr exists(const Var& x, FormulaPtr a) {
  return quant(Formula::Kind::Exists, x, std::move(a));
}
FormulaPtr just(TermPtr t, VarSet sub, FormulaPtr a) {
  Formula f;
  f.kind = Formula::Kind::Just;
  f.term = std::move(t);
  f.sub = std::move(sub);
  f.l = std::move(a);
  return mk_formula(std::move(f));
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::Kind::Atom:
      return a->pred == b->pred && a->args == b->args;
    case Formula::Kind::Bottom:
      return true;
    case Formula::Kind::Not:
      return equal(a->l, b->l);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return equal(a->l, b->l) && equal(a->r, b->r);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return a->bound == b->bound && equal(a->l, b->l);
    case Formula::Kind::Just:
      return a->sub == b->sub && equal(a->term, b->term) && equal(a->l, b->l);
  }
  return false;
}

size_t formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  return 1 + formula_size(f->l) + formula_size(f->r);
}

// ---------------------------------------------------------------------------
// Free variables

VarSet free_vars(const FormulaPtr& f) {
  VarSet out;
  switch (f->kind) {
    case Formula::Kind::Atom:
      out.insert(f->args.begin(), f->args.end());
      break;
    case Formula::Kind::Bottom:
      break;
    case Formula::Kind::Not:
      out = free_vars(f->l);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      out = free_vars(f->l);
      VarSet r = free_vars(f->r);
      out.insert(r.begin(), r.end());
      break;
    }
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out = free_vars(f->l);
      out.erase(f->bound);
      break;
    case Formula::Kind::Just:
      out = f->sub;  // by definition fv([t]{X} A) = X
      break;
  }
  return out;
}

VarSet witness_occurring(const FormulaPtr& f) {
  VarSet out;
  switch (f->kind) {
    case Formula::Kind::Atom:
      for (const Var& v : f->args)
        if (v.witness) out.insert(v);
      break;
    case Formula::Kind::Bottom:
      break;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out = witness_occurring(f->l);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      out = witness_occurring(f->l);
      VarSet r = witness_occurring(f->r);
      out.insert(r.begin(), r.end());
      break;
    }
    case Formula::Kind::Just:
      out = witness_occurring(f->l);
      for (const Var& v : f->sub)
        if (v.witness) out.insert(v);
      break;
  }
  return out;
}

bool is_closed(const FormulaPtr& f) {
  for (const Var& v : free_vars(f))
    if (!v.witness) return false;
  return true;
}

// ---------------------------------------------------------------------------
// free-for and substitution

bool free_for(const Var& y, const Var& x, const FormulaPtr& f) {
  if (!free_vars(f).count(x)) return true;
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
      return true;
    case Formula::Kind::Not:
      return free_for(y, x, f->l);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return free_for(y, x, f->l) && free_for(y, x, f->r);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      if (f->bound == y) return false;  // x is free here, y would be captured
      return free_for(y, x, f->l);
    case Formula::Kind::Just:
      // x is in the subscript; replacing it puts y into the subscript, which
      // must not promote existing body occurrences of y to free ones.
      if (free_vars(f->l).count(y) && !f->sub.count(y)) return false;
      return free_for(y, x, f->l);
  }
  return true;
}

static FormulaPtr replace_rec(const FormulaPtr& f, const std::map<Var, Var>& sigma) {
  if (sigma.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Atom: {
      std::vector<Var> args = f->args;
      for (Var& v : args) {
        auto it = sigma.find(v);
        if (it != sigma.end()) v = it->second;
      }
      return atom(f->pred, std::move(args));
    }
    case Formula::Kind::Bottom:
      return f;
    case Formula::Kind::Not:
      return fnot(replace_rec(f->l, sigma));
    case Formula::Kind::And:
      return fand(replace_rec(f->l, sigma), replace_rec(f->r, sigma));
    case Formula::Kind::Or:
      return forr(replace_rec(f->l, sigma), replace_rec(f->r, sigma));
    case Formula::Kind::Implies:
      return implies(replace_rec(f->l, sigma), replace_rec(f->r, sigma));
    case Formula::Kind::Iff:
      return iff(replace_rec(f->l, sigma), replace_rec(f->r, sigma));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      std::map<Var, Var> inner = sigma;
      inner.erase(f->bound);
      FormulaPtr body = replace_rec(f->l, inner);
      return f->kind == Formula::Kind::Forall ? forall(f->bound, body) : exists(f->bound, body);
    }
    case Formula::Kind::Just: {
      VarSet subs;
      for (const Var& v : f->sub) {
        auto it = sigma.find(v);
        subs.insert(it != sigma.end() ? it->second : v);
      }
      // Occurrences in the body are free only for variables in X.
      std::map<Var, Var> inner;
      for (const auto& [k, v] : sigma)
        if (f->sub.count(k)) inner.emplace(k, v);
      return just(f->term, std::move(subs), replace_rec(f->l, inner));
    }
  }
  return f;
}

FormulaPtr replace_free(const FormulaPtr& f, const std::map<Var, Var>& sigma) {
  return replace_rec(f, sigma);
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<Var, Var>& sigma) {
  VarSet fv = free_vars(f);
  for (const auto& [x, y] : sigma) {
    if (x == y || !fv.count(x)) continue;
    if (!free_for(y, x, f))
      throw CaptureError(y.str() + " is not free for " + x.str());
  }
  return replace_rec(f, sigma);
}

// ---------------------------------------------------------------------------
// Variable variants

namespace {

struct VariantScan {
  // Pairwise constraints from atom argument positions.
  std::map<Var, Var> direct;
  // Subscript constraints: active lhs variables must be mapped bijectively
  // onto the given rhs variables.
  struct SetConstraint {
    std::vector<Var> lhs;
    VarSet rhs;
  };
  std::vector<SetConstraint> sets;

  bool add_direct(const Var& a, const Var& b) {
    auto it = direct.find(a);
    if (it != direct.end()) return it->second == b;
    direct.emplace(a, b);
    return true;
  }

  // active: which variables are still substitutable at this node. nullopt
  // means "everything not bound"; bound variables are tracked separately.
  bool walk(const FormulaPtr& p, const FormulaPtr& q, const std::optional<VarSet>& active,
            const VarSet& bound) {
    if (p->kind != q->kind) return false;
    auto is_active = [&](const Var& v) {
      return !bound.count(v) && (!active || active->count(v));
    };
    switch (p->kind) {
      case Formula::Kind::Atom: {
        if (p->pred != q->pred || p->args.size() != q->args.size()) return false;
        for (size_t i = 0; i < p->args.size(); ++i) {
          if (is_active(p->args[i])) {
            if (!add_direct(p->args[i], q->args[i])) return false;
          } else if (p->args[i] != q->args[i]) {
            return false;
          }
        }
        return true;
      }
      case Formula::Kind::Bottom:
        return true;
      case Formula::Kind::Not:
        return walk(p->l, q->l, active, bound);
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
      case Formula::Kind::Iff:
        return walk(p->l, q->l, active, bound) && walk(p->r, q->r, active, bound);
      case Formula::Kind::Forall:
      case Formula::Kind::Exists: {
        if (p->bound != q->bound) return false;  // no alpha-renaming
        VarSet b2 = bound;
        b2.insert(p->bound);
        return walk(p->l, q->l, active, b2);
      }
      case Formula::Kind::Just: {
        if (!equal(p->term, q->term)) return false;
        if (p->sub.size() != q->sub.size()) return false;
        SetConstraint c;
        VarSet rhs_left = q->sub;
        for (const Var& v : p->sub) {
          if (is_active(v)) {
            c.lhs.push_back(v);
          } else {
            if (!rhs_left.count(v)) return false;  // inactive vars stay put
            rhs_left.erase(v);
          }
        }
        c.rhs = rhs_left;
        if (c.lhs.size() != c.rhs.size()) return false;
        if (!c.lhs.empty()) sets.push_back(std::move(c));
        VarSet inner_active;
        for (const Var& v : p->sub)
          if (is_active(v)) inner_active.insert(v);
        // Inside the body only subscript variables are substitutable.
        std::optional<VarSet> a2 = inner_active;
        return walk(p->l, q->l, a2, bound);
      }
    }
    return false;
  }
};

bool extend_assignment(const std::vector<VariantScan::SetConstraint>& sets, size_t ci,
                       std::map<Var, Var>& sigma, VarSet& used,
                       const std::function<bool(const std::map<Var, Var>&)>& done) {
  if (ci == sets.size()) return done(sigma);
  const auto& c = sets[ci];
  // Check already-assigned lhs variables land inside rhs; collect the rest.
  std::vector<Var> open;
  VarSet rhs_left = c.rhs;
  for (const Var& v : c.lhs) {
    auto it = sigma.find(v);
    if (it != sigma.end()) {
      if (!rhs_left.count(it->second)) return false;
      rhs_left.erase(it->second);
    } else {
      open.push_back(v);
    }
  }
  if (open.empty()) return extend_assignment(sets, ci + 1, sigma, used, done);
  // Assign the first open variable to each remaining rhs candidate.
  Var v = open.front();
  for (const Var& cand : rhs_left) {
    if (used.count(cand)) continue;
    sigma.emplace(v, cand);
    used.insert(cand);
    if (extend_assignment(sets, ci, sigma, used, done)) return true;
    used.erase(cand);
    sigma.erase(v);
  }
  return false;
}

}  // namespace

std::optional<std::map<Var, Var>> variable_variant(
    const FormulaPtr& phi, const FormulaPtr& psi,
    const std::function<bool(const Var&, const Var&)>& pair_ok) {
  VariantScan scan;
  if (!scan.walk(phi, psi, std::nullopt, {})) return std::nullopt;

  VarSet fvp = free_vars(phi), fvq = free_vars(psi);
  if (fvp.size() != fvq.size()) return std::nullopt;

  std::map<Var, Var> sigma = scan.direct;
  VarSet used;
  for (const auto& [a, b] : sigma) {
    if (used.count(b)) return std::nullopt;  // not injective
    used.insert(b);
  }

  std::optional<std::map<Var, Var>> result;
  auto finish = [&](const std::map<Var, Var>& full) {
    for (const auto& [a, b] : full)
      if (a != b && pair_ok && !pair_ok(a, b)) return false;
    try {
      if (!equal(substitute(phi, full), psi)) return false;
    } catch (const CaptureError&) {
      return false;
    }
    result = full;
    return true;
  };
  if (extend_assignment(scan.sets, 0, sigma, used, finish)) return result;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

FormulaPtr universal_closure(const FormulaPtr& f) {
  std::vector<Var> basics;
  for (const Var& v : free_vars(f))
    if (!v.witness) basics.push_back(v);
  std::sort(basics.begin(), basics.end());
  FormulaPtr out = f;
  for (auto it = basics.rbegin(); it != basics.rend(); ++it) out = forall(*it, out);
  return out;
}

}  // namespace folp
