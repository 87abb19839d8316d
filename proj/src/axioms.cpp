#include "folp/axioms.hpp"

#include <algorithm>

#include "folp/textio.hpp"

namespace folp {

const std::vector<SchemaId>& all_schemas() {
  static const std::vector<SchemaId> all = {
      SchemaId::A1_K,    SchemaId::A1_S,    SchemaId::A1_NEG,  SchemaId::A1_CP,
      SchemaId::A1_BOT,  SchemaId::A1_AND1, SchemaId::A1_AND2, SchemaId::A1_AND3,
      SchemaId::A1_OR1,  SchemaId::A1_OR2,  SchemaId::A1_OR3,  SchemaId::A1_IFF1,
      SchemaId::A1_IFF2, SchemaId::A1_IFF3, SchemaId::A1_UI,   SchemaId::A1_UD,
      SchemaId::A1_EI,   SchemaId::A1_ED,   SchemaId::A2,      SchemaId::A3,
      SchemaId::B1,      SchemaId::B2,      SchemaId::B3L,     SchemaId::B3R,
      SchemaId::B4,      SchemaId::B5,      SchemaId::Bb,      SchemaId::B6};
  return all;
}

std::string to_string(SchemaId s) {
  switch (s) {
    case SchemaId::A1_K: return "A1.K";
    case SchemaId::A1_S: return "A1.S";
    case SchemaId::A1_NEG: return "A1.NEG";
    case SchemaId::A1_CP: return "A1.CP";
    case SchemaId::A1_BOT: return "A1.BOT";
    case SchemaId::A1_AND1: return "A1.AND1";
    case SchemaId::A1_AND2: return "A1.AND2";
    case SchemaId::A1_AND3: return "A1.AND3";
    case SchemaId::A1_OR1: return "A1.OR1";
    case SchemaId::A1_OR2: return "A1.OR2";
    case SchemaId::A1_OR3: return "A1.OR3";
    case SchemaId::A1_IFF1: return "A1.IFF1";
    case SchemaId::A1_IFF2: return "A1.IFF2";
    case SchemaId::A1_IFF3: return "A1.IFF3";
    case SchemaId::A1_UI: return "A1.UI";
    case SchemaId::A1_UD: return "A1.UD";
    case SchemaId::A1_EI: return "A1.EI";
    case SchemaId::A1_ED: return "A1.ED";
    case SchemaId::A2: return "A2";
    case SchemaId::A3: return "A3";
    case SchemaId::B1: return "B1";
    case SchemaId::B2: return "B2";
    case SchemaId::B3L: return "B3L";
    case SchemaId::B3R: return "B3R";
    case SchemaId::B4: return "B4";
    case SchemaId::B5: return "B5";
    case SchemaId::Bb: return "Bb";
    case SchemaId::B6: return "B6";
  }
  return "?";
}

std::optional<SchemaId> schema_from_string(const std::string& s) {
  for (SchemaId id : all_schemas())
    if (to_string(id) == s) return id;
  return std::nullopt;
}

bool schema_in_logic(SchemaId s, Logic logic) {
  if (s == SchemaId::Bb) return logic == Logic::FOLPb;
  if (s == SchemaId::B6) return logic == Logic::FOJT45;
  return true;
}

// ---------------------------------------------------------------------------
// Structural matching

namespace {

bool as_imp(const FormulaPtr& f, FormulaPtr& a, FormulaPtr& b) {
  if (f->kind != Formula::Kind::Implies) return false;
  a = f->l;
  b = f->r;
  return true;
}

bool is_kind(const FormulaPtr& f, Formula::Kind k) { return f->kind == k; }

std::optional<MatchReport> report(SchemaId s, const std::string& inst) {
  return MatchReport{s, inst};
}

// Candidate instantiating variables for UI/EI: x itself plus the free
// variables of the instantiated side.
std::vector<Var> instance_candidates(const Var& x, const FormulaPtr& side) {
  std::vector<Var> out{x};
  for (const Var& v : free_vars(side))
    if (v != x) out.push_back(v);
  return out;
}

}  // namespace

std::optional<MatchReport> match_axiom(SchemaId schema, const FormulaPtr& phi, Logic logic) {
  if (!schema_in_logic(schema, logic)) return std::nullopt;
  FormulaPtr a, b, c, d;
  switch (schema) {
    case SchemaId::A1_K: {
      FormulaPtr rhs;
      if (!as_imp(phi, a, rhs) || !as_imp(rhs, b, c)) return std::nullopt;
      if (!equal(a, c)) return std::nullopt;
      return report(schema, "phi := " + print_formula(a));
    }
    case SchemaId::A1_S: {
      FormulaPtr l, r, l1, l2, r1, r2;
      if (!as_imp(phi, l, r)) return std::nullopt;
      FormulaPtr p1, q1r1;
      if (!as_imp(l, p1, q1r1)) return std::nullopt;
      FormulaPtr q1, r_1;
      if (!as_imp(q1r1, q1, r_1)) return std::nullopt;
      if (!as_imp(r, l1, r1)) return std::nullopt;
      FormulaPtr p2, q2, p3, r_2;
      if (!as_imp(l1, p2, q2) || !as_imp(r1, p3, r_2)) return std::nullopt;
      if (!equal(p1, p2) || !equal(p1, p3) || !equal(q1, q2) || !equal(r_1, r_2))
        return std::nullopt;
      return report(schema, "phi := " + print_formula(p1));
    }
    case SchemaId::A1_NEG: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Implies)) return std::nullopt;
      if (!is_kind(l->l, Formula::Kind::Not) || !is_kind(l->r, Formula::Kind::Not))
        return std::nullopt;
      if (!as_imp(r, a, b)) return std::nullopt;
      if (!equal(l->l->l, b) || !equal(l->r->l, a)) return std::nullopt;
      return report(schema, "phi := " + print_formula(b));
    }
    case SchemaId::A1_CP: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!as_imp(l, a, b)) return std::nullopt;
      if (!is_kind(r, Formula::Kind::Implies)) return std::nullopt;
      if (!is_kind(r->l, Formula::Kind::Not) || !is_kind(r->r, Formula::Kind::Not))
        return std::nullopt;
      if (!equal(r->l->l, b) || !equal(r->r->l, a)) return std::nullopt;
      return report(schema, "phi := " + print_formula(a));
    }
    case SchemaId::A1_BOT: {
      if (!as_imp(phi, a, b)) return std::nullopt;
      if (!is_kind(a, Formula::Kind::Bottom)) return std::nullopt;
      return report(schema, "phi := " + print_formula(b));
    }
    case SchemaId::A1_AND1:
    case SchemaId::A1_AND2: {
      if (!as_imp(phi, a, b)) return std::nullopt;
      if (!is_kind(a, Formula::Kind::And)) return std::nullopt;
      const FormulaPtr& proj = schema == SchemaId::A1_AND1 ? a->l : a->r;
      if (!equal(proj, b)) return std::nullopt;
      return report(schema, "conjunct := " + print_formula(b));
    }
    case SchemaId::A1_AND3: {
      FormulaPtr rhs;
      if (!as_imp(phi, a, rhs) || !as_imp(rhs, b, c)) return std::nullopt;
      if (!is_kind(c, Formula::Kind::And)) return std::nullopt;
      if (!equal(c->l, a) || !equal(c->r, b)) return std::nullopt;
      return report(schema, "phi := " + print_formula(a));
    }
    case SchemaId::A1_OR1:
    case SchemaId::A1_OR2: {
      if (!as_imp(phi, a, b)) return std::nullopt;
      if (!is_kind(b, Formula::Kind::Or)) return std::nullopt;
      const FormulaPtr& inj = schema == SchemaId::A1_OR1 ? b->l : b->r;
      if (!equal(inj, a)) return std::nullopt;
      return report(schema, "disjunct := " + print_formula(a));
    }
    case SchemaId::A1_OR3: {
      FormulaPtr l, rest;
      if (!as_imp(phi, l, rest)) return std::nullopt;
      if (!as_imp(l, a, c)) return std::nullopt;
      FormulaPtr m, r;
      if (!as_imp(rest, m, r)) return std::nullopt;
      FormulaPtr b2, c2;
      if (!as_imp(m, b2, c2) || !equal(c2, c)) return std::nullopt;
      FormulaPtr dis, c3;
      if (!as_imp(r, dis, c3) || !equal(c3, c)) return std::nullopt;
      if (!is_kind(dis, Formula::Kind::Or)) return std::nullopt;
      if (!equal(dis->l, a) || !equal(dis->r, b2)) return std::nullopt;
      return report(schema, "chi := " + print_formula(c));
    }
    case SchemaId::A1_IFF1:
    case SchemaId::A1_IFF2: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Iff)) return std::nullopt;
      if (!as_imp(r, a, b)) return std::nullopt;
      bool fwd = schema == SchemaId::A1_IFF1;
      if (!equal(a, fwd ? l->l : l->r) || !equal(b, fwd ? l->r : l->l)) return std::nullopt;
      return report(schema, "phi := " + print_formula(l->l));
    }
    case SchemaId::A1_IFF3: {
      FormulaPtr l, rest;
      if (!as_imp(phi, l, rest) || !as_imp(l, a, b)) return std::nullopt;
      FormulaPtr m, r;
      if (!as_imp(rest, m, r)) return std::nullopt;
      FormulaPtr b2, a2;
      if (!as_imp(m, b2, a2) || !equal(a2, a) || !equal(b2, b)) return std::nullopt;
      if (!is_kind(r, Formula::Kind::Iff)) return std::nullopt;
      if (!equal(r->l, a) || !equal(r->r, b)) return std::nullopt;
      return report(schema, "phi := " + print_formula(a));
    }
    case SchemaId::A1_UI: {
      FormulaPtr l, rhs;
      if (!as_imp(phi, l, rhs)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Forall)) return std::nullopt;
      const Var& x = l->bound;
      for (const Var& e : instance_candidates(x, rhs)) {
        if (!free_for(e, x, l->l)) continue;
        try {
          if (equal(substitute(l->l, {{x, e}}), rhs))
            return report(schema, "x := " + x.str() + ", e := " + e.str());
        } catch (const CaptureError&) {
        }
      }
      return std::nullopt;
    }
    case SchemaId::A1_UD: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Forall)) return std::nullopt;
      if (!as_imp(l->l, a, b)) return std::nullopt;
      FormulaPtr a2, all;
      if (!as_imp(r, a2, all)) return std::nullopt;
      if (!is_kind(all, Formula::Kind::Forall) || all->bound != l->bound) return std::nullopt;
      if (!equal(a, a2) || !equal(b, all->l)) return std::nullopt;
      if (free_vars(a).count(l->bound)) return std::nullopt;
      return report(schema, "x := " + l->bound.str());
    }
    case SchemaId::A1_EI: {
      FormulaPtr lhs, r;
      if (!as_imp(phi, lhs, r)) return std::nullopt;
      if (!is_kind(r, Formula::Kind::Exists)) return std::nullopt;
      const Var& x = r->bound;
      for (const Var& e : instance_candidates(x, lhs)) {
        if (!free_for(e, x, r->l)) continue;
        try {
          if (equal(substitute(r->l, {{x, e}}), lhs))
            return report(schema, "x := " + x.str() + ", e := " + e.str());
        } catch (const CaptureError&) {
        }
      }
      return std::nullopt;
    }
    case SchemaId::A1_ED: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Forall)) return std::nullopt;
      if (!as_imp(l->l, a, b)) return std::nullopt;
      FormulaPtr ex, b2;
      if (!as_imp(r, ex, b2)) return std::nullopt;
      if (!is_kind(ex, Formula::Kind::Exists) || ex->bound != l->bound) return std::nullopt;
      if (!equal(a, ex->l) || !equal(b, b2)) return std::nullopt;
      if (free_vars(b).count(l->bound)) return std::nullopt;
      return report(schema, "x := " + l->bound.str());
    }
    case SchemaId::A2: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Just) || !is_kind(r, Formula::Kind::Just))
        return std::nullopt;
      if (!equal(l->term, r->term) || !equal(l->l, r->l)) return std::nullopt;
      if (l->sub.size() != r->sub.size() + 1) return std::nullopt;
      std::optional<Var> dropped;
      for (const Var& v : l->sub) {
        if (!r->sub.count(v)) {
          if (dropped) return std::nullopt;
          dropped = v;
        }
      }
      if (!dropped) return std::nullopt;
      if (free_vars(l->l).count(*dropped)) return std::nullopt;  // y not free in body
      return report(schema, "y := " + dropped->str());
    }
    case SchemaId::A3: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Just) || !is_kind(r, Formula::Kind::Just))
        return std::nullopt;
      if (!equal(l->term, r->term) || !equal(l->l, r->l)) return std::nullopt;
      if (r->sub.size() != l->sub.size() + 1) return std::nullopt;
      std::optional<Var> added;
      for (const Var& v : r->sub) {
        if (!l->sub.count(v)) {
          if (added) return std::nullopt;
          added = v;
        }
      }
      if (!added) return std::nullopt;
      return report(schema, "y := " + added->str());
    }
    case SchemaId::B1: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Just) || !equal(l->l, r)) return std::nullopt;
      return report(schema, "t := " + print_term(l->term));
    }
    case SchemaId::B2: {
      FormulaPtr l, rest;
      if (!as_imp(phi, l, rest)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Just) || !is_kind(l->l, Formula::Kind::Implies))
        return std::nullopt;
      FormulaPtr m, r;
      if (!as_imp(rest, m, r)) return std::nullopt;
      if (!is_kind(m, Formula::Kind::Just) || !is_kind(r, Formula::Kind::Just))
        return std::nullopt;
      if (r->term->kind != Term::Kind::App) return std::nullopt;
      if (!equal(r->term->a, l->term) || !equal(r->term->b, m->term)) return std::nullopt;
      if (l->sub != m->sub || l->sub != r->sub) return std::nullopt;
      if (!equal(l->l->l, m->l) || !equal(l->l->r, r->l)) return std::nullopt;
      return report(schema, "t := " + print_term(l->term) + ", s := " + print_term(m->term));
    }
    case SchemaId::B3L:
    case SchemaId::B3R: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Just) || !is_kind(r, Formula::Kind::Just))
        return std::nullopt;
      if (r->term->kind != Term::Kind::Sum) return std::nullopt;
      const TermPtr& side = schema == SchemaId::B3L ? r->term->a : r->term->b;
      if (!equal(side, l->term)) return std::nullopt;
      if (l->sub != r->sub || !equal(l->l, r->l)) return std::nullopt;
      return report(schema, "sum := " + print_term(r->term));
    }
    case SchemaId::B4: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Just) || !is_kind(r, Formula::Kind::Just))
        return std::nullopt;
      if (r->term->kind != Term::Kind::Bang || !equal(r->term->a, l->term)) return std::nullopt;
      if (l->sub != r->sub) return std::nullopt;
      if (!equal(r->l, l)) return std::nullopt;  // body of !t is the whole antecedent
      return report(schema, "t := " + print_term(l->term));
    }
    case SchemaId::B5: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Just) || !is_kind(r, Formula::Kind::Just))
        return std::nullopt;
      if (r->term->kind != Term::Kind::Gen || !equal(r->term->a, l->term)) return std::nullopt;
      if (l->sub != r->sub) return std::nullopt;
      if (!is_kind(r->l, Formula::Kind::Forall)) return std::nullopt;
      if (r->l->bound != r->term->bound) return std::nullopt;
      if (!equal(r->l->l, l->l)) return std::nullopt;
      if (l->sub.count(r->term->bound)) return std::nullopt;  // x not in X
      return report(schema, "x := " + r->term->bound.str());
    }
    case SchemaId::Bb: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Forall)) return std::nullopt;
      const Var& y = l->bound;
      const FormulaPtr& lj = l->l;
      if (!is_kind(lj, Formula::Kind::Just) || !is_kind(r, Formula::Kind::Just))
        return std::nullopt;
      if (r->term->kind != Term::Kind::Bar || !equal(r->term->a, lj->term)) return std::nullopt;
      if (!is_kind(r->l, Formula::Kind::Forall) || r->l->bound != y) return std::nullopt;
      if (!equal(r->l->l, lj->l)) return std::nullopt;
      if (r->sub.count(y)) return std::nullopt;  // y not in X
      VarSet xy = r->sub;
      xy.insert(y);
      if (lj->sub != xy) return std::nullopt;
      return report(schema, "y := " + y.str());
    }
    case SchemaId::B6: {
      FormulaPtr l, r;
      if (!as_imp(phi, l, r)) return std::nullopt;
      if (!is_kind(l, Formula::Kind::Not) || !is_kind(l->l, Formula::Kind::Just))
        return std::nullopt;
      if (!is_kind(r, Formula::Kind::Just)) return std::nullopt;
      if (r->term->kind != Term::Kind::Query || !equal(r->term->a, l->l->term))
        return std::nullopt;
      if (r->sub != l->l->sub) return std::nullopt;
      if (!equal(r->l, l)) return std::nullopt;  // body of ?t is the whole antecedent
      return report(schema, "t := " + print_term(l->l->term));
    }
  }
  return std::nullopt;
}

std::optional<MatchReport> match_any_axiom(const FormulaPtr& phi, Logic logic) {
  for (SchemaId s : all_schemas()) {
    auto m = match_axiom(s, phi, logic);
    if (m) return m;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constant specifications

std::string schematic_constant_name(SchemaId s) {
  std::string n = to_string(s);
  if (n.rfind("A1.", 0) == 0) n = n.substr(3);
  std::replace(n.begin(), n.end(), '.', '_');
  return "c_" + n;
}

ConstantSpecification ConstantSpecification::schematic() {
  ConstantSpecification cs;
  cs.mode = Mode::Schematic;
  for (SchemaId s : all_schemas()) cs.schema_constants[s] = schematic_constant_name(s);
  return cs;
}

ConstantSpecification ConstantSpecification::explicit_list(
    std::vector<std::pair<std::string, FormulaPtr>> entries) {
  ConstantSpecification cs;
  cs.mode = Mode::Explicit;
  cs.entries = std::move(entries);
  return cs;
}

const std::string& ConstantSpecification::constant_for(SchemaId s) const {
  auto it = schema_constants.find(s);
  if (it == schema_constants.end())
    throw UnknownConstant("no constant assigned to schema " + to_string(s));
  return it->second;
}

namespace {

std::optional<SchemaId> schema_of_constant(const ConstantSpecification& cs,
                                           const std::string& c) {
  for (const auto& [s, name] : cs.schema_constants)
    if (name == c) return s;
  return std::nullopt;
}

// Is psi obtained from phi by injectively replacing some free basic variables
// with witness variables?
bool witness_replacement_of(const FormulaPtr& phi, const FormulaPtr& psi) {
  auto ok = [](const Var& a, const Var& b) { return !a.witness && b.witness; };
  return variable_variant(phi, psi, ok).has_value();
}

}  // namespace

bool cs_contains(const ConstantSpecification& cs, const std::string& c, const FormulaPtr& phi,
                 Logic logic) {
  if (cs.mode == ConstantSpecification::Mode::Schematic) {
    auto s = schema_of_constant(cs, c);
    if (!s) throw UnknownConstant("constant not in schematic specification: " + c);
    return match_axiom(*s, phi, logic).has_value();
  }
  for (const auto& [name, f] : cs.entries)
    if (name == c && equal(f, phi)) return true;
  return false;
}

bool csv_contains(const ConstantSpecification& cs, const std::string& c, const FormulaPtr& psi,
                  Logic logic) {
  if (cs.mode == ConstantSpecification::Mode::Schematic) {
    // Schemas range over arbitrary formulas, so witness instances match
    // directly; nothing extra to do.
    return cs_contains(cs, c, psi, logic);
  }
  for (const auto& [name, f] : cs.entries) {
    if (name != c) continue;
    if (equal(f, psi) || witness_replacement_of(f, psi)) return true;
  }
  return false;
}

bool is_variant_closed(const ConstantSpecification& cs) {
  if (cs.mode == ConstantSpecification::Mode::Schematic) return true;
  auto present = [&](const std::string& c, const FormulaPtr& f) {
    for (const auto& [name, g] : cs.entries)
      if (name == c && equal(g, f)) return true;
    return false;
  };
  for (const auto& [c1, f1] : cs.entries) {
    for (const auto& [c2, f2] : cs.entries) {
      if (equal(f1, f2)) continue;
      if (variable_variant(f1, f2).has_value()) {
        if (!present(c1, f2) || !present(c2, f1)) return false;
      }
    }
  }
  return true;
}

}  // namespace folp
