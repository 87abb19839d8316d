#include "folp/harness.hpp"

#include <algorithm>

namespace folp {

namespace {

size_t pick(Rng& rng, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng) { return pick(rng, 2) == 0; }

Var basic(size_t i) { return Var{"x" + std::to_string(i), false}; }
Var witness(size_t i) { return Var{"a" + std::to_string(i), true}; }

VarSet random_subscript(Rng& rng, size_t domain_size) {
  VarSet x;
  for (size_t i = 0; i < domain_size && i < 2; ++i)
    if (coin(rng)) x.insert(witness(i));
  return x;
}

}  // namespace

Rng trial_rng(const GenConfig& cfg, size_t trial) {
  uint64_t s = cfg.seed;
  s ^= 0x9e3779b97f4a7c15ULL * (trial + 1);
  s ^= static_cast<uint64_t>(cfg.logic) << 32;
  return Rng(s);
}

TermPtr gen_term(Rng& rng, const GenConfig& cfg, size_t depth) {
  if (depth == 0 || pick(rng, 4) == 0)
    return jvar("p" + std::to_string(pick(rng, 3)));
  switch (pick(rng, 6)) {
    case 0:
      return app(gen_term(rng, cfg, depth - 1), gen_term(rng, cfg, depth - 1));
    case 1:
      return sum(gen_term(rng, cfg, depth - 1), gen_term(rng, cfg, depth - 1));
    case 2:
      return bang(gen_term(rng, cfg, depth - 1));
    case 3:
      return gen(basic(pick(rng, 2)), gen_term(rng, cfg, depth - 1));
    default:
      if (cfg.logic == Logic::FOJT45) return query(gen_term(rng, cfg, depth - 1));
      return bar(gen_term(rng, cfg, depth - 1));
  }
}

FormulaPtr gen_formula(Rng& rng, const GenConfig& cfg, size_t depth, size_t domain_size) {
  auto var = [&]() -> Var {
    // Mix witness members, free basic variables and (inside quantifiers)
    // bound occurrences.
    if (coin(rng)) return witness(pick(rng, std::max<size_t>(domain_size, 1)));
    return basic(pick(rng, 2));
  };
  if (depth == 0 || pick(rng, 5) == 0) {
    switch (pick(rng, 4)) {
      case 0:
        return atom("Q");
      case 1:
        return atom("R", {var(), var()});
      case 2:
        return bottom();
      default:
        return atom("P", {var()});
    }
  }
  switch (pick(rng, 8)) {
    case 0:
      return fnot(gen_formula(rng, cfg, depth - 1, domain_size));
    case 1:
      return fand(gen_formula(rng, cfg, depth - 1, domain_size),
                  gen_formula(rng, cfg, depth - 1, domain_size));
    case 2:
      return forr(gen_formula(rng, cfg, depth - 1, domain_size),
                  gen_formula(rng, cfg, depth - 1, domain_size));
    case 3:
    case 4:
      return implies(gen_formula(rng, cfg, depth - 1, domain_size),
                     gen_formula(rng, cfg, depth - 1, domain_size));
    case 5:
      return forall(basic(pick(rng, 2)), gen_formula(rng, cfg, depth - 1, domain_size));
    case 6:
      return exists(basic(pick(rng, 2)), gen_formula(rng, cfg, depth - 1, domain_size));
    default:
      return just(gen_term(rng, cfg, std::min<size_t>(cfg.max_term_depth, depth)),
                  random_subscript(rng, domain_size),
                  gen_formula(rng, cfg, depth - 1, domain_size));
  }
}

FittingModel gen_model(Rng& rng, const GenConfig& cfg) {
  FittingModel m;
  m.logic = cfg.logic;
  size_t nw = 1 + pick(rng, cfg.max_worlds);
  size_t nd = 1 + pick(rng, cfg.max_domain);
  for (size_t i = 0; i < nw; ++i) m.worlds.push_back("w" + std::to_string(i));
  for (size_t i = 0; i < nd; ++i) m.domain.push_back("a" + std::to_string(i));
  for (const std::string& w : m.worlds) m.rel.insert({w, w});
  size_t extra = pick(rng, nw * nw + 1);
  for (size_t i = 0; i < extra; ++i)
    m.rel.insert({m.worlds[pick(rng, nw)], m.worlds[pick(rng, nw)]});
  if (cfg.logic == Logic::FOJT45 && cfg.fault != FaultMode::NonSymmetricR) {
    auto snapshot = m.rel;
    for (const auto& [u, v] : snapshot) m.rel.insert({v, u});
  }
  if (cfg.fault != FaultMode::NonTransitiveR) {
    bool grew = true;
    while (grew) {
      grew = false;
      auto snapshot = m.rel;
      for (const auto& [u, v] : snapshot)
        for (const auto& [x, y] : snapshot)
          if (v == x && m.rel.insert({u, y}).second) grew = true;
    }
  }
  for (const std::string& w : m.worlds) {
    if (coin(rng)) m.interp[{"Q", w}].insert(std::vector<std::string>{});
    for (const std::string& d : m.domain)
      if (coin(rng)) m.interp[{"P", w}].insert({d});
    size_t pairs = pick(rng, 3);
    for (size_t i = 0; i < pairs; ++i)
      m.interp[{"R", w}].insert({m.domain[pick(rng, nd)], m.domain[pick(rng, nd)]});
  }
  if (cfg.fault == FaultMode::DropEvidenceRFold) {
    // A table that forgets to propagate evidence along R.
    m.evidence.mode = EvidenceSpec::Mode::Table;
    FormulaPtr q = atom("Q");
    for (const std::string& w : m.worlds) m.interp[{"Q", w}].insert(std::vector<std::string>{});
    m.evidence.entries = {
        {jvar("p0"), q, {m.worlds[0]}},
        {bang(jvar("p0")), just(jvar("p0"), {}, q), {m.worlds[0]}},
    };
  } else if (cfg.logic == Logic::FOLPb && coin(rng)) {
    m.evidence.mode = EvidenceSpec::Mode::Closure;
    size_t nbase = pick(rng, 4);
    for (size_t i = 0; i < nbase; ++i)
      m.evidence.base.push_back({gen_term(rng, cfg, 1), gen_formula(rng, cfg, 2, nd),
                                 m.worlds[pick(rng, nw)]});
  } else {
    m.evidence.mode = EvidenceSpec::Mode::Full;
  }
  if (cfg.fault == FaultMode::None) {
    AuditReport r =
        audit(m, {.exempt_strong_evidence = cfg.logic == Logic::FOJT45});
    if (!r.pass)
      throw std::logic_error("generated model failed audit: " +
                             r.violations.front().condition + " (" +
                             r.violations.front().instance + ")");
  }
  return m;
}

FormulaPtr gen_axiom_instance(Rng& rng, const GenConfig& cfg, SchemaId schema,
                              size_t domain_size) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    size_t nd = std::max<size_t>(domain_size ? domain_size : cfg.max_domain, 1);
    auto f = [&](size_t d) { return gen_formula(rng, cfg, d, nd); };
    FormulaPtr a = f(2), b = f(2), c = f(1);
    TermPtr t = gen_term(rng, cfg, cfg.max_term_depth);
    TermPtr s = gen_term(rng, cfg, cfg.max_term_depth);
    VarSet x = random_subscript(rng, nd);
    Var u = basic(0), v = basic(1);
    FormulaPtr inst;
    switch (schema) {
      case SchemaId::A1_K:
        inst = implies(a, implies(b, a));
        break;
      case SchemaId::A1_S:
        inst = implies(implies(a, implies(b, c)),
                       implies(implies(a, b), implies(a, c)));
        break;
      case SchemaId::A1_NEG:
        inst = implies(implies(fnot(b), fnot(a)), implies(a, b));
        break;
      case SchemaId::A1_CP:
        inst = implies(implies(a, b), implies(fnot(b), fnot(a)));
        break;
      case SchemaId::A1_BOT:
        inst = implies(bottom(), a);
        break;
      case SchemaId::A1_AND1:
        inst = implies(fand(a, b), a);
        break;
      case SchemaId::A1_AND2:
        inst = implies(fand(a, b), b);
        break;
      case SchemaId::A1_AND3:
        inst = implies(a, implies(b, fand(a, b)));
        break;
      case SchemaId::A1_OR1:
        inst = implies(a, forr(a, b));
        break;
      case SchemaId::A1_OR2:
        inst = implies(b, forr(a, b));
        break;
      case SchemaId::A1_OR3:
        inst = implies(implies(a, c), implies(implies(b, c), implies(forr(a, b), c)));
        break;
      case SchemaId::A1_IFF1:
        inst = implies(iff(a, b), implies(a, b));
        break;
      case SchemaId::A1_IFF2:
        inst = implies(iff(a, b), implies(b, a));
        break;
      case SchemaId::A1_IFF3:
        inst = implies(implies(a, b), implies(implies(b, a), iff(a, b)));
        break;
      case SchemaId::A1_UI: {
        Var e = coin(rng) ? Var(witness(pick(rng, nd))) : u;
        try {
          inst = implies(forall(u, a), substitute(a, {{u, e}}));
        } catch (const CaptureError&) {
          continue;
        }
        break;
      }
      case SchemaId::A1_UD:
        if (free_vars(a).count(u)) continue;
        inst = implies(forall(u, implies(a, b)), implies(a, forall(u, b)));
        break;
      case SchemaId::A1_EI: {
        Var e = coin(rng) ? Var(witness(pick(rng, nd))) : u;
        try {
          inst = implies(substitute(a, {{u, e}}), exists(u, a));
        } catch (const CaptureError&) {
          continue;
        }
        break;
      }
      case SchemaId::A1_ED:
        if (free_vars(b).count(u)) continue;
        inst = implies(forall(u, implies(a, b)), implies(exists(u, a), b));
        break;
      case SchemaId::A2: {
        Var dropped = coin(rng) ? Var(witness(nd - 1)) : v;
        if (free_vars(a).count(dropped) || x.count(dropped)) continue;
        VarSet xs = x;
        xs.insert(dropped);
        inst = implies(just(t, xs, a), just(t, x, a));
        break;
      }
      case SchemaId::A3: {
        Var added = coin(rng) ? Var(witness(nd - 1)) : v;
        if (x.count(added)) continue;
        VarSet xs = x;
        xs.insert(added);
        inst = implies(just(t, x, a), just(t, xs, a));
        break;
      }
      case SchemaId::B1:
        inst = implies(just(t, x, a), a);
        break;
      case SchemaId::B2:
        inst = implies(just(t, x, implies(a, b)),
                       implies(just(s, x, a), just(app(t, s), x, b)));
        break;
      case SchemaId::B3L:
        inst = implies(just(t, x, a), just(sum(t, s), x, a));
        break;
      case SchemaId::B3R:
        inst = implies(just(s, x, a), just(sum(t, s), x, a));
        break;
      case SchemaId::B4:
        inst = implies(just(t, x, a), just(bang(t), x, just(t, x, a)));
        break;
      case SchemaId::B5:
        if (x.count(u)) continue;
        inst = implies(just(t, x, a), just(gen(u, t), x, forall(u, a)));
        break;
      case SchemaId::Bb: {
        if (x.count(v)) continue;
        VarSet xy = x;
        xy.insert(v);
        inst = implies(forall(v, just(t, xy, a)), just(bar(t), x, forall(v, a)));
        break;
      }
      case SchemaId::B6:
        inst = implies(fnot(just(t, x, a)),
                       just(query(t), x, fnot(just(t, x, a))));
        break;
    }
    if (inst && match_axiom(schema, inst, cfg.logic)) return inst;
  }
  throw std::logic_error("gen_axiom_instance: no instance after 100 attempts for " +
                         to_string(schema));
}

namespace {

// A theorem for a soundness trial. Kinds > 0 produce conclusions of
// transformer-built derivations (these mention schematic constants, so their
// models must carry full evidence).
FormulaPtr gen_theorem(Rng& rng, const GenConfig& cfg, size_t domain_size,
                       bool& needs_full_evidence) {
  ConstantSpecification cs = ConstantSpecification::schematic();
  size_t kind = pick(rng, 10);
  if (cfg.fault == FaultMode::NonTransitiveR || cfg.fault == FaultMode::DropEvidenceRFold) {
    // Positive-introspection probe matching the crafted evidence table.
    needs_full_evidence = cfg.fault == FaultMode::NonTransitiveR;
    FormulaPtr q = just(jvar("p0"), {}, atom("Q"));
    return implies(q, just(bang(jvar("p0")), {}, q));
  }
  if (cfg.fault == FaultMode::NonSymmetricR) {
    needs_full_evidence = true;
    FormulaPtr q = just(jvar("p0"), {}, atom("Q"));
    return implies(fnot(q), just(query(jvar("p0")), {}, fnot(q)));
  }
  needs_full_evidence = kind >= 7;
  switch (kind) {
    case 7: {  // converse Barcan conclusion
      TermPtr t = gen_term(rng, cfg, 1);
      VarSet x = random_subscript(rng, domain_size);
      Var y = basic(0);
      FormulaPtr phi = gen_formula(rng, cfg, 2, domain_size);
      Synthesized s = converse_barcan(t, x, y, phi, cfg.logic);
      return s.derivation.conclusion();
    }
    case 8: {  // internalized tautology
      FormulaPtr a = gen_formula(rng, cfg, 1, domain_size);
      FormulaPtr taut = coin(rng) ? implies(a, a) : forr(a, fnot(a));
      Derivation d = prove_tautology(cfg.logic, cs, taut);
      return internalize(d).derivation.conclusion();
    }
    case 9: {  // combined instantiation-set members
      FormulaPtr phi = gen_formula(rng, cfg, 1, domain_size);
      VarSet x = witness_occurring(phi);
      std::vector<FormulaPtr> psis;
      size_t k = 1 + pick(rng, 2);
      for (size_t i = 0; i < k; ++i)
        psis.push_back(just(gen_term(rng, cfg, 1), x, phi));
      TemplateResult r = combine(tbox(tletter(0)), {phi}, psis, cfg.logic);
      return r.derivation.conclusion();
    }
    default: {
      std::vector<SchemaId> pool;
      for (SchemaId sid : all_schemas())
        if (schema_in_logic(sid, cfg.logic)) pool.push_back(sid);
      return gen_axiom_instance(rng, cfg, pool[pick(rng, pool.size())], domain_size);
    }
  }
}

}  // namespace

SoundnessReport run_soundness(const GenConfig& cfg) {
  SoundnessReport rep;
  for (size_t i = 0; i < cfg.trials; ++i) {
    Rng rng = trial_rng(cfg, i);
    FittingModel m = gen_model(rng, cfg);
    bool needs_full = false;
    FormulaPtr theorem = gen_theorem(rng, cfg, m.domain.size(), needs_full);
    if (needs_full && m.evidence.mode != EvidenceSpec::Mode::Full) {
      m.evidence.mode = EvidenceSpec::Mode::Full;
      m.evidence.base.clear();
      m.evidence.entries.clear();
    }
    ++rep.trials;
    bool ok = false;
    std::string note;
    try {
      ok = valid(m, theorem);
    } catch (const SemanticsError& e) {
      note = std::string("; error: ") + e.what();
    }
    if (!ok) {
      ++rep.violations;
      if (rep.counterexample.empty())
        rep.counterexample = print_model(m) + "formula " + print_formula(theorem) +
                             note + "\n";
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Brute-force instantiation-set enumeration

namespace {

std::vector<TermPtr> enumerate_terms(size_t depth) {
  std::vector<TermPtr> atoms = {jvar("p0"), jvar("p1"), jconst("c0")};
  std::vector<std::vector<TermPtr>> by_depth = {atoms};
  for (size_t d = 1; d <= depth; ++d) {
    std::vector<TermPtr> next = by_depth[d - 1];
    const std::vector<TermPtr>& prev = by_depth[d - 1];
    for (const TermPtr& a : prev) {
      next.push_back(bang(a));
      next.push_back(query(a));
      next.push_back(bar(a));
      next.push_back(gen(Var{"x0", false}, a));
      for (const TermPtr& b : prev) {
        next.push_back(app(a, b));
        next.push_back(sum(a, b));
      }
    }
    by_depth.push_back(std::move(next));
  }
  return by_depth[depth];
}

}  // namespace

std::vector<FormulaPtr> brute_member(const TemplatePtr& f,
                                     const std::vector<FormulaPtr>& phis,
                                     size_t term_depth, size_t budget) {
  std::vector<TermPtr> terms = enumerate_terms(term_depth);
  std::function<std::vector<FormulaPtr>(const TemplatePtr&)> go =
      [&](const TemplatePtr& g) -> std::vector<FormulaPtr> {
    std::vector<FormulaPtr> out;
    auto grow = [&](FormulaPtr h) {
      out.push_back(std::move(h));
      if (out.size() > budget) throw BudgetExceeded("instantiation-set enumeration");
    };
    switch (g->kind) {
      case Template::Kind::Letter:
        if (g->letter >= phis.size())
          throw ArityMismatch("letter p" + std::to_string(g->letter) + " unbound");
        grow(phis[g->letter]);
        break;
      case Template::Kind::Not:
        for (const FormulaPtr& h : go(g->a)) grow(fnot(h));
        break;
      case Template::Kind::And:
        for (const FormulaPtr& l : go(g->a))
          for (const FormulaPtr& r : go(g->b)) grow(fand(l, r));
        break;
      case Template::Kind::Or:
        for (const FormulaPtr& l : go(g->a))
          for (const FormulaPtr& r : go(g->b)) grow(forr(l, r));
        break;
      case Template::Kind::Box:
        for (const FormulaPtr& h : go(g->a)) {
          VarSet x = witness_occurring(h);
          for (const TermPtr& t : terms) grow(just(t, x, h));
        }
        break;
    }
    return out;
  };
  std::vector<FormulaPtr> all = go(f);
  std::vector<FormulaPtr> dedup;
  std::set<std::string> seen;
  for (const FormulaPtr& h : all)
    if (seen.insert(print_formula(h)).second) dedup.push_back(h);
  return dedup;
}

}  // namespace folp
