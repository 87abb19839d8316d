#include "folp/templates.hpp"

#include <cctype>

#include "folp/textio.hpp"

namespace folp {

namespace {

TemplatePtr mk(Template t) { return std::make_shared<const Template>(std::move(t)); }

void check_disjoint(const TemplatePtr& a, const TemplatePtr& b) {
  std::set<size_t> la = letters_of(a);
  for (size_t i : letters_of(b))
    if (la.count(i))
      throw TemplateError("letter p" + std::to_string(i) + " occurs more than once");
}

}  // namespace

TemplatePtr tletter(size_t i) {
  Template t;
  t.kind = Template::Kind::Letter;
  t.letter = i;
  return mk(std::move(t));
}

TemplatePtr tnot(TemplatePtr a) {
  Template t;
  t.kind = Template::Kind::Not;
  t.a = std::move(a);
  return mk(std::move(t));
}

TemplatePtr tand(TemplatePtr a, TemplatePtr b) {
  check_disjoint(a, b);
  Template t;
  t.kind = Template::Kind::And;
  t.a = std::move(a);
  t.b = std::move(b);
  return mk(std::move(t));
}

TemplatePtr tor(TemplatePtr a, TemplatePtr b) {
  check_disjoint(a, b);
  Template t;
  t.kind = Template::Kind::Or;
  t.a = std::move(a);
  t.b = std::move(b);
  return mk(std::move(t));
}

TemplatePtr tbox(TemplatePtr a) {
  Template t;
  t.kind = Template::Kind::Box;
  t.a = std::move(a);
  return mk(std::move(t));
}

size_t degree(const TemplatePtr& f) {
  switch (f->kind) {
    case Template::Kind::Letter: return 0;
    case Template::Kind::Not:
    case Template::Kind::Box: return 1 + degree(f->a);
    case Template::Kind::And:
    case Template::Kind::Or: return 1 + degree(f->a) + degree(f->b);
  }
  return 0;
}

bool is_positive(const TemplatePtr& f) {
  switch (f->kind) {
    case Template::Kind::Letter: return true;
    case Template::Kind::Not: return false;
    case Template::Kind::Box: return is_positive(f->a);
    case Template::Kind::And:
    case Template::Kind::Or: return is_positive(f->a) && is_positive(f->b);
  }
  return true;
}

bool is_disjunctive(const TemplatePtr& f) {
  switch (f->kind) {
    case Template::Kind::Letter: return true;
    case Template::Kind::Not:
    case Template::Kind::And: return false;
    case Template::Kind::Box: return is_disjunctive(f->a);
    case Template::Kind::Or: return is_disjunctive(f->a) && is_disjunctive(f->b);
  }
  return true;
}

std::set<size_t> letters_of(const TemplatePtr& f) {
  switch (f->kind) {
    case Template::Kind::Letter: return {f->letter};
    case Template::Kind::Not:
    case Template::Kind::Box: return letters_of(f->a);
    case Template::Kind::And:
    case Template::Kind::Or: {
      std::set<size_t> s = letters_of(f->a);
      std::set<size_t> t = letters_of(f->b);
      s.insert(t.begin(), t.end());
      return s;
    }
  }
  return {};
}

size_t letter_count(const TemplatePtr& f) {
  std::set<size_t> s = letters_of(f);
  return s.empty() ? 0 : *s.rbegin() + 1;
}

bool equal(const TemplatePtr& a, const TemplatePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Template::Kind::Letter: return a->letter == b->letter;
    case Template::Kind::Not:
    case Template::Kind::Box: return equal(a->a, b->a);
    case Template::Kind::And:
    case Template::Kind::Or: return equal(a->a, b->a) && equal(a->b, b->b);
  }
  return false;
}

// --------------------------------------------------------------------------
// Concrete syntax: F ::= pN | ~F | (F & F) | (F | F) | box F

namespace {

struct TParser {
  const std::string& s;
  size_t pos = 0;

  void ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  [[noreturn]] void fail(const std::string& msg, const std::string& expected = "") {
    throw ParseError(msg, {1, pos + 1, 1}, expected);
  }
  bool eat(char c) {
    ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool word(const char* w) {
    ws();
    size_t n = std::string(w).size();
    if (s.compare(pos, n, w) != 0) return false;
    char after = pos + n < s.size() ? s[pos + n] : ' ';
    if (std::isalnum(static_cast<unsigned char>(after))) return false;
    pos += n;
    return true;
  }

  TemplatePtr parse() {
    ws();
    if (eat('(')) {
      TemplatePtr a = parse();
      ws();
      char op = pos < s.size() ? s[pos] : 0;
      if (op != '&' && op != '|') fail("expected '&' or '|'", "& |");
      ++pos;
      TemplatePtr b = parse();
      if (!eat(')')) fail("expected ')'", ")");
      return op == '&' ? tand(a, b) : tor(a, b);
    }
    if (eat('~')) return tnot(parse());
    if (word("box")) return tbox(parse());
    ws();
    if (pos < s.size() && s[pos] == 'p') {
      size_t start = ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) fail("expected a letter index after 'p'", "p<digits>");
      return tletter(std::stoul(s.substr(start, pos - start)));
    }
    fail("expected a template", "pN | ~F | (F & F) | (F | F) | box F");
  }
};

}  // namespace

TemplatePtr parse_template(const std::string& text) {
  TParser p{text};
  TemplatePtr f = p.parse();
  p.ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

std::string print_template(const TemplatePtr& f) {
  switch (f->kind) {
    case Template::Kind::Letter: return "p" + std::to_string(f->letter);
    case Template::Kind::Not: return "~" + print_template(f->a);
    case Template::Kind::And:
      return "(" + print_template(f->a) + " & " + print_template(f->b) + ")";
    case Template::Kind::Or:
      return "(" + print_template(f->a) + " | " + print_template(f->b) + ")";
    case Template::Kind::Box: return "box " + print_template(f->a);
  }
  return "?";
}

// --------------------------------------------------------------------------
// Instantiation-set membership

bool member(const TemplatePtr& f, const std::vector<FormulaPtr>& phis,
            const FormulaPtr& psi) {
  if (letter_count(f) > phis.size())
    throw ArityMismatch("template needs " + std::to_string(letter_count(f)) +
                        " bound letters, got " + std::to_string(phis.size()));
  switch (f->kind) {
    case Template::Kind::Letter:
      return equal(psi, phis[f->letter]);
    case Template::Kind::Not:
      return psi->kind == Formula::Kind::Not && member(f->a, phis, psi->l);
    case Template::Kind::And:
      return psi->kind == Formula::Kind::And && member(f->a, phis, psi->l) &&
             member(f->b, phis, psi->r);
    case Template::Kind::Or:
      return psi->kind == Formula::Kind::Or && member(f->a, phis, psi->l) &&
             member(f->b, phis, psi->r);
    case Template::Kind::Box:
      return psi->kind == Formula::Kind::Just &&
             psi->sub == witness_occurring(psi->l) && member(f->a, phis, psi->l);
  }
  return false;
}

// --------------------------------------------------------------------------
// Transformer plumbing

namespace {

// From step i proving A -> [u]{X} body, produce A -> [u]{Y} body by chaining
// A2 (drop) / A3 (add) axiom implications with syllogisms.
size_t imp_retarget(DerivationBuilder& b, size_t i, const VarSet& target) {
  FormulaPtr j = b.formula(i)->r;
  VarSet start = j->sub;
  for (const Var& v : start) {
    if (target.count(v)) continue;
    VarSet next = j->sub;
    next.erase(v);
    FormulaPtr g = just(j->term, next, j->l);
    i = b.syll(i, b.ax(SchemaId::A2, implies(j, g)));
    j = g;
  }
  for (const Var& v : target) {
    if (j->sub.count(v)) continue;
    VarSet next = j->sub;
    next.insert(v);
    FormulaPtr g = just(j->term, next, j->l);
    i = b.syll(i, b.ax(SchemaId::A3, implies(j, g)));
    j = g;
  }
  return i;
}

// Internalize a closed theorem of (body -> head) and lift its subscript to X.
// Returns the justification term and the index of [s]{X}(body -> head).
std::pair<TermPtr, size_t> intern_at(DerivationBuilder& b, const Derivation& thm,
                                     const VarSet& X) {
  Synthesized s = internalize(thm);
  size_t i = b.append(s.derivation);
  return {s.term, b.a3_lift(i, X)};
}

// Prove fs[j] -> (fs[0] | ... | fs[k-1]) (left-nested), axioms + MP only.
size_t inject(DerivationBuilder& b, size_t j, const std::vector<FormulaPtr>& fs) {
  std::vector<FormulaPtr> pre(fs.size());
  pre[0] = fs[0];
  for (size_t m = 1; m < fs.size(); ++m) pre[m] = forr(pre[m - 1], fs[m]);
  size_t i;
  if (j == 0) {
    i = b.prove_id(fs[0]);
  } else {
    i = b.ax(SchemaId::A1_OR2, implies(fs[j], pre[j]));
  }
  for (size_t m = j == 0 ? 1 : j + 1; m < fs.size(); ++m)
    i = b.syll(i, b.ax(SchemaId::A1_OR1, implies(pre[m - 1], pre[m])));
  return i;
}

// Given idxs[j] proving fs[j] -> goal, fold to (fs[0] | ... | fs[k-1]) -> goal.
size_t fold_or(DerivationBuilder& b, const std::vector<size_t>& idxs,
               const std::vector<FormulaPtr>& fs, const FormulaPtr& goal) {
  size_t cur = idxs[0];
  FormulaPtr pre = fs[0];
  for (size_t m = 1; m < fs.size(); ++m) {
    FormulaPtr next = forr(pre, fs[m]);
    size_t o3 = b.ax(SchemaId::A1_OR3,
                     implies(implies(pre, goal),
                             implies(implies(fs[m], goal), implies(next, goal))));
    cur = b.mp(idxs[m], b.mp(cur, o3));
    pre = next;
  }
  return cur;
}

}  // namespace

// --------------------------------------------------------------------------
// Semi-replacement

namespace {

TemplateResult semi_rec(const TemplatePtr& f, const Derivation& imp, size_t q,
                        const std::vector<FormulaPtr>& phis, const FormulaPtr& phi) {
  const FormulaPtr& chi_to_psi = imp.conclusion();
  switch (f->kind) {
    case Template::Kind::Letter: {
      if (f->letter == q) return {chi_to_psi->r, imp};
      DerivationBuilder b(imp.logic, imp.cs);
      return {phi, b.take(b.prove_id(phi))};
    }
    case Template::Kind::And:
    case Template::Kind::Or: {
      TemplateResult l = semi_rec(f->a, imp, q, phis, phi->l);
      TemplateResult r = semi_rec(f->b, imp, q, phis, phi->r);
      bool conj = f->kind == Template::Kind::And;
      FormulaPtr theta =
          conj ? fand(l.theta, r.theta) : forr(l.theta, r.theta);
      DerivationBuilder b(imp.logic, imp.cs);
      size_t i1 = b.append(l.derivation);
      size_t i2 = b.append(r.derivation);
      size_t t = b.taut(implies(phi, theta), {i1, i2});
      return {theta, b.take(t)};
    }
    case Template::Kind::Box: {
      TemplateResult child = semi_rec(f->a, imp, q, phis, phi->l);
      const VarSet& X = phi->sub;
      VarSet Y = witness_occurring(child.theta);
      DerivationBuilder b(imp.logic, imp.cs);
      auto [s, is] = intern_at(b, child.derivation, X);
      TermPtr st = app(s, phi->term);
      size_t b2 = b.ax(SchemaId::B2,
                       implies(b.formula(is), implies(phi, just(st, X, child.theta))));
      size_t i = b.mp(is, b2);
      i = imp_retarget(b, i, Y);
      return {just(st, Y, child.theta), b.take(i)};
    }
    case Template::Kind::Not:
      break;
  }
  throw NotPositive("template contains ~");
}

}  // namespace

TemplateResult semi_replacement(const TemplatePtr& f, const Derivation& imp,
                                const std::vector<FormulaPtr>& phis,
                                const FormulaPtr& phi) {
  if (!is_positive(f)) throw NotPositive("semi-replacement needs a positive template");
  CheckReport r = check_theorem(imp);
  if (!r.ok) throw NotAccepted("implication derivation rejected: " + r.message);
  if (imp.conclusion()->kind != Formula::Kind::Implies)
    throw NotAccepted("implication derivation must conclude with ->");
  std::vector<FormulaPtr> bound = phis;
  bound.push_back(imp.conclusion()->l);
  if (!member(f, bound, phi))
    throw MemberCheckFailed(print_formula(phi) + " is not an instance of " +
                            print_template(f));
  return semi_rec(f, imp, phis.size(), phis, phi);
}

// --------------------------------------------------------------------------
// Vacuous quantification

namespace {

TemplateResult vac_rec(const TemplatePtr& f, const std::vector<FormulaPtr>& phis,
                       const FormulaPtr& psi, const Var& y, Logic logic,
                       const ConstantSpecification& cs) {
  switch (f->kind) {
    case Template::Kind::Letter: {
      DerivationBuilder b(logic, cs);
      size_t id = b.prove_id(psi);
      size_t g = b.gen_step(id, y);
      size_t ed = b.ax(SchemaId::A1_ED,
                       implies(b.formula(g), implies(exists(y, psi), psi)));
      return {psi, b.take(b.mp(g, ed))};
    }
    case Template::Kind::Or: {
      TemplateResult l = vac_rec(f->a, phis, psi->l, y, logic, cs);
      TemplateResult r = vac_rec(f->b, phis, psi->r, y, logic, cs);
      FormulaPtr theta = forr(l.theta, r.theta);
      DerivationBuilder b(logic, cs);
      size_t il = b.append(l.derivation);  // exists y psi' -> theta'
      size_t ir = b.append(r.derivation);
      size_t e1 = b.ax(SchemaId::A1_EI, implies(psi->l, exists(y, psi->l)));
      size_t p1 = b.syll(b.syll(e1, il),
                         b.ax(SchemaId::A1_OR1, implies(l.theta, theta)));
      size_t e2 = b.ax(SchemaId::A1_EI, implies(psi->r, exists(y, psi->r)));
      size_t p2 = b.syll(b.syll(e2, ir),
                         b.ax(SchemaId::A1_OR2, implies(r.theta, theta)));
      size_t o3 = b.ax(SchemaId::A1_OR3,
                       implies(implies(psi->l, theta),
                               implies(implies(psi->r, theta), implies(psi, theta))));
      size_t q = b.mp(p2, b.mp(p1, o3));
      size_t g = b.gen_step(q, y);
      size_t ed = b.ax(SchemaId::A1_ED,
                       implies(b.formula(g), implies(exists(y, psi), theta)));
      return {theta, b.take(b.mp(g, ed))};
    }
    case Template::Kind::Box: {
      const FormulaPtr& body = psi->l;
      const VarSet& X = psi->sub;
      VarSet Xy = X;
      Xy.insert(y);
      TemplateResult child = vac_rec(f->a, phis, body, y, logic, cs);
      DerivationBuilder b(logic, cs);
      FormulaPtr lifted = just(psi->term, Xy, body);
      size_t a3 = b.ax(SchemaId::A3, implies(psi, lifted));
      size_t ei = b.ax(SchemaId::A1_EI, implies(lifted, exists(y, lifted)));
      size_t s1 = b.syll(a3, ei);
      size_t g = b.gen_step(s1, y);
      size_t ed = b.ax(SchemaId::A1_ED,
                       implies(b.formula(g),
                               implies(exists(y, psi), exists(y, lifted))));
      size_t i3 = b.mp(g, ed);
      Synthesized cb = converse_buridan(psi->term, X, y, body, logic);
      size_t i4 = b.syll(i3, b.append(cb.derivation));
      // i4: exists y psi -> [s(t)]{X} exists y body
      auto [s, is] = intern_at(b, child.derivation, X);
      TermPtr u = app(s, cb.term);
      size_t b2 = b.ax(SchemaId::B2,
                       implies(b.formula(is),
                               implies(just(cb.term, X, exists(y, body)),
                                       just(u, X, child.theta))));
      size_t i5 = b.syll(i4, b.mp(is, b2));
      VarSet Y = witness_occurring(child.theta);
      size_t i6 = imp_retarget(b, i5, Y);
      return {just(u, Y, child.theta), b.take(i6)};
    }
    case Template::Kind::Not:
    case Template::Kind::And:
      break;
  }
  throw NotDisjunctive("template contains ~ or &");
}

void require_no_free_y(const std::vector<FormulaPtr>& phis, const Var& y) {
  if (y.witness) throw FreeVarViolation("the quantified variable must be basic");
  for (const FormulaPtr& p : phis)
    if (free_vars(p).count(y))
      throw FreeVarViolation(y.str() + " occurs free in " + print_formula(p));
}

}  // namespace

TemplateResult vacuous_quantification(const TemplatePtr& f,
                                      const std::vector<FormulaPtr>& phis,
                                      const FormulaPtr& psi, const Var& y,
                                      Logic logic) {
  if (!is_disjunctive(f))
    throw NotDisjunctive("vacuous quantification needs a disjunctive template");
  require_no_free_y(phis, y);
  if (!member(f, phis, psi))
    throw MemberCheckFailed(print_formula(psi) + " is not an instance of " +
                            print_template(f));
  return vac_rec(f, phis, psi, y, logic, ConstantSpecification::schematic());
}

// --------------------------------------------------------------------------
// Generalized Barcan

namespace {

TemplateResult barcan_rec(const TemplatePtr& f, const Var& y,
                          const FormulaPtr& phi_y, size_t q,
                          const std::vector<FormulaPtr>& phis, const FormulaPtr& psi,
                          Logic logic, const ConstantSpecification& cs) {
  switch (f->kind) {
    case Template::Kind::Letter: {
      DerivationBuilder b(logic, cs);
      if (f->letter == q) {
        FormulaPtr theta = forall(y, phi_y);
        return {theta, b.take(b.prove_id(theta))};
      }
      size_t ui = b.ax(SchemaId::A1_UI, implies(forall(y, psi), psi));
      return {psi, b.take(ui)};
    }
    case Template::Kind::Or: {
      // q occurs in at most one branch; the other side quantifies vacuously.
      bool q_right = letters_of(f->b).count(q) != 0;
      const FormulaPtr& pl = psi->l;
      const FormulaPtr& pr = psi->r;
      TemplateResult l = q_right
                             ? vac_rec(f->a, phis, pl, y, logic, cs)
                             : barcan_rec(f->a, y, phi_y, q, phis, pl, logic, cs);
      TemplateResult r = q_right
                             ? barcan_rec(f->b, y, phi_y, q, phis, pr, logic, cs)
                             : vac_rec(f->b, phis, pr, y, logic, cs);
      // Lemma: forall y (A | B) -> (~exists y V -> forall y U), where U is the
      // branch handled by induction and V the vacuous one.
      const FormulaPtr& U = q_right ? pr : pl;
      const FormulaPtr& V = q_right ? pl : pr;
      std::vector<FormulaPtr> hyps{forall(y, psi), fnot(exists(y, V))};
      DerivationBuilder lb(logic, cs, hyps);
      size_t h1 = lb.hyp(1);
      size_t ui = lb.ax(SchemaId::A1_UI, implies(forall(y, psi), psi));
      size_t m = lb.mp(h1, ui);
      size_t ei = lb.ax(SchemaId::A1_EI, implies(V, exists(y, V)));
      size_t nb = lb.mp(lb.hyp(2), lb.contrapose(ei));
      size_t a = lb.taut(U, {m, nb});
      size_t g = lb.gen_step(a, y);
      Derivation lemma = deduction(deduction(lb.take(g), 2), 1);
      DerivationBuilder b(logic, cs);
      size_t il = b.append(lemma);  // forall y psi -> (~exists y V -> forall y U)
      size_t iu = b.append(q_right ? r.derivation : l.derivation);
      size_t iv = b.append(q_right ? l.derivation : r.derivation);
      FormulaPtr theta = forr(l.theta, r.theta);
      size_t t = b.taut(implies(forall(y, psi), theta), {il, iu, iv});
      return {theta, b.take(t)};
    }
    case Template::Kind::Box: {
      const FormulaPtr& body = psi->l;
      const VarSet& X = psi->sub;
      VarSet Xy = X;
      Xy.insert(y);
      DerivationBuilder b(logic, cs);
      FormulaPtr lifted = just(psi->term, Xy, body);
      size_t ui = b.ax(SchemaId::A1_UI, implies(forall(y, psi), psi));
      size_t s1 = b.syll(ui, b.ax(SchemaId::A3, implies(psi, lifted)));
      size_t g = b.gen_step(s1, y);
      size_t ud = b.ax(SchemaId::A1_UD,
                       implies(b.formula(g),
                               implies(forall(y, psi), forall(y, lifted))));
      size_t i2 = b.mp(g, ud);  // forall y psi -> forall y [t]{Xy} body
      TermPtr bt;
      size_t i3;
      if (logic == Logic::FOLPb) {
        bt = bar(psi->term);
        size_t bb = b.ax(SchemaId::Bb,
                         implies(forall(y, lifted), just(bt, X, forall(y, body))));
        i3 = b.syll(i2, bb);
      } else {
        Synthesized jb = jt45_barcan(psi->term, X, y, body);
        bt = jb.term;
        i3 = b.syll(i2, b.append(jb.derivation));
      }
      TemplateResult child =
          barcan_rec(f->a, y, phi_y, q, phis, body, logic, cs);
      auto [s, is] = intern_at(b, child.derivation, X);
      TermPtr u = app(s, bt);
      size_t b2 = b.ax(SchemaId::B2,
                       implies(b.formula(is),
                               implies(just(bt, X, forall(y, body)),
                                       just(u, X, child.theta))));
      size_t i4 = b.syll(i3, b.mp(is, b2));
      VarSet Y = witness_occurring(child.theta);
      size_t i5 = imp_retarget(b, i4, Y);
      return {just(u, Y, child.theta), b.take(i5)};
    }
    case Template::Kind::Not:
    case Template::Kind::And:
      break;
  }
  throw NotDisjunctive("template contains ~ or &");
}

}  // namespace

TemplateResult generalized_barcan(const TemplatePtr& f, const Var& y,
                                  const FormulaPtr& phi_y,
                                  const std::vector<FormulaPtr>& phis,
                                  const FormulaPtr& psi, Logic logic) {
  if (!is_disjunctive(f))
    throw NotDisjunctive("generalized Barcan needs a disjunctive template");
  require_no_free_y(phis, y);
  std::vector<FormulaPtr> bound = phis;
  bound.push_back(phi_y);
  if (!member(f, bound, psi))
    throw MemberCheckFailed(print_formula(psi) + " is not an instance of " +
                            print_template(f));
  return barcan_rec(f, y, phi_y, phis.size(), phis, psi, logic,
                    ConstantSpecification::schematic());
}

// --------------------------------------------------------------------------
// Formula combining

namespace {

TemplateResult combine_rec(const TemplatePtr& f, const std::vector<FormulaPtr>& phis,
                           const std::vector<FormulaPtr>& psis, Logic logic,
                           const ConstantSpecification& cs) {
  switch (f->kind) {
    case Template::Kind::Letter: {
      FormulaPtr theta = phis[f->letter];
      DerivationBuilder b(logic, cs);
      std::vector<size_t> idxs(psis.size(), b.prove_id(theta));
      return {theta, b.take(fold_or(b, idxs, psis, theta))};
    }
    case Template::Kind::Or: {
      std::vector<FormulaPtr> ls, rs;
      for (const FormulaPtr& p : psis) {
        ls.push_back(p->l);
        rs.push_back(p->r);
      }
      TemplateResult l = combine_rec(f->a, phis, ls, logic, cs);
      TemplateResult r = combine_rec(f->b, phis, rs, logic, cs);
      FormulaPtr theta = forr(l.theta, r.theta);
      DerivationBuilder b(logic, cs);
      size_t il = b.append(l.derivation);
      size_t ir = b.append(r.derivation);
      std::vector<size_t> idxs;
      for (size_t j = 0; j < psis.size(); ++j) {
        size_t p1 = b.syll(b.syll(inject(b, j, ls), il),
                           b.ax(SchemaId::A1_OR1, implies(l.theta, theta)));
        size_t p2 = b.syll(b.syll(inject(b, j, rs), ir),
                           b.ax(SchemaId::A1_OR2, implies(r.theta, theta)));
        size_t o3 = b.ax(SchemaId::A1_OR3,
                         implies(b.formula(p1),
                                 implies(b.formula(p2), implies(psis[j], theta))));
        idxs.push_back(b.mp(p2, b.mp(p1, o3)));
      }
      return {theta, b.take(fold_or(b, idxs, psis, theta))};
    }
    case Template::Kind::Box: {
      std::vector<FormulaPtr> bodies;
      for (const FormulaPtr& p : psis) bodies.push_back(p->l);
      TemplateResult child = combine_rec(f->a, phis, bodies, logic, cs);
      // One internalized implication body_j -> theta' per disjunct.
      std::vector<TermPtr> prods;
      std::vector<Derivation> imps;
      for (size_t j = 0; j < psis.size(); ++j) {
        DerivationBuilder cb(logic, cs);
        size_t i = cb.syll(inject(cb, j, bodies), cb.append(child.derivation));
        imps.push_back(cb.take(i));
      }
      DerivationBuilder b(logic, cs);
      std::vector<size_t> intern_idx;
      for (size_t j = 0; j < psis.size(); ++j) {
        auto [s, is] = intern_at(b, imps[j], psis[j]->sub);
        prods.push_back(app(s, psis[j]->term));
        intern_idx.push_back(is);
      }
      std::vector<TermPtr> pre(psis.size());
      pre[0] = prods[0];
      for (size_t m = 1; m < psis.size(); ++m) pre[m] = sum(pre[m - 1], prods[m]);
      TermPtr u = pre.back();
      VarSet Y = witness_occurring(child.theta);
      std::vector<size_t> idxs;
      for (size_t j = 0; j < psis.size(); ++j) {
        const VarSet& Xj = psis[j]->sub;
        size_t b2 = b.ax(SchemaId::B2,
                         implies(b.formula(intern_idx[j]),
                                 implies(psis[j], just(prods[j], Xj, child.theta))));
        size_t i = b.mp(intern_idx[j], b2);
        // B3 chain: [prods[j]] -> [u] at subscript Xj.
        if (j > 0)
          i = b.syll(i, b.ax(SchemaId::B3R,
                             implies(just(prods[j], Xj, child.theta),
                                     just(pre[j], Xj, child.theta))));
        for (size_t m = j + 1; m < psis.size(); ++m)
          i = b.syll(i, b.ax(SchemaId::B3L,
                             implies(just(pre[m - 1], Xj, child.theta),
                                     just(pre[m], Xj, child.theta))));
        idxs.push_back(imp_retarget(b, i, Y));
      }
      FormulaPtr theta = just(u, Y, child.theta);
      return {theta, b.take(fold_or(b, idxs, psis, theta))};
    }
    case Template::Kind::Not:
    case Template::Kind::And:
      break;
  }
  throw NotDisjunctive("template contains ~ or &");
}

}  // namespace

TemplateResult combine(const TemplatePtr& f, const std::vector<FormulaPtr>& phis,
                       const std::vector<FormulaPtr>& psis, Logic logic) {
  if (!is_disjunctive(f)) throw NotDisjunctive("combine needs a disjunctive template");
  if (psis.empty()) throw MemberCheckFailed("combine needs at least one member");
  for (const FormulaPtr& p : psis)
    if (!member(f, phis, p))
      throw MemberCheckFailed(print_formula(p) + " is not an instance of " +
                              print_template(f));
  return combine_rec(f, phis, psis, logic, ConstantSpecification::schematic());
}

// --------------------------------------------------------------------------
// Sharp

std::vector<FormulaPtr> sharp(const std::vector<FormulaPtr>& gamma) {
  std::vector<FormulaPtr> out;
  std::set<std::string> seen;
  for (const FormulaPtr& g : gamma) {
    if (g->kind != Formula::Kind::Just) continue;
    if (!is_closed(g)) continue;
    if (g->sub != witness_occurring(g->l)) continue;
    FormulaPtr closure = universal_closure(g->l);
    if (seen.insert(print_formula(closure)).second) out.push_back(closure);
  }
  return out;
}

}  // namespace folp
