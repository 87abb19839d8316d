#include "folp/textio.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace folp {

// ---------------------------------------------------------------------------
// Printing

std::string print_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::JVar:
    case Term::Kind::JConst:
      return t->name;
    case Term::Kind::App:
      return "(" + print_term(t->a) + " . " + print_term(t->b) + ")";
    case Term::Kind::Sum:
      return "(" + print_term(t->a) + " + " + print_term(t->b) + ")";
    case Term::Kind::Bang:
      return "!" + print_term(t->a);
    case Term::Kind::Query:
      return "?" + print_term(t->a);
    case Term::Kind::Bar:
      return "b(" + print_term(t->a) + ")";
    case Term::Kind::Gen:
      return "gen[" + t->bound.str() + "](" + print_term(t->a) + ")";
  }
  return "";
}

std::string print_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      if (f->args.empty()) return f->pred;
      std::string s = f->pred + "(";
      for (size_t i = 0; i < f->args.size(); ++i) {
        if (i) s += ",";
        s += f->args[i].str();
      }
      return s + ")";
    }
    case Formula::Kind::Bottom:
      return "false";
    case Formula::Kind::Not:
      return "~" + print_formula(f->l);
    case Formula::Kind::And:
      return "(" + print_formula(f->l) + " & " + print_formula(f->r) + ")";
    case Formula::Kind::Or:
      return "(" + print_formula(f->l) + " | " + print_formula(f->r) + ")";
    case Formula::Kind::Implies:
      return "(" + print_formula(f->l) + " -> " + print_formula(f->r) + ")";
    case Formula::Kind::Iff:
      return "(" + print_formula(f->l) + " <-> " + print_formula(f->r) + ")";
    case Formula::Kind::Forall:
      return "forall " + f->bound.str() + ". " + print_formula(f->l);
    case Formula::Kind::Exists:
      return "exists " + f->bound.str() + ". " + print_formula(f->l);
    case Formula::Kind::Just: {
      std::string s = "[" + print_term(f->term) + "]{";
      bool first = true;
      for (const Var& v : f->sub) {  // VarSet is ordered; lexicographic print
        if (!first) s += ",";
        first = false;
        s += v.str();
      }
      return s + "} " + print_formula(f->l);
    }
  }
  return "";
}

// ---------------------------------------------------------------------------
// Lexing

namespace {

enum class Tok {
  Ident,     // identifier (possibly keyword)
  Witness,   // @ident
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Plus,
  Bang,
  Question,
  Tilde,
  Arrow,   // ->
  Amp,
  Pipe,
  IffTok,  // <->
  End
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0, line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg, size_t len = 1) {
    throw ParseError(msg, {line, col, len});
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }

  Token next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) advance(1);
    SourceSpan here{line, col, 1};
    if (pos >= src.size()) return {Tok::End, "", here};
    char c = src[pos];
    auto single = [&](Tok k) {
      Token t{k, std::string(1, c), here};
      advance(1);
      return t;
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case ',': return single(Tok::Comma);
      case '.': return single(Tok::Dot);
      case '+': return single(Tok::Plus);
      case '!': return single(Tok::Bang);
      case '?': return single(Tok::Question);
      case '~': return single(Tok::Tilde);
      case '&': return single(Tok::Amp);
      case '|': return single(Tok::Pipe);
      case '-':
        if (pos + 1 < src.size() && src[pos + 1] == '>') {
          Token t{Tok::Arrow, "->", {line, col, 2}};
          advance(2);
          return t;
        }
        fail("unexpected '-'");
      case '<':
        if (pos + 2 < src.size() && src[pos + 1] == '-' && src[pos + 2] == '>') {
          Token t{Tok::IffTok, "<->", {line, col, 3}};
          advance(3);
          return t;
        }
        fail("unexpected '<'");
      case '@': {
        size_t start = pos + 1, end = start;
        while (end < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
          ++end;
        if (end == start) fail("expected identifier after '@'");
        Token t{Tok::Witness, src.substr(start, end - start), {line, col, end - pos}};
        advance(end - pos);
        return t;
      }
      default:
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
          size_t end = pos;
          while (end < src.size() &&
                 (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
            ++end;
          Token t{Tok::Ident, src.substr(pos, end - pos), {line, col, end - pos}};
          advance(end - pos);
          return t;
        }
        fail("unexpected character");
    }
  }
};

bool is_jvar_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'p') return false;
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

struct Parser {
  std::vector<Token> toks;
  size_t idx = 0;

  explicit Parser(const std::string& text) {
    Lexer lx(text);
    for (;;) {
      Token t = lx.next();
      toks.push_back(t);
      if (t.kind == Tok::End) break;
    }
  }

  const Token& peek() const { return toks[idx]; }
  Token take() { return toks[idx++]; }

  [[noreturn]] void fail(const std::string& msg, const std::string& expected = "") {
    throw ParseError(msg, peek().span, expected);
  }

  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what, what);
    return take();
  }

  Var parse_var() {
    if (peek().kind == Tok::Witness) return {take().text, true};
    if (peek().kind == Tok::Ident) {
      Token t = take();
      if (!std::islower(static_cast<unsigned char>(t.text[0])))
        throw ParseError("basic variables are lowercase identifiers", t.span, "variable");
      return {t.text, false};
    }
    fail("expected variable", "variable");
  }

  Var parse_basic_var(const char* ctx) {
    if (peek().kind == Tok::Witness)
      throw ParseError(std::string("witness variable cannot be ") + ctx, peek().span);
    return parse_var();
  }

  // --- terms -------------------------------------------------------------

  TermPtr term() {
    switch (peek().kind) {
      case Tok::LParen: {
        take();
        TermPtr a = term();
        Tok op = peek().kind;
        if (op != Tok::Dot && op != Tok::Plus) fail("expected '.' or '+'", "'.' or '+'");
        take();
        TermPtr b = term();
        expect(Tok::RParen, "')'");
        return op == Tok::Dot ? app(a, b) : sum(a, b);
      }
      case Tok::Bang:
        take();
        return bang(term());
      case Tok::Question:
        take();
        return query(term());
      case Tok::Ident: {
        Token t = take();
        if (t.text == "b" && peek().kind == Tok::LParen) {
          take();
          TermPtr a = term();
          expect(Tok::RParen, "')'");
          return bar(a);
        }
        if (t.text == "gen" && peek().kind == Tok::LBracket) {
          take();
          Var x = parse_basic_var("a gen subscript");
          expect(Tok::RBracket, "']'");
          expect(Tok::LParen, "'('");
          TermPtr a = term();
          expect(Tok::RParen, "')'");
          return gen(x, a);
        }
        return is_jvar_name(t.text) ? jvar(t.text) : jconst(t.text);
      }
      default:
        fail("expected term", "term");
    }
  }

  // --- formulas ----------------------------------------------------------

  FormulaPtr formula() { return iff_level(); }

  FormulaPtr iff_level() {
    FormulaPtr a = implies_level();
    if (peek().kind == Tok::IffTok) {
      take();
      return iff(a, iff_level());  // right-associative
    }
    return a;
  }

  FormulaPtr implies_level() {
    FormulaPtr a = or_level();
    if (peek().kind == Tok::Arrow) {
      take();
      return implies(a, implies_level());  // right-associative
    }
    return a;
  }

  FormulaPtr or_level() {
    FormulaPtr a = and_level();
    while (peek().kind == Tok::Pipe) {
      take();
      a = forr(a, and_level());
    }
    return a;
  }

  FormulaPtr and_level() {
    FormulaPtr a = unary_level();
    while (peek().kind == Tok::Amp) {
      take();
      a = fand(a, unary_level());
    }
    return a;
  }

  FormulaPtr unary_level() {
    switch (peek().kind) {
      case Tok::Tilde:
        take();
        return fnot(unary_level());
      case Tok::LParen: {
        take();
        FormulaPtr a = formula();
        expect(Tok::RParen, "')'");
        return a;
      }
      case Tok::LBracket: {  // [t]{x,...} A
        take();
        TermPtr t = term();
        expect(Tok::RBracket, "']'");
        expect(Tok::LBrace, "'{'");
        VarSet sub;
        if (peek().kind != Tok::RBrace) {
          sub.insert(parse_var());
          while (peek().kind == Tok::Comma) {
            take();
            sub.insert(parse_var());
          }
        }
        expect(Tok::RBrace, "'}'");
        return just(t, std::move(sub), unary_level());
      }
      case Tok::Ident: {
        Token t = peek();
        if (t.text == "false") {
          take();
          return bottom();
        }
        if (t.text == "forall" || t.text == "exists") {
          take();
          Var x = parse_basic_var("bound by a quantifier");
          expect(Tok::Dot, "'.'");
          FormulaPtr body = unary_level();
          return t.text == "forall" ? forall(x, body) : exists(x, body);
        }
        if (std::isupper(static_cast<unsigned char>(t.text[0]))) {
          take();
          std::vector<Var> args;
          if (peek().kind == Tok::LParen) {
            take();
            if (peek().kind != Tok::RParen) {
              args.push_back(parse_var());
              while (peek().kind == Tok::Comma) {
                take();
                args.push_back(parse_var());
              }
            }
            expect(Tok::RParen, "')'");
          }
          return atom(t.text, std::move(args));
        }
        fail("expected formula (predicate names start uppercase)", "formula");
      }
      default:
        fail("expected formula", "formula");
    }
  }

  void done() {
    if (peek().kind != Tok::End) fail("trailing input", "end of input");
  }
};

}  // namespace

TermPtr parse_term(const std::string& text) {
  Parser p(text);
  TermPtr t = p.term();
  p.done();
  return t;
}

FormulaPtr parse_formula(const std::string& text) {
  Parser p(text);
  FormulaPtr f = p.formula();
  p.done();
  return f;
}

}  // namespace folp
