#include "folp/files.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace folp {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& msg, size_t line, const std::string& expected = "") {
  throw ParseError(msg, {line, 1, 1}, expected);
}

// Parse with the error span shifted to the enclosing file line.
FormulaPtr parse_formula_at(const std::string& text, size_t line) {
  try {
    return parse_formula(text);
  } catch (ParseError& e) {
    throw ParseError(e.what(), {line, e.span.column, e.span.length}, e.expected);
  }
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

size_t parse_index(const std::string& s, size_t line) {
  try {
    size_t pos = 0;
    unsigned long v = std::stoul(s, &pos);
    if (pos != s.size() || v == 0) fail("expected a positive step index", line);
    return v;
  } catch (const std::logic_error&) {
    fail("expected a positive step index", line);
  }
}

bool term_uses(const TermPtr& t, Term::Kind k) { return contains_kind(t, k); }

bool formula_uses(const FormulaPtr& f, Term::Kind k) {
  switch (f->kind) {
    case Formula::Kind::Atom:
    case Formula::Kind::Bottom:
      return false;
    case Formula::Kind::Not:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return formula_uses(f->l, k);
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      return formula_uses(f->l, k) || formula_uses(f->r, k);
    case Formula::Kind::Just:
      return term_uses(f->term, k) || formula_uses(f->l, k);
  }
  return false;
}

}  // namespace

bool formula_in_logic(const FormulaPtr& f, Logic logic) {
  if (logic == Logic::FOLPb) return !formula_uses(f, Term::Kind::Query);
  return !formula_uses(f, Term::Kind::Bar);
}

Derivation parse_derivation(const std::string& text, const std::string& base_dir) {
  Derivation d;
  bool saw_logic = false;
  std::istringstream in(text);
  std::string raw;
  size_t lineno = 0;
  size_t next_step = 1, next_hyp = 1;
  bool in_steps = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("logic ", 0) == 0) {
      auto l = logic_from_string(trim(line.substr(6)));
      if (!l) fail("unknown logic", lineno, "FOLPb or FOJT45");
      d.logic = *l;
      saw_logic = true;
      continue;
    }
    if (line.rfind("cs ", 0) == 0) {
      std::string rest = trim(line.substr(3));
      if (rest == "schematic") {
        d.cs = ConstantSpecification::schematic();
      } else if (rest.rfind("explicit ", 0) == 0) {
        std::string path = trim(rest.substr(9));
        if (!base_dir.empty()) path = base_dir + "/" + path;
        d.cs = load_explicit_cs(path);
      } else {
        fail("bad cs header", lineno, "schematic | explicit <path>");
      }
      continue;
    }
    if (line.rfind("hyp ", 0) == 0) {
      if (in_steps) throw UnknownSectionError("hyp line after steps began", {lineno, 1, 1});
      size_t colon = line.find(':');
      if (colon == std::string::npos) fail("hyp line needs ':'", lineno, "hyp <k>: <formula>");
      size_t k = parse_index(trim(line.substr(4, colon - 4)), lineno);
      if (k != next_hyp)
        throw DuplicateIndexError("hypothesis indices must be sequential from 1",
                                  {lineno, 1, 1});
      ++next_hyp;
      d.hypotheses.push_back(parse_formula_at(trim(line.substr(colon + 1)), lineno));
      continue;
    }
    // Step line: <n>. <formula> ; <RULE> <args>
    size_t dot = line.find('.');
    if (dot == std::string::npos || !std::isdigit(static_cast<unsigned char>(line[0])))
      throw UnknownSectionError("unrecognized line", {lineno, 1, 1});
    in_steps = true;
    size_t n = parse_index(trim(line.substr(0, dot)), lineno);
    if (n != next_step)
      throw DuplicateIndexError("step indices must be sequential from 1", {lineno, 1, 1});
    ++next_step;
    size_t semi = line.rfind(';');
    if (semi == std::string::npos || semi <= dot)
      fail("step line needs '; <RULE> <args>'", lineno);
    FormulaPtr f = parse_formula_at(trim(line.substr(dot + 1, semi - dot - 1)), lineno);
    if (saw_logic && !formula_in_logic(f, d.logic))
      fail("formula uses a justification primitive foreign to " + to_string(d.logic), lineno);
    std::vector<std::string> args = split_ws(trim(line.substr(semi + 1)));
    if (args.empty()) fail("missing rule", lineno, "AX|CS|HYP|MP|GEN|TAUT");
    Rule rule;
    const std::string& r = args[0];
    if (r == "AX" && args.size() == 2) {
      auto s = schema_from_string(args[1]);
      if (!s) fail("unknown schema id", lineno);
      rule = Rule::ax(*s);
    } else if (r == "CS" && args.size() == 2) {
      rule = Rule::cs(args[1]);
    } else if (r == "HYP" && args.size() == 2) {
      rule = Rule::hyp(parse_index(args[1], lineno));
    } else if (r == "MP" && args.size() == 3) {
      rule = Rule::mp(parse_index(args[1], lineno), parse_index(args[2], lineno));
    } else if (r == "GEN" && args.size() == 3) {
      if (args[2].empty() || args[2][0] == '@')
        fail("GEN takes a basic variable", lineno);
      rule = Rule::gen(parse_index(args[1], lineno), Var{args[2], false});
    } else if (r == "TAUT") {
      std::vector<size_t> cited;
      for (size_t i = 1; i < args.size(); ++i) {
        std::istringstream cs_in(args[i]);
        std::string piece;
        while (std::getline(cs_in, piece, ','))
          if (!piece.empty()) cited.push_back(parse_index(piece, lineno));
      }
      rule = Rule::taut(std::move(cited));
    } else {
      fail("bad rule line", lineno, "AX|CS|HYP|MP|GEN|TAUT with arguments");
    }
    d.steps.push_back({f, rule});
  }
  if (!saw_logic) fail("missing 'logic' header", lineno ? lineno : 1);
  return d;
}

Derivation load_derivation(const std::string& path) {
  std::string dir;
  size_t slash = path.find_last_of('/');
  if (slash != std::string::npos) dir = path.substr(0, slash);
  return parse_derivation(read_file(path), dir);
}

std::string print_derivation(const Derivation& d, const std::string& cs_path) {
  std::ostringstream out;
  out << "logic " << to_string(d.logic) << "\n";
  if (d.cs.mode == ConstantSpecification::Mode::Schematic)
    out << "cs schematic\n";
  else
    out << "cs explicit " << cs_path << "\n";
  for (size_t i = 0; i < d.hypotheses.size(); ++i)
    out << "hyp " << (i + 1) << ": " << print_formula(d.hypotheses[i]) << "\n";
  for (size_t n = 0; n < d.steps.size(); ++n) {
    const Step& s = d.steps[n];
    out << (n + 1) << ". " << print_formula(s.formula) << " ; ";
    switch (s.rule.kind) {
      case Rule::Kind::Ax: out << "AX " << to_string(s.rule.schema); break;
      case Rule::Kind::Cs: out << "CS " << s.rule.constant; break;
      case Rule::Kind::Hyp: out << "HYP " << s.rule.k; break;
      case Rule::Kind::Mp: out << "MP " << s.rule.i << " " << s.rule.j; break;
      case Rule::Kind::Gen: out << "GEN " << s.rule.i << " " << s.rule.var.str(); break;
      case Rule::Kind::Taut: {
        out << "TAUT";
        for (size_t i = 0; i < s.rule.cited.size(); ++i)
          out << (i ? "," : " ") << s.rule.cited[i];
        break;
      }
    }
    out << "\n";
  }
  return out.str();
}

std::vector<std::pair<std::string, FormulaPtr>> parse_cs_entries(const std::string& text) {
  std::vector<std::pair<std::string, FormulaPtr>> out;
  std::istringstream in(text);
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos) fail("expected '<const> : <formula>'", lineno);
    std::string name = trim(line.substr(0, colon));
    if (name.empty()) fail("missing constant name", lineno);
    out.emplace_back(name, parse_formula_at(trim(line.substr(colon + 1)), lineno));
  }
  return out;
}

ConstantSpecification load_explicit_cs(const std::string& path) {
  return ConstantSpecification::explicit_list(parse_cs_entries(read_file(path)));
}

std::string print_cs_entries(const std::vector<std::pair<std::string, FormulaPtr>>& entries) {
  std::ostringstream out;
  for (const auto& [c, f] : entries) out << c << " : " << print_formula(f) << "\n";
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace folp
