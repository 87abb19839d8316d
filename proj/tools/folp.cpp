// Batch command-line interface: proof checking, transformer invocation,
// model evaluation and auditing, template operations, soundness fuzzing.
//
// Exit codes: 0 success/pass, 1 rejection/violation, 2 usage or parse error.
// Output is one record per line in key=value form.
#include <CLI11.hpp>
#include <iostream>

#include "folp/files.hpp"
#include "folp/harness.hpp"
#include "folp/transform.hpp"

using namespace folp;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

VarSet parse_subscript(const std::string& text) {
  VarSet out;
  std::string s = text;
  if (!s.empty() && s.front() == '{') s = s.substr(1);
  if (!s.empty() && s.back() == '}') s.pop_back();
  std::istringstream is(s);
  std::string part;
  while (std::getline(is, part, ',')) {
    size_t a = part.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    size_t b = part.find_last_not_of(" \t");
    part = part.substr(a, b - a + 1);
    if (part.front() == '@')
      out.insert(Var{part.substr(1), true});
    else
      out.insert(Var{part, false});
  }
  return out;
}

Var parse_var(const std::string& text) {
  if (!text.empty() && text.front() == '@') return Var{text.substr(1), true};
  return Var{text, false};
}

Logic parse_logic(const std::string& text) {
  auto l = logic_from_string(text);
  if (!l) throw CLI::ValidationError("--logic", "unknown logic: " + text);
  return *l;
}

int emit_derivation(const Derivation& d, const std::string& out_path) {
  CheckReport r = check_theorem(d);
  if (!r.ok) {
    std::cout << "result=rejected step=" << r.failed_step << " reason=\"" << r.message
              << "\"\n";
    return kFail;
  }
  write_file(out_path, print_derivation(d));
  std::cout << "result=ok steps=" << d.steps.size()
            << " conclusion=" << print_formula(d.conclusion()) << "\n";
  return kPass;
}

int run(int argc, char** argv) {
  int rc = kPass;
  CLI::App app{"first-order justification logic toolkit"};
  app.require_subcommand(1);

  // ---- check ----------------------------------------------------------
  auto* check_cmd = app.add_subcommand("check", "check a derivation file");
  std::string check_file;
  bool no_taut = false;
  check_cmd->add_option("file", check_file)->required();
  check_cmd->add_flag("--no-taut", no_taut, "reject TAUT steps");
  check_cmd->callback([&]() {
    Derivation d = load_derivation(check_file);
    CheckReport r = check(d, CheckOptions{.allow_taut = !no_taut});
    if (r.ok) {
      std::cout << "result=accepted steps=" << d.steps.size()
                << " conclusion=" << print_formula(d.conclusion()) << "\n";
      return;
    }
    std::cout << "result=rejected step=" << r.failed_step << " reason=\"" << r.message
              << "\"\n";
    rc = kFail;
    return;
  });

  // ---- internalize / deduce -------------------------------------------
  auto* int_cmd = app.add_subcommand("internalize", "lift a derivation to a justified one");
  std::string int_file, int_out;
  int_cmd->add_option("file", int_file)->required();
  int_cmd->add_option("-o,--out", int_out)->required();
  int_cmd->callback([&]() {
    Derivation d = load_derivation(int_file);
    Synthesized s = internalize(d);
    std::cout << "term=" << print_term(s.term) << "\n";
    rc = emit_derivation(s.derivation, int_out);
  });

  auto* ded_cmd = app.add_subcommand("deduce", "discharge a hypothesis");
  std::string ded_file, ded_out;
  size_t ded_hyp = 0;
  ded_cmd->add_option("file", ded_file)->required();
  ded_cmd->add_option("--hyp", ded_hyp)->required();
  ded_cmd->add_option("-o,--out", ded_out)->required();
  ded_cmd->callback([&]() {
    Derivation d = load_derivation(ded_file);
    Derivation out = deduction(d, ded_hyp);
    CheckReport r = check(out);
    if (!r.ok) {
      std::cout << "result=rejected step=" << r.failed_step << " reason=\"" << r.message
                << "\"\n";
      rc = kFail;
    return;
    }
    write_file(ded_out, print_derivation(out));
    std::cout << "result=ok steps=" << out.steps.size()
              << " conclusion=" << print_formula(out.conclusion()) << "\n";
  });

  // ---- derive ----------------------------------------------------------
  auto* der_cmd = app.add_subcommand("derive", "synthesize a named derivation");
  std::string der_kind, der_term, der_sub, der_var, der_formula, der_out;
  std::string der_logic = "FOLPb";
  der_cmd->add_option("kind", der_kind)
      ->required()
      ->check(CLI::IsMember({"cbarcan", "cburidan", "jt45barcan"}));
  der_cmd->add_option("--term", der_term)->required();
  der_cmd->add_option("--subscript", der_sub);
  der_cmd->add_option("--var", der_var)->required();
  der_cmd->add_option("--formula", der_formula)->required();
  der_cmd->add_option("--logic", der_logic);
  der_cmd->add_option("-o,--out", der_out)->required();
  der_cmd->callback([&]() {
    TermPtr t = parse_term(der_term);
    VarSet x = parse_subscript(der_sub);
    Var y = parse_var(der_var);
    FormulaPtr phi = parse_formula(der_formula);
    Synthesized s = der_kind == "cbarcan"
                        ? converse_barcan(t, x, y, phi, parse_logic(der_logic))
                        : der_kind == "cburidan"
                              ? converse_buridan(t, x, y, phi, parse_logic(der_logic))
                              : jt45_barcan(t, x, y, phi);
    std::cout << "term=" << print_term(s.term) << "\n";
    rc = emit_derivation(s.derivation, der_out);
  });

  // ---- model -----------------------------------------------------------
  auto* model_cmd = app.add_subcommand("model", "model evaluation and auditing");
  model_cmd->require_subcommand(1);
  auto* eval_cmd = model_cmd->add_subcommand("eval", "evaluate a formula at a world");
  std::string ev_model, ev_world, ev_formula;
  eval_cmd->add_option("model", ev_model)->required();
  eval_cmd->add_option("--world", ev_world)->required();
  eval_cmd->add_option("--formula", ev_formula)->required();
  eval_cmd->callback([&]() {
    FittingModel m = load_model(ev_model);
    bool v = eval(m, ev_world, parse_formula(ev_formula));
    std::cout << "value=" << (v ? "true" : "false") << "\n";
  });
  auto* audit_cmd = model_cmd->add_subcommand("audit", "audit evidence conditions");
  std::string au_model;
  bool au_exempt = false;
  audit_cmd->add_option("model", au_model)->required();
  audit_cmd->add_flag("--exempt-strong-evidence", au_exempt);
  audit_cmd->callback([&]() {
    FittingModel m = load_model(au_model);
    AuditReport r = audit(m, {.exempt_strong_evidence = au_exempt});
    std::cout << "header=\"" << r.header << "\"\n";
    for (const AuditViolation& v : r.violations)
      std::cout << "violation=\"" << v.condition << "\" instance=\"" << v.instance
                << "\"\n";
    std::cout << "verdict=" << (r.pass ? "pass" : "fail") << "\n";
    if (!r.pass) rc = kFail;
    return;
  });

  // ---- template --------------------------------------------------------
  auto* tpl_cmd = app.add_subcommand("template", "instantiation-set operations");
  tpl_cmd->require_subcommand(1);
  std::string tpl_text, tpl_formula, tpl_body, tpl_var, tpl_imp, tpl_out;
  std::string tpl_logic = "FOLPb";
  std::vector<std::string> tpl_phis, tpl_members;

  auto add_common = [&](CLI::App* c, bool needs_out) {
    c->add_option("--template", tpl_text)->required();
    c->add_option("--phi", tpl_phis, "positional letter bindings");
    c->add_option("--logic", tpl_logic);
    if (needs_out) c->add_option("-o,--out", tpl_out)->required();
  };
  auto phis = [&]() {
    std::vector<FormulaPtr> out;
    for (const std::string& s : tpl_phis) out.push_back(parse_formula(s));
    return out;
  };

  auto* mem_cmd = tpl_cmd->add_subcommand("member", "membership test");
  add_common(mem_cmd, false);
  mem_cmd->add_option("--formula", tpl_formula)->required();
  mem_cmd->callback([&]() {
    bool in = member(parse_template(tpl_text), phis(), parse_formula(tpl_formula));
    std::cout << "member=" << (in ? "true" : "false") << "\n";
    if (!in) rc = kFail;
    return;
  });

  auto* com_cmd = tpl_cmd->add_subcommand("combine", "combine members");
  add_common(com_cmd, true);
  com_cmd->add_option("--member", tpl_members)->required();
  com_cmd->callback([&]() {
    std::vector<FormulaPtr> psis;
    for (const std::string& s : tpl_members) psis.push_back(parse_formula(s));
    TemplateResult r =
        combine(parse_template(tpl_text), phis(), psis, parse_logic(tpl_logic));
    std::cout << "theta=" << print_formula(r.theta) << "\n";
    rc = emit_derivation(r.derivation, tpl_out);
  });

  auto* semi_cmd = tpl_cmd->add_subcommand("semi", "semi-replacement");
  add_common(semi_cmd, true);
  semi_cmd->add_option("--imp", tpl_imp, "derivation file of chi -> psi")->required();
  semi_cmd->add_option("--formula", tpl_formula)->required();
  semi_cmd->callback([&]() {
    Derivation imp = load_derivation(tpl_imp);
    TemplateResult r = semi_replacement(parse_template(tpl_text), imp, phis(),
                                        parse_formula(tpl_formula));
    std::cout << "theta=" << print_formula(r.theta) << "\n";
    rc = emit_derivation(r.derivation, tpl_out);
  });

  auto* vac_cmd = tpl_cmd->add_subcommand("vacuous", "vacuous quantification");
  add_common(vac_cmd, true);
  vac_cmd->add_option("--formula", tpl_formula)->required();
  vac_cmd->add_option("--var", tpl_var)->required();
  vac_cmd->callback([&]() {
    TemplateResult r = vacuous_quantification(parse_template(tpl_text), phis(),
                                              parse_formula(tpl_formula),
                                              parse_var(tpl_var), parse_logic(tpl_logic));
    std::cout << "theta=" << print_formula(r.theta) << "\n";
    rc = emit_derivation(r.derivation, tpl_out);
  });

  auto* gb_cmd = tpl_cmd->add_subcommand("genbarcan", "generalized Barcan");
  add_common(gb_cmd, true);
  gb_cmd->add_option("--formula", tpl_formula)->required();
  gb_cmd->add_option("--body", tpl_body, "the formula being generalized")->required();
  gb_cmd->add_option("--var", tpl_var)->required();
  gb_cmd->callback([&]() {
    TemplateResult r = generalized_barcan(parse_template(tpl_text), parse_var(tpl_var),
                                          parse_formula(tpl_body), phis(),
                                          parse_formula(tpl_formula),
                                          parse_logic(tpl_logic));
    std::cout << "theta=" << print_formula(r.theta) << "\n";
    rc = emit_derivation(r.derivation, tpl_out);
  });

  // ---- fuzz ------------------------------------------------------------
  auto* fuzz_cmd = app.add_subcommand("fuzz", "property drivers");
  fuzz_cmd->require_subcommand(1);
  auto* sound_cmd = fuzz_cmd->add_subcommand("soundness", "validity of generated theorems");
  GenConfig fz;
  std::string fz_logic = "FOLPb";
  sound_cmd->add_option("--seed", fz.seed)->required();
  sound_cmd->add_option("--trials", fz.trials)->required();
  sound_cmd->add_option("--logic", fz_logic)->required();
  sound_cmd->callback([&]() {
    fz.logic = parse_logic(fz_logic);
    SoundnessReport rep = run_soundness(fz);
    std::cout << "trials=" << rep.trials << " violations=" << rep.violations << "\n";
    if (rep.violations) {
      std::cout << "counterexample:\n" << rep.counterexample;
      rc = kFail;
    return;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ParseError& e) {
    std::cout << "error=\"" << e.what() << "\" line=" << e.span.line << "\n";
    return kUsage;
  } catch (const TransformError& e) {
    std::cout << "error=\"" << e.what() << "\"\n";
    return kFail;
  } catch (const TemplateError& e) {
    std::cout << "error=\"" << e.what() << "\"\n";
    return kFail;
  } catch (const SemanticsError& e) {
    std::cout << "error=\"" << e.what() << "\"\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cout << "error=\"" << e.what() << "\"\n";
    return kUsage;
  }
}
