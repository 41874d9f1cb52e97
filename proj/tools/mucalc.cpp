// Command-line front end: type checking, normalization, equivalence,
// focality probes, the translation oracle, the stock data-type demos, and
// the .mu script runner.  Exit codes: 0 all checks passed, 1 an assertion
// or comparison did not pass, 2 usage / parse / type errors.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mucalc/datatypes.hpp"
#include "mucalc/script.hpp"

using namespace mucalc;

namespace {

struct GlobalOpts {
  bool json = false;
  int fuel = 10000;
  int samples = 40;
  uint64_t seed = 1;
  bool timings = false;
};

RunOptions run_options(const GlobalOpts& g) {
  RunOptions o;
  o.fuel = g.fuel;
  o.samples = g.samples;
  o.seed = g.seed;
  o.timings = g.timings;
  return o;
}

// Free term variables become opaque constants of a like-named atomic type;
// free control variables are rejected by the type checker downstream.
Env ad_hoc_env(const DeclTable& table, std::initializer_list<const Term*> terms) {
  Env env;
  env.decls = &table;
  for (const Term* t : terms)
    for (const std::string& x : free_vars(*t))
      if (!env.var(x)) env = env.with_var(x, Type::constant(x));
  return env;
}

void emit(const GlobalOpts& g, RunReport& rep) {
  for (const AssertRecord& a : rep.asserts) {
    if (a.pass)
      ++rep.passed;
    else
      ++rep.failed;
  }
  if (g.json) {
    std::cout << rep.to_json().dump(2) << "\n";
    return;
  }
  for (const DeclRecord& d : rep.decls)
    std::cout << d.kind << " " << d.name << " : " << d.type << "  [" << d.status << "]\n";
  for (const AssertRecord& a : rep.asserts) {
    std::cout << a.kind << "  " << a.inputs << "  ->  " << a.verdict;
    if (!a.detail.empty()) std::cout << "  (" << a.detail << ")";
    if (g.timings) std::cout << "  [" << a.wall_ms << " ms]";
    std::cout << "\n";
  }
}

int cmd_check(const GlobalOpts& g, const std::string& file, const std::string& expr) {
  if (!expr.empty()) {
    DeclTable table;
    Term m = parse_term(expr, table);
    Term e = elaborate(table, m);
    Env env = ad_hoc_env(table, {&e});
    Type t = infer(env, e);
    RunReport rep;
    rep.source_name = "-";
    rep.options = run_options(g);
    AssertRecord rec;
    rec.kind = "check";
    rec.inputs = expr;
    rec.verdict = print_type(t);
    rec.pass = true;
    rep.asserts.push_back(rec);
    if (g.json)
      std::cout << rep.to_json().dump(2) << "\n";
    else
      std::cout << print_term(m) << " : " << print_type(t) << "\n";
    return 0;
  }
  RunOptions o = run_options(g);
  o.check_only = true;
  RunReport rep = run_script(file, o);
  rep.passed = rep.failed = 0;
  emit(g, rep);
  return 0;
}

int cmd_normalize(const GlobalOpts& g, const std::string& expr, bool trace) {
  DeclTable table;
  Term m = parse_term(expr, table);
  Term e = elaborate(table, m);
  Env env = ad_hoc_env(table, {&e});
  infer(env, e);
  NormResult nr = normalize(env, e, g.fuel, trace);
  if (g.json) {
    RunReport rep;
    rep.source_name = "-";
    rep.options = run_options(g);
    AssertRecord rec;
    rec.kind = "normalize";
    rec.inputs = expr;
    rec.verdict = nr.complete ? "complete" : "fuel exhausted";
    rec.pass = nr.complete;
    rec.steps = nr.steps;
    rec.detail = print_term(nr.term);
    rep.asserts.push_back(rec);
    emit(g, rep);
  } else {
    if (trace)
      for (const StepTrace& s : nr.trace)
        std::cout << "  [" << s.rule << "]  " << print_term(s.term) << "\n";
    std::cout << print_term(nr.term) << "\n";
    if (!nr.complete) std::cerr << "fuel exhausted after " << nr.steps << " steps\n";
  }
  return nr.complete ? 0 : 1;
}

int cmd_equiv(const GlobalOpts& g, const std::vector<std::string>& exprs) {
  DeclTable table;
  Term l = parse_term(exprs[0], table);
  Term r = parse_term(exprs[1], table);
  Term le = elaborate(table, l);
  Term re = elaborate(table, r);
  Env env = ad_hoc_env(table, {&le, &re});
  Verdict v = equiv(env, le, re, g.fuel);
  RunReport rep;
  rep.source_name = "-";
  rep.options = run_options(g);
  AssertRecord rec;
  rec.kind = "equiv";
  rec.inputs = exprs[0] + "  ==  " + exprs[1];
  rec.verdict = v.word();
  rec.detail = v.detail;
  rec.pass = v.equal();
  rep.asserts.push_back(rec);
  if (g.json)
    std::cout << rep.to_json().dump(2) << "\n";
  else
    std::cout << v.word() << "  (" << v.detail << ")\n";
  if (v.equal()) return 0;
  return v.distinct() ? 1 : 2;
}

int cmd_focal(const GlobalOpts& g, const std::string& expr) {
  DeclTable table;
  default_signature(table);
  Term f = parse_term(expr, table);
  RunReport rep;
  rep.source_name = "-";
  rep.options = run_options(g);
  AssertRecord rec;
  rec.kind = "focal";
  rec.inputs = expr;
  int code = 1;
  if (auto cert = certify_focal(table, f)) {
    rec.verdict = "certified";
    rec.detail = cert->rule;
    rec.pass = true;
    code = 0;
  } else {
    FocalReport fr = test_focal(table, f, g.samples, g.seed, g.fuel);
    rec.steps = fr.tested;
    if (fr.outcome == Verdict::Outcome::Distinct) {
      rec.verdict = "counterexample";
      if (fr.witness) rec.detail = print_term(*fr.witness);
      rec.pass = false;
      code = 1;
    } else if (fr.outcome == Verdict::Outcome::Equal) {
      rec.verdict = "no counterexample";
      rec.detail = std::to_string(fr.tested) + " probes";
      rec.pass = true;
      code = 0;
    } else {
      rec.verdict = "unknown";
      rec.detail = fr.detail;
      rec.pass = false;
      code = 1;
    }
  }
  rep.asserts.push_back(rec);
  if (g.json)
    std::cout << rep.to_json().dump(2) << "\n";
  else
    std::cout << rec.verdict << (rec.detail.empty() ? "" : "  (" + rec.detail + ")") << "\n";
  return code;
}

int cmd_cps(const GlobalOpts& g, const std::string& type_text, const std::string& expr,
            const std::vector<std::string>& oracle_terms) {
  DeclTable table;
  NatEncoding::ensure(table);  // so `nu Streams` is available to --type
  RunReport rep;
  rep.source_name = "-";
  rep.options = run_options(g);
  AssertRecord rec;
  int code = 0;
  if (!type_text.empty()) {
    Type t = parse_type(type_text, table);
    TargetType tt = cps_type(table, t);
    rec.kind = "cps-type";
    rec.inputs = type_text;
    rec.verdict = print_target_type(tt);
    rec.pass = true;
    if (!g.json) std::cout << rec.verdict << "\n";
  } else if (!expr.empty()) {
    Term m = parse_term(expr, table);
    Term e = elaborate(table, m);
    Env env = ad_hoc_env(table, {&e});
    CpsResult res = cps_term(table, env, e);
    TTerm nf = target_normalize(res.tenv, res.term);
    rec.kind = "cps-term";
    rec.inputs = expr;
    rec.verdict = print_target_term(nf);
    rec.detail = print_target_term(res.term);
    rec.pass = true;
    if (!g.json) {
      std::cout << "translated: " << print_target_term(res.term) << "\n";
      std::cout << "normal:     " << print_target_term(nf) << "\n";
      std::cout << "type:       " << print_target_type(res.type) << "\n";
    }
  } else if (oracle_terms.size() == 2) {
    Term l = parse_term(oracle_terms[0], table);
    Term r = parse_term(oracle_terms[1], table);
    Term le = elaborate(table, l);
    Term re = elaborate(table, r);
    Env env = ad_hoc_env(table, {&le, &re});
    Type lt = infer(env, le);
    Type rt = infer(env, re);
    if (!(lt == rt))
      throw TypeError("mismatch", "compared terms have different types: " + print_type(lt) +
                                      " vs " + print_type(rt));
    bool eq = cps_equal(table, env, le, re);
    rec.kind = "oracle";
    rec.inputs = oracle_terms[0] + "  ==  " + oracle_terms[1];
    rec.verdict = eq ? "equal" : "distinct";
    rec.pass = eq;
    code = eq ? 0 : 1;
    if (!g.json) std::cout << rec.verdict << "\n";
  } else {
    throw CLI::ValidationError("cps", "need --type, -e, or --oracle with two terms");
  }
  rep.asserts.push_back(rec);
  if (g.json) {
    rep.passed = rec.pass ? 1 : 0;
    rep.failed = rec.pass ? 0 : 1;
    std::cout << rep.to_json().dump(2) << "\n";
  }
  return code;
}

void demo_record(RunReport& rep, const std::string& label, const Verdict& v) {
  AssertRecord rec;
  rec.kind = "equiv";
  rec.inputs = label;
  rec.verdict = v.word();
  rec.detail = v.detail;
  rec.pass = v.equal();
  rep.asserts.push_back(rec);
}

int cmd_demo_nat(const GlobalOpts& g, int max) {
  DeclTable table;
  Type P = Type::constant("P");
  table.declare_const("g", Type::arrow(Type::top(), P));
  table.declare_const("f", Type::arrow(P, P));
  NatEncoding nat = NatEncoding::ensure(table);
  Term fold = nat.fold(P, Term::constant("g"), Term::constant("f"));
  Env env;
  env.decls = &table;
  RunReport rep;
  rep.source_name = "demo nat";
  rep.options = run_options(g);
  for (int n = 0; n < max; ++n) {
    Term lhs = Term::app(fold, nat.numeral(table, n));
    Term rhs = Term::app(Term::constant("g"), Term::unit());
    for (int i = 0; i < n; ++i) rhs = Term::app(Term::constant("f"), rhs);
    Verdict v = equiv(env, lhs, rhs, g.fuel);
    demo_record(rep, "fold(numeral " + std::to_string(n) + ")", v);
  }
  emit(g, rep);
  return rep.failed == 0 ? 0 : 1;
}

int cmd_demo_list(const GlobalOpts& g, int len, const std::string& elem_text) {
  DeclTable table;
  Type P = Type::constant("P");
  Term elem = parse_term(elem_text, table);
  Term ee = elaborate(table, elem);
  Env env = ad_hoc_env(table, {&ee});
  Type B = infer(env, ee);
  ListEncoding le = ListEncoding::ensure(table, B);
  DeclTable table2 = table;
  table2.declare_const("g", Type::arrow(Type::top(), P));
  table2.declare_const("f", Type::arrow(Type::prod(B, P), P));
  Term fold = le.fold(P, Term::constant("g"), Term::constant("f"));
  Env env2 = ad_hoc_env(table2, {&ee});
  RunReport rep;
  rep.source_name = "demo list";
  rep.options = run_options(g);
  for (int k = 0; k < len; ++k) {
    std::vector<Term> elems(k, ee);
    Term lhs = Term::app(fold, le.literal(elems));
    Term rhs = Term::app(Term::constant("g"), Term::unit());
    for (int i = 0; i < k; ++i)
      rhs = Term::app(Term::constant("f"), Term::pair(ee, rhs));
    Verdict v = equiv(env2, lhs, rhs, g.fuel);
    demo_record(rep, "fold(list of " + std::to_string(k) + ")", v);
  }
  emit(g, rep);
  return rep.failed == 0 ? 0 : 1;
}

int cmd_demo_tree(const GlobalOpts& g, int depth) {
  DeclTable table;
  Type P = Type::constant("P");
  Type B = Type::constant("B");
  table.declare_const("b1", B);
  table.declare_const("b2", B);
  table.declare_const("g", Type::arrow(B, P));
  table.declare_const("f", Type::arrow(Type::prod(P, P), P));
  TreeEncoding te = TreeEncoding::ensure(table, B);
  Term fold = te.fold(table, P, Term::constant("g"), Term::constant("f"));
  Env env;
  env.decls = &table;
  RunReport rep;
  rep.source_name = "demo tree";
  rep.options = run_options(g);
  // Every literal of depth <= `depth` is checked exactly once, through the
  // equation its root constructor satisfies: fold(leaf b) against g b,
  // fold(fork(l,r)) against f<fold l, fold r>.
  struct Lit {
    Term term;
    std::string label;
    int depth;
  };
  std::vector<Lit> lits;
  for (int i = 0; i < 2; ++i) {
    Term c = Term::constant("b" + std::to_string(i + 1));
    Term lit = te.leaf_of(c);
    std::string lbl = "leaf b" + std::to_string(i + 1);
    Verdict v = equiv(env, Term::app(fold, lit), Term::app(Term::constant("g"), c), g.fuel);
    demo_record(rep, lbl, v);
    lits.push_back({lit, lbl, 1});
  }
  for (int d = 2; d <= depth; ++d) {
    size_t have = lits.size();  // everything of depth <= d-1
    for (size_t i = 0; i < have; ++i)
      for (size_t j = 0; j < have; ++j) {
        if (std::max(lits[i].depth, lits[j].depth) != d - 1) continue;  // built earlier
        Term lit = te.fork_of(lits[i].term, lits[j].term);
        std::string lbl = "fork(" + lits[i].label + ", " + lits[j].label + ")";
        Term lhs = Term::app(fold, lit);
        Term rhs = Term::app(Term::constant("f"),
                             Term::pair(Term::app(fold, lits[i].term),
                                        Term::app(fold, lits[j].term)));
        Verdict v = equiv(env, lhs, rhs, g.fuel);
        demo_record(rep, lbl, v);
        lits.push_back({lit, lbl, d});
      }
  }
  emit(g, rep);
  return rep.failed == 0 ? 0 : 1;
}

int cmd_run(const GlobalOpts& g, const std::string& file) {
  RunReport rep = run_script(file, run_options(g));
  if (g.json)
    std::cout << rep.to_json().dump(2) << "\n";
  else {
    for (const AssertRecord& a : rep.asserts) {
      std::cout << (a.pass ? "pass" : "FAIL") << "  " << a.kind << "  " << a.inputs
                << "  ->  " << a.verdict;
      if (!a.detail.empty()) std::cout << "  (" << a.detail << ")";
      std::cout << "\n";
    }
    std::cout << rep.passed << " passed, " << rep.failed << " failed\n";
  }
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for a call-by-name calculus with first-class continuations "
               "and coinductive types"};
  app.require_subcommand(1);

  GlobalOpts g;
  if (const char* env_fuel = std::getenv("MUCALC_FUEL")) g.fuel = std::atoi(env_fuel);
  app.add_flag("--json", g.json, "machine-readable report on stdout");
  app.add_option("--fuel", g.fuel, "rewrite step budget per normalization");
  app.add_option("--samples", g.samples, "sample count for randomized probes");
  app.add_option("--seed", g.seed, "seed for randomized generation");
  app.add_flag("--timings", g.timings, "include wall-clock fields in reports");

  std::string check_file, check_expr;
  CLI::App* check = app.add_subcommand("check", "type-check a script or a term");
  check->add_option("file", check_file, "a .mu script");
  check->add_option("-e,--expr", check_expr, "a single term");

  std::string norm_expr;
  bool norm_trace = false;
  CLI::App* norm = app.add_subcommand("normalize", "reduce a term to normal form");
  norm->add_option("-e,--expr", norm_expr, "the term")->required();
  norm->add_flag("--trace", norm_trace, "print each rewrite step");

  std::vector<std::string> equiv_exprs;
  CLI::App* eqv = app.add_subcommand("equiv", "decide interconvertibility of two terms");
  eqv->add_option("-e,--expr", equiv_exprs, "the two terms (give -e twice)")
      ->expected(2);

  std::string focal_expr;
  CLI::App* foc = app.add_subcommand("focal", "certify or probe focality of a function");
  foc->add_option("-e,--expr", focal_expr, "the function term")->required();

  std::string cps_type_text, cps_expr;
  std::vector<std::string> cps_oracle;
  CLI::App* cps = app.add_subcommand("cps", "translate types/terms; run the oracle");
  cps->add_option("--type", cps_type_text, "translate a type");
  cps->add_option("-e,--expr", cps_expr, "translate a term and normalize");
  cps->add_option("--oracle", cps_oracle, "compare two terms through the translation")
      ->expected(2);

  CLI::App* demo = app.add_subcommand("demo", "stock data-type demonstrations");
  demo->require_subcommand(1);
  int demo_max = 20, demo_len = 8, demo_depth = 4;
  std::string demo_elem = "e";
  CLI::App* demo_nat = demo->add_subcommand("nat", "fold over encoded naturals");
  demo_nat->add_option("--max", demo_max, "check numerals 0..max-1");
  CLI::App* demo_list = demo->add_subcommand("list", "fold over encoded lists");
  demo_list->add_option("--len", demo_len, "check lists of length 0..len-1");
  demo_list->add_option("--elem", demo_elem, "element term");
  CLI::App* demo_tree = demo->add_subcommand("tree", "fold over encoded binary trees");
  demo_tree->add_option("--depth", demo_depth, "check all literals of this depth or less");

  std::string run_file, run_script_opt;
  CLI::App* run = app.add_subcommand("run", "run a .mu script");
  run->add_option("file", run_file, "the script");
  run->add_option("--script", run_script_opt, "the script (alternative spelling)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      if (check_file.empty() && check_expr.empty())
        throw CLI::ValidationError("check", "need a script file or -e term");
      return cmd_check(g, check_file, check_expr);
    }
    if (norm->parsed()) return cmd_normalize(g, norm_expr, norm_trace);
    if (eqv->parsed()) return cmd_equiv(g, equiv_exprs);
    if (foc->parsed()) return cmd_focal(g, focal_expr);
    if (cps->parsed()) return cmd_cps(g, cps_type_text, cps_expr, cps_oracle);
    if (demo->parsed()) {
      if (demo_nat->parsed()) return cmd_demo_nat(g, demo_max);
      if (demo_list->parsed()) return cmd_demo_list(g, demo_len, demo_elem);
      if (demo_tree->parsed()) return cmd_demo_tree(g, demo_depth);
    }
    if (run->parsed()) {
      std::string f = !run_file.empty() ? run_file : run_script_opt;
      if (f.empty()) throw CLI::ValidationError("run", "need a script file");
      return cmd_run(g, f);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
