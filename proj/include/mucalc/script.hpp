#pragma once

// Script runner.  A .mu file is a ;-terminated sequence of declarations and
// assertions; running one yields a RunReport: one record per declaration
// (status + type) and one per assertion (kind, inputs, verdict, steps).  The
// report serializes to JSON with a stable field order so that identical runs
// produce byte-identical output; wall-clock fields are added only on request.

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mucalc/cps.hpp"
#include "mucalc/focality.hpp"
#include "mucalc/parse.hpp"
#include "mucalc/rewrite.hpp"

namespace mucalc {

struct RunOptions {
  int fuel = 10000;
  int samples = 40;
  uint64_t seed = 1;
  bool timings = false;     // include wall-time fields in the JSON report
  bool check_only = false;  // validate declarations, queue assertions unrun
};

struct DeclRecord {
  std::string kind;    // "type" | "codata" | "const" | "def"
  std::string name;
  std::string type;    // declared / inferred type, printed
  std::string status;  // "ok" (errors abort the run instead)
};

struct AssertRecord {
  std::string kind;     // "equiv" | "distinct" | "check" | "focal" | "nonfocal" | "oracle"
  std::string inputs;   // printed operands
  std::string verdict;  // outcome word
  bool pass = false;
  int steps = 0;        // rewrite steps spent (probe count for focality)
  double wall_ms = 0.0;
  std::string detail;
};

struct RunReport {
  std::string source_name;
  RunOptions options;
  std::vector<DeclRecord> decls;
  std::vector<AssertRecord> asserts;
  int passed = 0;
  int failed = 0;

  int exit_code() const { return failed > 0 ? 1 : 0; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["script"] = source_name;
    j["options"] = {{"fuel", options.fuel},
                    {"samples", options.samples},
                    {"seed", options.seed}};
    j["declarations"] = nlohmann::ordered_json::array();
    for (const DeclRecord& d : decls) {
      nlohmann::ordered_json r;
      r["kind"] = d.kind;
      r["name"] = d.name;
      r["type"] = d.type;
      r["status"] = d.status;
      j["declarations"].push_back(std::move(r));
    }
    j["assertions"] = nlohmann::ordered_json::array();
    for (const AssertRecord& a : asserts) {
      nlohmann::ordered_json r;
      r["kind"] = a.kind;
      r["inputs"] = a.inputs;
      r["verdict"] = a.verdict;
      r["pass"] = a.pass;
      r["steps"] = a.steps;
      if (options.timings) r["ms"] = a.wall_ms;
      if (!a.detail.empty()) r["detail"] = a.detail;
      j["assertions"].push_back(std::move(r));
    }
    j["summary"] = {{"declarations", decls.size()},
                    {"assertions", asserts.size()},
                    {"passed", passed},
                    {"failed", failed},
                    {"outcome", failed == 0 ? "pass" : "fail"}};
    return j;
  }
};

namespace detail {

// Free term variables with no declaration behave as opaque constants of a
// like-named atomic type; free control variables are an error (there is no
// sensible ambient continuation to invent).
inline Env assertion_env(const DeclTable& table, std::initializer_list<const Term*> terms) {
  Env env;
  env.decls = &table;
  for (const Term* t : terms)
    for (const std::string& x : free_vars(*t))
      if (!env.var(x)) env = env.with_var(x, Type::constant(x));
  return env;
}

inline std::string term_inputs(const Term& a, const Term& b) {
  return print_term(a) + "  ==  " + print_term(b);
}

// Prefer the assertion as written in the script over a re-rendering of the
// parsed terms, which has all definitions inlined and is hard to read.
inline std::string assertion_text(const Statement& st, std::string fallback) {
  if (st.text.rfind("assert ", 0) == 0) {
    size_t sp = st.text.find(' ', 7);
    if (sp != std::string::npos && sp + 1 < st.text.size()) return st.text.substr(sp + 1);
  }
  return fallback;
}

}  // namespace detail

inline RunReport run_source(const std::string& source, const std::string& name,
                            const RunOptions& opts) {
  RunReport rep;
  rep.source_name = name;
  rep.options = opts;

  DeclTable table;
  std::vector<Statement> stmts = parse_script(source, table);

  for (const Statement& st : stmts) {
    using K = Statement::Kind;
    switch (st.kind) {
      case K::TypeAlias:
        rep.decls.push_back({"type", st.name, print_type(st.ty), "ok"});
        continue;
      case K::Codata:
        rep.decls.push_back(
            {"codata", st.name, print_type(st.fbody.instantiate(Type::nu(st.name))), "ok"});
        continue;
      case K::ConstSig:
        rep.decls.push_back({"const", st.name, print_type(st.ty), "ok"});
        continue;
      case K::Def: {
        // A definition must check at its declared type; failures abort.
        Env env;
        env.decls = &table;
        Term body = elaborate(table, st.lhs);
        Type got = infer(env, body);
        if (!(got == st.ty))
          throw TypeError("mismatch", "definition " + st.name + " declared " +
                                          print_type(st.ty) + " but its body has type " +
                                          print_type(got),
                          st.span);
        rep.decls.push_back({"def", st.name, print_type(st.ty), "ok"});
        continue;
      }
      default:
        break;
    }

    AssertRecord rec;
    auto t0 = std::chrono::steady_clock::now();
    if (opts.check_only) {
      rec.kind = "queued";
      rec.inputs = st.text;
      rec.verdict = "queued";
      rec.pass = true;
      rep.asserts.push_back(std::move(rec));
      ++rep.passed;
      continue;
    }
    switch (st.kind) {
      case K::AssertEquiv:
      case K::AssertDistinct: {
        bool want_equal = st.kind == K::AssertEquiv;
        rec.kind = want_equal ? "equiv" : "distinct";
        Term l = elaborate(table, st.lhs);
        Term r = elaborate(table, st.rhs);
        Env env = detail::assertion_env(table, {&l, &r});
        NormResult nl = normalize(env, l, opts.fuel);
        NormResult nr = normalize(env, r, opts.fuel);
        rec.steps = nl.steps + nr.steps;
        Verdict v = equiv(env, l, r, opts.fuel);
        rec.inputs = detail::assertion_text(st, detail::term_inputs(st.lhs, st.rhs));
        rec.verdict = v.word();
        rec.detail = v.detail;
        rec.pass = want_equal ? v.equal() : v.distinct();
        break;
      }
      case K::AssertCheck: {
        rec.kind = "check";
        Term m = elaborate(table, st.lhs);
        Env env = detail::assertion_env(table, {&m});
        Type got = infer(env, m);
        rec.inputs = detail::assertion_text(
            st, print_term(st.lhs) + "  :  " + print_type(st.ty));
        bool ok = got == st.ty;
        rec.verdict = ok ? "ok" : "mismatch";
        if (!ok) rec.detail = "inferred " + print_type(got);
        rec.pass = ok;
        break;
      }
      case K::AssertFocal:
      case K::AssertNonfocal: {
        bool want_focal = st.kind == K::AssertFocal;
        rec.kind = want_focal ? "focal" : "nonfocal";
        rec.inputs = detail::assertion_text(st, print_term(st.lhs));
        if (auto cert = certify_focal(table, st.lhs)) {
          rec.verdict = "certified";
          rec.detail = cert->rule;
          rec.steps = 0;
          rec.pass = want_focal;
        } else {
          FocalReport fr = test_focal(table, st.lhs, opts.samples, opts.seed, opts.fuel);
          rec.steps = fr.tested;
          if (fr.outcome == Verdict::Outcome::Distinct) {
            rec.verdict = "counterexample";
            if (fr.witness) rec.detail = print_term(*fr.witness);
            rec.pass = !want_focal;
          } else if (fr.outcome == Verdict::Outcome::Equal) {
            rec.verdict = "no counterexample";
            rec.pass = want_focal;
          } else {
            rec.verdict = "unknown";
            rec.detail = fr.detail;
            rec.pass = false;
          }
        }
        break;
      }
      case K::AssertOracle: {
        rec.kind = "oracle";
        Term l = elaborate(table, st.lhs);
        Term r = elaborate(table, st.rhs);
        Env env = detail::assertion_env(table, {&l, &r});
        Type lt = infer(env, l);
        Type rt = infer(env, r);
        if (!(lt == rt))
          throw TypeError("mismatch", "compared terms have different types: " +
                                          print_type(lt) + " vs " + print_type(rt),
                          st.span);
        bool eq = cps_equal(table, env, l, r);
        rec.inputs = detail::assertion_text(st, detail::term_inputs(st.lhs, st.rhs));
        rec.verdict = eq ? "equal" : "distinct";
        rec.pass = eq;
        break;
      }
      default:
        break;
    }
    auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rep.asserts.push_back(std::move(rec));
    if (rep.asserts.back().pass)
      ++rep.passed;
    else
      ++rep.failed;
  }
  return rep;
}

inline RunReport run_script(const std::string& path, const RunOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read script: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return run_source(ss.str(), path, opts);
}

}  // namespace mucalc
