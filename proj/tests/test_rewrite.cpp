#include <catch2/catch_amalgamated.hpp>

#include "axiom_instances.hpp"
#include "mucalc/elaborate.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/parse.hpp"
#include "mucalc/rewrite.hpp"

using namespace mucalc;

namespace {

DeclTable& table_with_streams() {
  static DeclTable table = [] {
    DeclTable t;
    default_signature(t);
    parse_script("codata Streams = nu a. Bot * a;", t);
    return t;
  }();
  return table;
}

Term pt(const std::string& src) { return parse_term(src, table_with_streams()); }

Env base_env() {
  Env env;
  env.decls = &table_with_streams();
  return env;
}

Verdict eq(const std::string& l, const std::string& r, const Env& env) {
  return equiv(env, pt(l), pt(r));
}

}  // namespace

TEST_CASE("every primitive equation holds on generated closed instances") {
  DeclTable table;
  default_signature(table);
  auto sets = testing::axiom_instances(table, 7, 6);
  REQUIRE(sets.size() == 13);
  for (auto& set : sets) {
    INFO("equation " << set.name);
    REQUIRE(set.instances.size() == 6);
    for (auto& ins : set.instances) {
      Verdict v = equiv(table, ins.lhs, ins.rhs);
      INFO(print_term(ins.lhs) << "  ==  " << print_term(ins.rhs) << "  -> " << v.detail);
      CHECK(v.equal());
    }
  }
}

TEST_CASE("normalization is deterministic and reports completion") {
  Env env = base_env();
  Term m = pt("(\\x:P. f1 x) ((\\y:P. y) p0)");
  NormResult a = normalize(env, m, 10000, true);
  NormResult b = normalize(env, m, 10000, true);
  CHECK(a.complete);
  CHECK(a.steps > 0);
  CHECK(alpha_eq(a.term, b.term));
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].rule == b.trace[i].rule);
  CHECK(print_term(a.term) == "f1 p0");

  NormResult again = normalize(env, a.term, 10000);
  CHECK(again.steps == 0);
  CHECK(alpha_eq(again.term, a.term));
}

TEST_CASE("step traces carry the rule names") {
  Env env = base_env();

  NormResult beta = normalize(env, pt("(\\x:P. f1 x) p0"), 10000, true);
  REQUIRE_FALSE(beta.trace.empty());
  CHECK(beta.trace.front().rule == "beta");

  NormResult gc = normalize(env, pt("\\k:~P. mu a:Bot. k p0"), 10000, true);
  REQUIRE(gc.trace.size() == 1);
  CHECK(gc.trace[0].rule == "mu-bot-gc");
  CHECK(print_term(gc.term) == "\\k:~P. k p0");

  // an application pushed through a stuck mu, then beta and the final jump
  NormResult app = normalize(
      env, pt("(mu a:P -> Q. [a] (\\z:P. mu d:Q. [a] (\\y:P. h1 y))) p0"), 10000, true);
  std::vector<std::string> rules;
  for (auto& st : app.trace) rules.push_back(st.rule);
  CHECK(std::find(rules.begin(), rules.end(), "mu-app") != rules.end());
  CHECK(print_term(app.term) == "h1 p0");

  NormResult uf = normalize(
      env.with_var("kp", Type::neg(Type::constant("P"))),
      pt("out{Streams} (unfold{Streams}(\\w:~P. <w p0, \\z:P. w (f1 z)>) kp)"), 10000,
      true);
  rules.clear();
  for (auto& st : uf.trace) rules.push_back(st.rule);
  CHECK(std::find(rules.begin(), rules.end(), "unfold-comp") != rules.end());
}

TEST_CASE("fuel exhaustion is reported, not hidden") {
  Env env = base_env();
  Term m = pt("(\\x:P. f1 x) ((\\y:P. y) p0)");
  NormResult n = normalize(env, m, 1);
  CHECK_FALSE(n.complete);

  Verdict v = equiv(env, m, pt("f1 p0"), 1);
  CHECK(v.outcome == Verdict::Outcome::Unknown);
  CHECK(v.detail == "normalization did not finish");
}

TEST_CASE("equivalence joins by reduction") {
  Env env = base_env();
  Verdict v = eq("(\\x:P. <x, h1 x>) p0", "<p0, h1 p0>", env);
  CHECK(v.equal());
  CHECK(v.detail == "joined by reduction");

  // control transfer: the captured application lands inside the mu body
  Verdict w = eq("h1 ((mu a:P. [a] p0))", "h1 p0", env);
  CHECK(w.equal());
}

TEST_CASE("equivalence joins by eta when reduction alone is stuck") {
  Env env = base_env().with_var("m", Type::arrow(Type::constant("P"), Type::constant("Q")))
                .with_var("pr", Type::prod(Type::constant("P"), Type::constant("Q")))
                .with_var("d", Type::disj(Type::neg(Type::constant("P")),
                                          Type::neg(Type::constant("Q"))));

  Verdict fun = eq("\\x:P. m x", "m", env);
  CHECK(fun.equal());
  CHECK(fun.detail == "joined by eta");

  Verdict pair = eq("<pi1 pr, pi2 pr>", "pr", env);
  CHECK(pair.equal());
  CHECK(pair.detail == "joined by eta");

  Verdict mupair = eq("mu(a1:~P, a2:~Q). [a1, a2] d", "d", env);
  CHECK(mupair.equal());
  CHECK(mupair.detail == "joined by eta");
}

TEST_CASE("unit-typed terms collapse") {
  Env env = base_env().with_var("t", Type::top());
  Verdict v = eq("unit", "t", env);
  CHECK(v.equal());
  Verdict w = eq("\\x:P. unit", "\\x:P. pi1 <t, x>", env);
  CHECK(w.equal());
}

TEST_CASE("distinct verdicts") {
  Env env = base_env();

  Verdict rigid = eq("p0", "f1 p0", env);
  CHECK(rigid.distinct());
  CHECK(rigid.detail == "distinct observable values");

  Verdict sep = eq("\\x:P. x", "\\x:P. p0", env);
  CHECK(sep.distinct());
  CHECK(sep.detail == "separated by translation");
}

TEST_CASE("honest unknown when no decision procedure applies") {
  Env env = base_env().with_var("k", Type::neg(Type::nu("Streams")));
  Verdict v = eq("\\s:Streams. k (pi2 (out{Streams} s))", "\\s:Streams. k s", env);
  CHECK(v.outcome == Verdict::Outcome::Unknown);
  CHECK(v.detail == "no decision procedure applies");
}

TEST_CASE("comparing terms of different types is an error") {
  Env env = base_env();
  CHECK_THROWS_AS(eq("p0", "q0", env), TypeError);
  CHECK_THROWS_AS(eq("\\x:P. x", "p0", env), TypeError);
}

TEST_CASE("verdicts are reproducible across reruns with one seed") {
  DeclTable table;
  default_signature(table);
  auto run = [&] {
    std::string sig;
    for (auto& set : testing::axiom_instances(table, 99, 3))
      for (auto& ins : set.instances) {
        sig += equiv(table, ins.lhs, ins.rhs).word();
        sig += '|';
        sig += print_term(ins.lhs);
        sig += '\n';
      }
    return sig;
  };
  CHECK(run() == run());
}
