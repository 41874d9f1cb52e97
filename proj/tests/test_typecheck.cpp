#include <catch2/catch_amalgamated.hpp>

#include "mucalc/elaborate.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/parse.hpp"
#include "mucalc/script.hpp"
#include "mucalc/typecheck.hpp"

using namespace mucalc;

namespace {
Type infer_str(const std::string& term, const std::string& decls = "") {
  DeclTable t;
  if (!decls.empty()) parse_script(decls, t);
  Env env;
  env.decls = &t;
  return infer(env, elaborate(t, parse_term(term, t)));
}
}  // namespace

TEST_CASE("inference covers every core form") {
  CHECK(print_type(infer_str("\\x:P. x")) == "P -> P");
  CHECK(print_type(infer_str("unit")) == "Top");
  CHECK(print_type(infer_str("\\x:P. \\y:Q. <x, y>")) == "P -> Q -> P * Q");
  CHECK(print_type(infer_str("\\x:P * Q. pi2 x")) == "P * Q -> Q");
  CHECK(print_type(infer_str("h p", "const h : P -> Q; const p : P;")) == "Q");
  CHECK(print_type(infer_str("mu a:P. [a] p", "const p : P;")) == "P");
  CHECK(print_type(infer_str("mu(a1:~P, a2:~Q). [a1] k", "const k : ~P;")) ==
        "~P \\/ ~Q");
}

TEST_CASE("naming consumes, capture produces") {
  // A covariable of type A consumes terms of type A and yields Bot.
  DeclTable t;
  parse_script("const p : P;", t);
  Env env;
  env.decls = &t;
  Env inner = env.with_covar("a", Type::constant("P"));
  CHECK(infer(inner, parse_term("[a] p", t)) == Type::bot());

  // The paired form consumes a disjunction.
  Env env2 = env.with_covar("a1", Type::neg(Type::constant("P")))
                 .with_covar("a2", Type::neg(Type::constant("Q")))
                 .with_var("w", Type::disj(Type::neg(Type::constant("P")),
                                           Type::neg(Type::constant("Q"))));
  CHECK(infer(env2, parse_term("[a1, a2] w", t)) == Type::bot());

  // Outside the binder the covariable is unknown.
  CHECK_THROWS_AS(infer(env, parse_term("[a] p", t)), TypeError);
}

TEST_CASE("coinductive forms") {
  DeclTable t;
  parse_script("codata Streams = nu a. Bot * a; const f : P -> P;", t);
  Env env;
  env.decls = &t;

  // out peels one layer of the functor.
  CHECK(print_type(infer(env, parse_term("\\s:Streams. out{Streams} s", t))) ==
        "Streams -> Bot * Streams");

  // unfold seeds a carrier through a coalgebra.
  Env env2 = env.with_var("x", Type::constant("P"));
  CHECK(print_type(infer(env2, parse_term(
                             "unfold{Streams}(\\w:~P. <w (f x), \\z:P. w (f z)>)",
                             t))) == "~P -> Streams");
}

TEST_CASE("type errors carry positions and causes") {
  DeclTable t;
  parse_script("const p : P; const h : P -> Q;", t);
  Env env;
  env.decls = &t;

  CHECK_THROWS_AS(infer(env, parse_term("p p", t)), TypeError);        // non-function applied
  CHECK_THROWS_AS(infer(env, parse_term("pi1 p", t)), TypeError);      // non-product projected
  CHECK_THROWS_AS(infer(env, parse_term("h (h p)", t)), TypeError);    // argument mismatch
  CHECK_THROWS_AS(infer(env, parse_term("mu a:Q. [a] p", t)), TypeError);  // wrong channel type
  CHECK_THROWS_AS(parse_term("out{Missing} p", t), ParseError);  // unknown stream type
  parse_script("codata Streams = nu a. Bot * a;", t);
  CHECK_THROWS_AS(infer(env, parse_term("out{Streams} p", t)), TypeError);
}

TEST_CASE("elaborated sugar typechecks at the annotated types") {
  DeclTable t;
  parse_script("const g : Top -> P; const f : Q -> P;", t);
  Env env;
  env.decls = &t;

  Term inj = elaborate(t, parse_term("inj1[Top (+) Q] unit", t));
  CHECK(print_type(infer(env, inj)) == "~~Top \\/ ~~Q");

  Term cs = elaborate(t, parse_term("case(\\u:Top. g u, \\z:Q. f z)", t));
  CHECK(print_type(infer(env, cs)) == "~~Top \\/ ~~Q -> P");

  // Elaboration leaves no sugar nodes behind.
  std::function<void(const Term&)> walk = [&](const Term& m) {
    using K = Term::Kind;
    REQUIRE(m.kind() != K::Inj);
    REQUIRE(m.kind() != K::Case);
    REQUIRE(m.kind() != K::Numeral);
    REQUIRE(m.kind() != K::HeadS);
    REQUIRE(m.kind() != K::TailS);
    if (m.child_a().valid()) walk(m.child_a());
    if (m.child_b().valid()) walk(m.child_b());
  };
  walk(cs);
  walk(inj);
}

TEST_CASE("no closed inhabitants of the empty type") {
  // The enumerator, given only harmless constants, never finds a closed
  // term of type Bot: control can move answers around but cannot mint one.
  DeclTable t;
  default_signature(t);
  Env env;
  env.decls = &t;
  Generator gen(env, 7);
  CHECK(gen.enumerate(Type::bot(), 9, 50).empty());

  // Under an observer covariable the same search space is inhabited.
  Env obs = env.with_covar("w0", Type::constant("P"));
  Generator gen2(obs, 7);
  CHECK_FALSE(gen2.enumerate(Type::bot(), 9, 50).empty());
}

TEST_CASE("definitions must match their declared types") {
  RunOptions opts;
  CHECK_THROWS_AS(run_source("def bad : P -> P = \\x:P. <x, x>;", "inline", opts),
                  TypeError);
  // A well-typed definition is recorded.
  RunReport rep = run_source("def idp : P -> P = \\x:P. x;", "inline", opts);
  REQUIRE(rep.decls.size() == 1);
  CHECK(rep.decls[0].status == "ok");
  CHECK(rep.exit_code() == 0);
}
