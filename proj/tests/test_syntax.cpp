#include <catch2/catch_amalgamated.hpp>

#include "mucalc/elaborate.hpp"
#include "mucalc/parse.hpp"
#include "mucalc/syntax.hpp"

using namespace mucalc;

namespace {
Term tparse(const std::string& s) {
  DeclTable t;
  return parse_term(s, t);
}
Type typarse(const std::string& s) {
  DeclTable t;
  return parse_type(s, t);
}
}  // namespace

TEST_CASE("alpha equivalence ignores binder names") {
  Type P = Type::constant("P");
  CHECK(alpha_eq(Term::lam("x", P, Term::var("x")), Term::lam("y", P, Term::var("y"))));
  CHECK(alpha_eq(Term::mu("a", P, Term::named("a", Term::constant("p"))),
                 Term::mu("b", P, Term::named("b", Term::constant("p")))));
  CHECK(alpha_eq(tparse("mu(a1:~P, a2:~Q). [a2] x"), tparse("mu(b1:~P, b2:~Q). [b2] x")));

  // Same shape, different annotation: not alpha-equal.
  CHECK_FALSE(alpha_eq(Term::lam("x", P, Term::var("x")),
                       Term::lam("x", Type::constant("Q"), Term::var("x"))));
  // Bound against free.
  CHECK_FALSE(alpha_eq(Term::lam("x", P, Term::var("x")), Term::lam("y", P, Term::var("x"))));
  // Covariable order in a context pair matters.
  CHECK_FALSE(alpha_eq(tparse("mu(a1:~P, a2:~Q). [a1] x"), tparse("mu(b1:~P, b2:~Q). [b2] x")));
}

TEST_CASE("alpha keys agree with alpha_eq") {
  auto a = tparse("\\x:P. \\y:Q. <x, y>");
  auto b = tparse("\\u:P. \\v:Q. <u, v>");
  auto c = tparse("\\u:P. \\v:Q. <v, u>");
  CHECK(alpha_key(a) == alpha_key(b));
  CHECK(alpha_key(a) != alpha_key(c));
}

TEST_CASE("free variables and covariables") {
  Term m = tparse("mu a:P. [a] (f (mu b:Q. [c] x))");
  auto fv = free_vars(m);
  auto fc = free_covars(m);
  CHECK(fv == std::set<std::string>{"f", "x"});
  CHECK(fc == std::set<std::string>{"c"});

  Term closed = tparse("\\x:P. mu a:Q. [a] (h x)");
  CHECK(free_vars(closed) == std::set<std::string>{"h"});
  CHECK(free_covars(closed).empty());
}

TEST_CASE("substitution avoids capture") {
  Type P = Type::constant("P");
  // (\y. x)[x := y] must not let the binder grab the substituted y.
  Term m = Term::lam("y", P, Term::var("x"));
  Term r = subst_term(m, "x", Term::var("y"));
  CHECK(r.kind() == Term::Kind::Lam);
  CHECK(r.name() != "y");
  CHECK(free_vars(r) == std::set<std::string>{"y"});
  CHECK(alpha_eq(r, Term::lam("w", P, Term::var("y"))));

  // No-op when the variable does not occur.
  Term n = tparse("\\z:P. z");
  CHECK(alpha_eq(subst_term(n, "x", Term::constant("p0")), n));
}

TEST_CASE("covariable renaming respects binders") {
  Term m = tparse("mu a:P. [b] (mu b:Q. [b] y)");
  // Renaming the free b leaves the shadowed inner b alone.
  Term r = rename_covar(m, "b", "c");
  CHECK(alpha_eq(r, tparse("mu a:P. [c] (mu b:Q. [b] y)")));
  CHECK(free_covars(r) == std::set<std::string>{"c"});
}

TEST_CASE("structural context substitution") {
  // [a]C -> [b](C p0): the shape used when a captured context absorbs an
  // application.
  Term m = tparse("mu a:P -> Q. [a] h");
  ControlContext ctx;
  ctx.term = Term::named("b", Term::app(Term::hole(), Term::constant("p0")));
  ctx.hole_ty = Type::arrow(Type::constant("P"), Type::constant("Q"));
  Term body = m.child_a();  // [a] h
  Term out = struct_subst(body, "a", ctx);
  CHECK(alpha_eq(out, Term::named("b", Term::app(Term::var("h"), Term::constant("p0")))));
}

TEST_CASE("parse and print round-trip") {
  for (const char* src : {
           "mu a:P. [a] x",
           "\\x:P * Q. <pi2 x, pi1 x>",
           "mu(a1:~P, a2:~Q). [a1] (\\z:P. [a2] (h z))",
           "\\f:P -> P. \\x:P. f (f x)",
           "mu b:Bot. [b] (k x)",
           "\\s:T. pi1 (out{T} s)",
       }) {
    DeclTable t;
    if (std::string(src).find("{T}") != std::string::npos)
      t.declare_codata("T", FunctorExpr::prod(FunctorExpr::const_t(Type::bot()),
                                              FunctorExpr::hole()));
    Term once = parse_term(src, t);
    Term twice = parse_term(print_term(once), t);
    CHECK(alpha_eq(once, twice));
  }
}

TEST_CASE("type syntax precedence") {
  CHECK(typarse("~P * Q") == Type::prod(Type::neg(Type::constant("P")), Type::constant("Q")));
  CHECK(typarse("P \\/ Q -> P") ==
        Type::arrow(Type::disj(Type::constant("P"), Type::constant("Q")), Type::constant("P")));
  CHECK(typarse("P -> Q -> P") ==
        Type::arrow(Type::constant("P"),
                    Type::arrow(Type::constant("Q"), Type::constant("P"))));
  // The sum connective is sugar for shielded disjunction.
  CHECK(typarse("P (+) Q") == Type::disj(Type::neg(Type::neg(Type::constant("P"))),
                                         Type::neg(Type::neg(Type::constant("Q")))));
  CHECK(typarse("~~P") == Type::neg(Type::neg(Type::constant("P"))));
}

TEST_CASE("parser rejects malformed input") {
  DeclTable t;
  CHECK_THROWS_AS(parse_term("mu a:P. [a", t), ParseError);
  CHECK_THROWS_AS(parse_term("\\x. x", t), ParseError);             // missing annotation
  CHECK_THROWS_AS(parse_term("pi1", t), ParseError);                // projection without operand
  CHECK_THROWS_AS(parse_term("inj1[P * Q] x", t), ParseError);      // annotation not a sum
  CHECK_THROWS_AS(parse_type("P -> ", t), ParseError);
  CHECK_THROWS_AS(parse_term("case(\\x:P. x)", t), ParseError);     // case needs two branches
}

TEST_CASE("script declarations reject duplicates and bad bodies") {
  {
    DeclTable t;
    CHECK_THROWS_AS(parse_script("const p : P; const p : Q;", t), DeclError);
  }
  {
    DeclTable t;
    // The self variable must sit under a product, disjunction, or double
    // negation; bare arrows over it are not a covered shape.
    CHECK_THROWS_AS(parse_script("codata Bad = nu a. a -> Bot;", t), ParseError);
  }
  {
    DeclTable t;
    auto sts = parse_script("type N = ~P; def idn : N -> N = \\x:N. x;", t);
    CHECK(sts.size() == 2);
    CHECK(t.alias("N") != nullptr);
    CHECK(t.def("idn") != nullptr);
  }
}

TEST_CASE("numerals require the counting stream type") {
  DeclTable bare;
  Term n = parse_term("#2", bare);  // parse is fine ...
  CHECK(n.kind() == Term::Kind::Numeral);
  CHECK_THROWS_AS(elaborate(bare, n), TypeError);  // ... elaboration is not

  DeclTable t;
  parse_script("codata Streams = nu a. Bot * a;", t);
  Term e = elaborate(t, parse_term("#2", t));
  CHECK(free_vars(e).empty());
  CHECK(hole_count(e) == 0);
}
