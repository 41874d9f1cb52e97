#pragma once

// Expansion of the shorthand forms (injections, case, focus, unfocus, not,
// head/tail, numerals) into the core calculus.  Expansion is type-directed:
// the wrapped function's type determines the binder annotations, so the
// environment is threaded through binders.

#include <string>

#include "mucalc/typecheck.hpp"

namespace mucalc {

namespace detail {

inline std::set<std::string> avoid_all(std::initializer_list<const Term*> ts) {
  std::set<std::string> s;
  for (const Term* t : ts) {
    for (auto& v : free_vars(*t)) s.insert(v);
    for (auto& a : free_covars(*t)) s.insert(a);
  }
  return s;
}

}  // namespace detail

// head{N} as a function: \x:nu N. pi1 (out{N} x).  The body of N must be a
// product for this to typecheck.
inline Term head_fn(const DeclTable& table, const std::string& n) {
  Type nu = Type::nu(n);
  Type body = table.unfold_body(n, nu);
  if (body.kind() != Type::Kind::Prod)
    throw TypeError("bad-nu", "head/tail need a product-shaped coinductive type: " + n);
  return Term::lam("x", nu, Term::proj(1, Term::destr(n, Term::var("x"))));
}

inline Term tail_fn(const DeclTable& table, const std::string& n) {
  Type nu = Type::nu(n);
  Type body = table.unfold_body(n, nu);
  if (body.kind() != Type::Kind::Prod)
    throw TypeError("bad-nu", "head/tail need a product-shaped coinductive type: " + n);
  return Term::lam("x", nu, Term::proj(2, Term::destr(n, Term::var("x"))));
}

namespace detail {

inline void require_streams(const DeclTable& table) {
  const CodataSig* sig = table.codata("Streams");
  if (!sig || !(sig->body ==
                FunctorExpr::prod(FunctorExpr::const_t(Type::bot()), FunctorExpr::hole())))
    throw TypeError("bad-nu", "numerals need `codata Streams = nu a. Bot * a;`");
}

}  // namespace detail

// zero : Top -> ~Streams   and   suc : ~Streams -> ~Streams, with numbers
// n |-> suc^n (zero unit) : ~Streams.
inline Term stream_zero(const DeclTable& table) {
  detail::require_streams(table);
  return Term::lam("u", Type::top(), head_fn(table, "Streams"));
}

inline Term stream_suc(const DeclTable& table) {
  detail::require_streams(table);
  Type s = Type::nu("Streams");
  return Term::lam("y", Type::neg(s),
                   Term::lam("x", s,
                             Term::app(Term::var("y"),
                                       Term::app(tail_fn(table, "Streams"), Term::var("x")))));
}

inline Term numeral_term(const DeclTable& table, int n) {
  Term t = Term::app(stream_zero(table), Term::unit());
  Term suc = stream_suc(table);
  for (int i = 0; i < n; ++i) t = Term::app(suc, t);
  return t;
}

namespace detail {

inline Term elab(const Env& env, const Term& m) {
  using K = Term::Kind;
  switch (m.kind()) {
    case K::Const:
    case K::Var:
    case K::Unit:
    case K::Hole:
      return m;
    case K::Lam: {
      Term b = elab(env.with_var(m.name(), m.ty()), m.child_a());
      return b.same_node(m.child_a()) ? m : Term::lam(m.name(), m.ty(), b).with_span(m.span());
    }
    case K::App: {
      Term a = elab(env, m.child_a()), b = elab(env, m.child_b());
      return a.same_node(m.child_a()) && b.same_node(m.child_b()) ? m
                                                      : Term::app(a, b).with_span(m.span());
    }
    case K::Pair: {
      Term a = elab(env, m.child_a()), b = elab(env, m.child_b());
      return a.same_node(m.child_a()) && b.same_node(m.child_b()) ? m
                                                      : Term::pair(a, b).with_span(m.span());
    }
    case K::Proj: {
      Term a = elab(env, m.child_a());
      return a.same_node(m.child_a()) ? m : Term::proj(m.idx(), a).with_span(m.span());
    }
    case K::Mu: {
      Term b = elab(env.with_covar(m.name(), m.ty()), m.child_a());
      return b.same_node(m.child_a()) ? m : Term::mu(m.name(), m.ty(), b).with_span(m.span());
    }
    case K::Named: {
      Term b = elab(env, m.child_a());
      return b.same_node(m.child_a()) ? m : Term::named(m.name(), b).with_span(m.span());
    }
    case K::MuPair: {
      Term b = elab(env.with_covar(m.name(), m.ty()).with_covar(m.name2(), m.ty2()), m.child_a());
      return b.same_node(m.child_a())
                 ? m
                 : Term::mu_pair(m.name(), m.ty(), m.name2(), m.ty2(), b).with_span(m.span());
    }
    case K::NamedPair: {
      Term b = elab(env, m.child_a());
      return b.same_node(m.child_a()) ? m
                                : Term::named_pair(m.name(), m.name2(), b).with_span(m.span());
    }
    case K::Destr: {
      Term b = elab(env, m.child_a());
      return b.same_node(m.child_a()) ? m : Term::destr(m.name(), b).with_span(m.span());
    }
    case K::Unfold: {
      Term b = elab(env, m.child_a());
      return b.same_node(m.child_a()) ? m : Term::unfold(m.name(), b).with_span(m.span());
    }

    case K::Inj: {
      // inj_j[B1 (+) B2] M  ~>  mu(a1:~~B1, a2:~~B2). a_j (\k:~B_j. k M)
      Term v = elab(env, m.child_a());
      Type b1 = m.ty(), b2 = m.ty2();
      auto avoid = avoid_all({&v});
      std::string a1 = fresh_name("a1", avoid);
      avoid.insert(a1);
      std::string a2 = fresh_name("a2", avoid);
      avoid.insert(a2);
      std::string k = fresh_name("k", avoid);
      const Type& bj = m.idx() == 1 ? b1 : b2;
      Term inner = Term::lam(k, Type::neg(bj), Term::app(Term::var(k), v));
      return Term::mu_pair(a1, Type::neg(Type::neg(b1)), a2, Type::neg(Type::neg(b2)),
                           Term::named(m.idx() == 1 ? a1 : a2, inner))
          .with_span(m.span());
    }
    case K::Case: {
      // case(F1, F2) with F1 : B1 -> A, F2 : B2 -> A becomes
      //   \x:B1 (+) B2. mu a:A.
      //     (mu b2:~~B2. (mu b1:~~B1. [b1, b2] x) (\x1:B1. a (F1 x1)))
      //     (\x2:B2. a (F2 x2))
      Term f1 = elab(env, m.child_a()), f2 = elab(env, m.child_b());
      Type t1 = infer(env, f1), t2 = infer(env, f2);
      if (t1.kind() != Type::Kind::Arrow)
        throw TypeError("not-a-function", "case branch has type " + print_type(t1), m.span());
      if (t2.kind() != Type::Kind::Arrow)
        throw TypeError("not-a-function", "case branch has type " + print_type(t2), m.span());
      if (!(t1.right() == t2.right()))
        throw TypeError("mismatch",
                        "case branches disagree: " + print_type(t1.right()) + " vs " +
                            print_type(t2.right()),
                        m.span());
      Type b1 = t1.left(), b2 = t2.left(), a = t1.right();
      auto avoid = avoid_all({&f1, &f2});
      std::string x = fresh_name("x", avoid);
      avoid.insert(x);
      std::string ca = fresh_name("a", avoid);
      avoid.insert(ca);
      std::string cb1 = fresh_name("b1", avoid);
      avoid.insert(cb1);
      std::string cb2 = fresh_name("b2", avoid);
      avoid.insert(cb2);
      std::string x1 = fresh_name("x1", avoid);
      avoid.insert(x1);
      std::string x2 = fresh_name("x2", avoid);
      Type nnb1 = Type::neg(Type::neg(b1)), nnb2 = Type::neg(Type::neg(b2));
      Term arm1 = Term::lam(
          x1, b1, Term::named(ca, Term::app(f1, Term::var(x1))));
      Term arm2 = Term::lam(
          x2, b2, Term::named(ca, Term::app(f2, Term::var(x2))));
      Term core = Term::app(
          Term::mu(cb2, nnb2,
                   Term::app(Term::mu(cb1, nnb1, Term::named_pair(cb1, cb2, Term::var(x))),
                             arm1)),
          arm2);
      return Term::lam(x, Type::oplus(b1, b2), Term::mu(ca, a, core)).with_span(m.span());
    }
    case K::Focus: {
      // focus(F) with F : B -> A becomes \x:~~B. mu a:A. x (\y:B. a (F y))
      Term f = elab(env, m.child_a());
      Type t = infer(env, f);
      if (t.kind() != Type::Kind::Arrow)
        throw TypeError("not-a-function", "focus needs a function, got " + print_type(t),
                        m.span());
      Type b = t.left(), a = t.right();
      auto avoid = avoid_all({&f});
      std::string x = fresh_name("x", avoid);
      avoid.insert(x);
      std::string ca = fresh_name("a", avoid);
      avoid.insert(ca);
      std::string y = fresh_name("y", avoid);
      return Term::lam(
                 x, Type::neg(Type::neg(b)),
                 Term::mu(ca, a,
                          Term::app(Term::var(x),
                                    Term::lam(y, b,
                                              Term::named(ca, Term::app(f, Term::var(y)))))))
          .with_span(m.span());
    }
    case K::Unfocus: {
      // unfocus(F) with F : ~~B -> A becomes \x:B. F (\k:~B. k x)
      Term f = elab(env, m.child_a());
      Type t = infer(env, f);
      if (t.kind() != Type::Kind::Arrow || !t.left().is_neg() || !t.left().left().is_neg())
        throw TypeError("not-a-function",
                        "unfocus needs a function from a double negation, got " + print_type(t),
                        m.span());
      Type b = t.left().left().left();
      auto avoid = avoid_all({&f});
      std::string x = fresh_name("x", avoid);
      avoid.insert(x);
      std::string k = fresh_name("k", avoid);
      return Term::lam(x, b,
                       Term::app(f, Term::lam(k, Type::neg(b),
                                              Term::app(Term::var(k), Term::var(x)))))
          .with_span(m.span());
    }
    case K::NotF: {
      // not(F) with F : B -> A becomes \k:~A. \x:B. k (F x)
      Term f = elab(env, m.child_a());
      Type t = infer(env, f);
      if (t.kind() != Type::Kind::Arrow)
        throw TypeError("not-a-function", "not needs a function, got " + print_type(t),
                        m.span());
      Type b = t.left(), a = t.right();
      auto avoid = avoid_all({&f});
      std::string k = fresh_name("k", avoid);
      avoid.insert(k);
      std::string x = fresh_name("x", avoid);
      return Term::lam(k, Type::neg(a),
                       Term::lam(x, b, Term::app(Term::var(k), Term::app(f, Term::var(x)))))
          .with_span(m.span());
    }
    case K::HeadS:
      if (!env.decls) throw TypeError("bad-nu", "head outside any declaration table", m.span());
      return head_fn(*env.decls, m.name()).with_span(m.span());
    case K::TailS:
      if (!env.decls) throw TypeError("bad-nu", "tail outside any declaration table", m.span());
      return tail_fn(*env.decls, m.name()).with_span(m.span());
    case K::Numeral:
      if (!env.decls)
        throw TypeError("bad-nu", "numerals outside any declaration table", m.span());
      return numeral_term(*env.decls, m.idx()).with_span(m.span());
  }
  throw TypeError("unbound", "unreachable term kind");
}

}  // namespace detail

inline Term elaborate(const Env& env, const Term& m) { return detail::elab(env, m); }

inline Term elaborate(const DeclTable& table, const Term& m) {
  Env env;
  env.decls = &table;
  return detail::elab(env, m);
}

}  // namespace mucalc
