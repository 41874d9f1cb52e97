#pragma once

// Bidirectional-free, annotation-driven type inference.  Every binder carries
// its type, so inference is syntax-directed; `check` just compares.

#include <optional>
#include <string>
#include <vector>

#include "mucalc/decls.hpp"
#include "mucalc/pretty.hpp"
#include "mucalc/syntax.hpp"

namespace mucalc {

struct TypeError : std::runtime_error {
  std::string kind;  // mismatch | unbound | not-a-function | not-a-product |
                     // not-a-disjunction | bad-nu
  SrcSpan span;
  TypeError(std::string k, const std::string& msg, SrcSpan sp = {})
      : std::runtime_error(sp.known() ? msg + " (line " + std::to_string(sp.line) + ", col " +
                                            std::to_string(sp.col) + ")"
                                      : msg),
        kind(std::move(k)),
        span(sp) {}
};

struct Env {
  std::vector<std::pair<std::string, Type>> vars;    // term variables
  std::vector<std::pair<std::string, Type>> covars;  // continuation variables
  const DeclTable* decls = nullptr;

  const Type* var(const std::string& x) const {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it)
      if (it->first == x) return &it->second;
    return nullptr;
  }
  const Type* covar(const std::string& a) const {
    for (auto it = covars.rbegin(); it != covars.rend(); ++it)
      if (it->first == a) return &it->second;
    return nullptr;
  }
  Env with_var(const std::string& x, const Type& t) const {
    Env e = *this;
    e.vars.emplace_back(x, t);
    return e;
  }
  Env with_covar(const std::string& a, const Type& t) const {
    Env e = *this;
    e.covars.emplace_back(a, t);
    return e;
  }
};

namespace detail {

[[noreturn]] inline void mismatch(const Type& want, const Type& got, const Term& at,
                                  const std::string& what) {
  throw TypeError("mismatch",
                  what + ": expected " + print_type(want) + ", got " + print_type(got),
                  at.span());
}

}  // namespace detail

inline Type infer(const Env& env, const Term& m) {
  using K = Term::Kind;
  switch (m.kind()) {
    case K::Const: {
      if (env.decls)
        if (const Type* t = env.decls->constant(m.name())) return *t;
      throw TypeError("unbound", "unknown constant: " + m.name(), m.span());
    }
    case K::Var: {
      if (const Type* t = env.var(m.name())) return *t;
      throw TypeError("unbound", "unbound variable: " + m.name(), m.span());
    }
    case K::Lam:
      return Type::arrow(m.ty(), infer(env.with_var(m.name(), m.ty()), m.child_a()));
    case K::App: {
      Type f = infer(env, m.child_a());
      if (f.kind() != Type::Kind::Arrow)
        throw TypeError("not-a-function",
                        "application head has type " + print_type(f), m.span());
      Type arg = infer(env, m.child_b());
      if (!(arg == f.left())) detail::mismatch(f.left(), arg, m.child_b(), "argument");
      return f.right();
    }
    case K::Unit:
      return Type::top();
    case K::Pair:
      return Type::prod(infer(env, m.child_a()), infer(env, m.child_b()));
    case K::Proj: {
      Type t = infer(env, m.child_a());
      if (t.kind() != Type::Kind::Prod)
        throw TypeError("not-a-product", "projection from type " + print_type(t), m.span());
      return m.idx() == 1 ? t.left() : t.right();
    }
    case K::Mu: {
      Type b = infer(env.with_covar(m.name(), m.ty()), m.child_a());
      if (b.kind() != Type::Kind::Bot) detail::mismatch(Type::bot(), b, m.child_a(), "mu body");
      return m.ty();
    }
    case K::Named: {
      const Type* t = env.covar(m.name());
      if (!t) throw TypeError("unbound", "unbound continuation variable: " + m.name(), m.span());
      Type got = infer(env, m.child_a());
      if (!(got == *t)) detail::mismatch(*t, got, m.child_a(), "named term");
      return Type::bot();
    }
    case K::MuPair: {
      Type b = infer(env.with_covar(m.name(), m.ty()).with_covar(m.name2(), m.ty2()), m.child_a());
      if (b.kind() != Type::Kind::Bot) detail::mismatch(Type::bot(), b, m.child_a(), "mu body");
      return Type::disj(m.ty(), m.ty2());
    }
    case K::NamedPair: {
      const Type* t1 = env.covar(m.name());
      if (!t1)
        throw TypeError("unbound", "unbound continuation variable: " + m.name(), m.span());
      const Type* t2 = env.covar(m.name2());
      if (!t2)
        throw TypeError("unbound", "unbound continuation variable: " + m.name2(), m.span());
      Type want = Type::disj(*t1, *t2);
      Type got = infer(env, m.child_a());
      if (!(got == want)) detail::mismatch(want, got, m.child_a(), "named pair");
      return Type::bot();
    }
    case K::Destr: {
      if (!env.decls || !env.decls->codata(m.name()))
        throw TypeError("bad-nu", "unknown coinductive type: " + m.name(), m.span());
      Type t = infer(env, m.child_a());
      Type want = Type::nu(m.name());
      if (!(t == want)) detail::mismatch(want, t, m.child_a(), "destructor argument");
      return env.decls->unfold_body(m.name(), want);
    }
    case K::Unfold: {
      if (!env.decls || !env.decls->codata(m.name()))
        throw TypeError("bad-nu", "unknown coinductive type: " + m.name(), m.span());
      Type f = infer(env, m.child_a());
      if (f.kind() != Type::Kind::Arrow)
        throw TypeError("not-a-function",
                        "coalgebra has type " + print_type(f), m.span());
      Type want = env.decls->unfold_body(m.name(), f.left());
      if (!(f.right() == want)) detail::mismatch(want, f.right(), m.child_a(), "coalgebra result");
      return Type::arrow(f.left(), Type::nu(m.name()));
    }
    case K::Hole:
      throw TypeError("unbound", "hole has no type", m.span());
    default:
      throw TypeError("unbound",
                      "term still contains shorthand forms; elaborate first", m.span());
  }
}

inline void check(const Env& env, const Term& m, const Type& want) {
  Type got = infer(env, m);
  if (!(got == want)) detail::mismatch(want, got, m, "term");
}

inline Type infer_closed(const DeclTable& table, const Term& m) {
  Env env;
  env.decls = &table;
  return infer(env, m);
}

}  // namespace mucalc
