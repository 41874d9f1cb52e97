#pragma once

// Closed, well-typed instance pairs for each primitive equation of the
// rewriting engine.  Metavariables are filled by the term generator in an
// environment extended with whatever binders the equation mentions; both
// sides are then closed by abstracting a fixed variable pool, so every pair
// typechecks in the bare declaration-table environment and can be fed to the
// equivalence pipeline and to the translation oracle alike.

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mucalc/gen.hpp"
#include "mucalc/rewrite.hpp"

namespace mucalc::testing {

struct Instance {
  Term lhs;
  Term rhs;
};

struct AxiomInstances {
  std::string name;
  std::vector<Instance> instances;
};

namespace detail_ax {

inline Type tP() { return Type::constant("P"); }
inline Type tQ() { return Type::constant("Q"); }

struct PoolVar {
  std::string name;
  Type ty;
};

// Variables available to generated metavariables; instances are closed by
// abstracting these in order, innermost last.
inline const std::vector<PoolVar>& pool() {
  static const std::vector<PoolVar> v = {{"u1", Type::neg(tP())},
                                         {"u2", tP()},
                                         {"u3", Type::neg(tQ())},
                                         {"u4", Type::arrow(tP(), tQ())}};
  return v;
}

inline Env pool_env(const DeclTable& table) {
  Env env;
  env.decls = &table;
  for (auto& v : pool()) env = env.with_var(v.name, v.ty);
  return env;
}

inline Term close_over_pool(Term t) {
  const auto& vs = pool();
  for (auto it = vs.rbegin(); it != vs.rend(); ++it)
    t = Term::lam(it->name, it->ty, t);
  return t;
}

inline std::vector<Term> fill(const Env& env, const Type& ty, uint64_t seed, int want) {
  Generator g(env, seed);
  auto out = g.sample(ty, static_cast<size_t>(want), 7);
  if (out.empty()) throw std::runtime_error("no terms generated for a metavariable");
  for (size_t i = 0; static_cast<int>(out.size()) < want; ++i)  // cycle if sampling stalled
    out.push_back(out[i % out.size()]);
  return out;
}

}  // namespace detail_ax

// `want` instance pairs per equation, deterministic in `seed`.  Every pair is
// closed and both sides typecheck at the same type; a failure to do so throws.
inline std::vector<AxiomInstances> axiom_instances(const DeclTable& table, uint64_t seed,
                                                   int want) {
  using namespace detail_ax;
  const Type P = tP(), Q = tQ(), B = Type::bot();
  const Type nP = Type::neg(P), nQ = Type::neg(Q);
  const Env base = pool_env(table);

  std::vector<AxiomInstances> out;
  auto emit = [&](const std::string& name, std::vector<Instance> v) {
    Env check;
    check.decls = &table;
    for (auto& ins : v) {
      Type lt = infer(check, ins.lhs);
      Type rt = infer(check, ins.rhs);
      if (!(lt == rt))
        throw std::runtime_error("instance sides differ in type for " + name);
      if (!free_vars(ins.lhs).empty() || !free_covars(ins.lhs).empty() ||
          !free_vars(ins.rhs).empty() || !free_covars(ins.rhs).empty())
        throw std::runtime_error("instance not closed for " + name);
    }
    out.push_back({name, std::move(v)});
  };
  auto closed = [&](const Term& l, const Term& r) {
    return Instance{close_over_pool(l), close_over_pool(r)};
  };

  {  // (\x.M) N == M[x:=N]
    auto ms = fill(base.with_var("x", P), Q, seed + 1, want);
    auto ns = fill(base, P, seed + 2, want);
    std::vector<Instance> v;
    for (int i = 0; i < want; ++i)
      v.push_back(closed(Term::app(Term::lam("x", P, ms[i]), ns[i]),
                         subst_term(ms[i], "x", ns[i])));
    emit("beta", std::move(v));
  }
  {  // \x. M x == M when x is not free in M
    auto ms = fill(base, Type::arrow(P, Q), seed + 3, want);
    std::vector<Instance> v;
    for (auto& m : ms)
      v.push_back(closed(Term::lam("xe", P, Term::app(m, Term::var("xe"))), m));
    emit("fun-eta", std::move(v));
  }
  {  // pi_j <M1, M2> == M_j
    auto m1s = fill(base, P, seed + 4, want);
    auto m2s = fill(base, Q, seed + 5, want);
    std::vector<Instance> v;
    for (int i = 0; i < want; ++i) {
      int j = 1 + (i % 2);
      v.push_back(closed(Term::proj(j, Term::pair(m1s[i], m2s[i])),
                         j == 1 ? m1s[i] : m2s[i]));
    }
    emit("pi-beta", std::move(v));
  }
  {  // <pi1 M, pi2 M> == M
    auto ms = fill(base, Type::prod(P, Q), seed + 6, want);
    std::vector<Instance> v;
    for (auto& m : ms)
      v.push_back(closed(Term::pair(Term::proj(1, m), Term::proj(2, m)), m));
    emit("pair-eta", std::move(v));
  }
  {  // unit == M at the unit type
    auto ms = fill(base, Type::top(), seed + 7, want);
    std::vector<Instance> v;
    for (auto& m : ms) v.push_back(closed(Term::unit(), m));
    emit("top-collapse", std::move(v));
  }
  {  // [b](mu a. M) == M[a:=b]
    auto ms = fill(base.with_covar("a", P).with_covar("b", P), B, seed + 8, want);
    std::vector<Instance> v;
    for (auto& m : ms)
      v.push_back(closed(Term::mu("b", P, Term::named("b", Term::mu("a", P, m))),
                         Term::mu("b", P, rename_covar(m, "a", "b"))));
    emit("rename", std::move(v));
  }
  {  // mu a. [a] M == M when a is not free in M
    auto ms = fill(base, P, seed + 9, want);
    std::vector<Instance> v;
    for (auto& m : ms)
      v.push_back(closed(Term::mu("ae", P, Term::named("ae", m)), m));
    emit("mu-eta", std::move(v));
  }
  {  // [b1,b2](mu(a1,a2). M) == M[a1:=b1, a2:=b2]
    Env e = base.with_covar("a1", nP).with_covar("a2", nQ).with_covar("b1", nP).with_covar(
        "b2", nQ);
    auto ms = fill(e, B, seed + 10, want);
    std::vector<Instance> v;
    for (auto& m : ms) {
      Term lhs = Term::mu_pair(
          "b1", nP, "b2", nQ,
          Term::named_pair("b1", "b2", Term::mu_pair("a1", nP, "a2", nQ, m)));
      Term renamed = rename_covar(rename_covar(m, "a1", "b1"), "a2", "b2");
      v.push_back(closed(lhs, Term::mu_pair("b1", nP, "b2", nQ, renamed)));
    }
    emit("pair-rename", std::move(v));
  }
  {  // mu(a1,a2). [a1,a2] M == M when neither name is free in M
    auto ms = fill(base, Type::disj(nP, nQ), seed + 11, want);
    std::vector<Instance> v;
    for (auto& m : ms)
      v.push_back(closed(
          Term::mu_pair("ae1", nP, "ae2", nQ, Term::named_pair("ae1", "ae2", m)), m));
    emit("mu-pair-eta", std::move(v));
  }
  {  // [b] M == M when M already has the empty type
    auto ms = fill(base.with_covar("bb", B), B, seed + 12, want);
    std::vector<Instance> v;
    for (auto& m : ms)
      v.push_back(closed(Term::mu("bb", B, Term::named("bb", m)), Term::mu("bb", B, m)));
    emit("bot-strip", std::move(v));
  }
  {  // (mu a. M) N == mu b. M with [a]C replaced by [b](C N)
    auto ms = fill(base.with_covar("a", Type::arrow(P, Q)), B, seed + 13, want);
    auto ns = fill(base, P, seed + 14, want);
    std::vector<Instance> v;
    for (int i = 0; i < want; ++i) {
      Term lhs = Term::app(Term::mu("a", Type::arrow(P, Q), ms[i]), ns[i]);
      ControlContext ctx{Term::named("b", Term::app(Term::hole(), ns[i])),
                         Type::arrow(P, Q)};
      v.push_back(closed(lhs, Term::mu("b", Q, struct_subst(ms[i], "a", ctx))));
    }
    emit("mu-app", std::move(v));
  }
  {  // pi_j (mu a. M) == mu b. M with [a]C replaced by [b](pi_j C)
    auto ms = fill(base.with_covar("a", Type::prod(P, Q)), B, seed + 15, want);
    std::vector<Instance> v;
    for (int i = 0; i < want; ++i) {
      int j = 1 + (i % 2);
      Term lhs = Term::proj(j, Term::mu("a", Type::prod(P, Q), ms[i]));
      ControlContext ctx{Term::named("b", Term::proj(j, Term::hole())),
                         Type::prod(P, Q)};
      v.push_back(closed(
          lhs, Term::mu("b", j == 1 ? P : Q, struct_subst(ms[i], "a", ctx))));
    }
    emit("mu-proj", std::move(v));
  }
  {  // [b1,b2](mu a. M) == M with [a]C replaced by [b1,b2]C
    auto ms = fill(base.with_covar("a", Type::disj(nP, nQ)), B, seed + 16, want);
    std::vector<Instance> v;
    for (auto& m : ms) {
      Term lhs = Term::mu_pair(
          "b1", nP, "b2", nQ,
          Term::named_pair("b1", "b2", Term::mu("a", Type::disj(nP, nQ), m)));
      ControlContext ctx{Term::named_pair("b1", "b2", Term::hole()), Type::disj(nP, nQ)};
      v.push_back(
          closed(lhs, Term::mu_pair("b1", nP, "b2", nQ, struct_subst(m, "a", ctx))));
    }
    emit("mu-disj", std::move(v));
  }
  return out;
}

}  // namespace mucalc::testing
