#pragma once

// Rewriting engine and the decision pipeline for term equivalence.
//
// Contractive rules run leftmost-outermost to a fixpoint; the expanding
// control-passing rules (applying, projecting or pair-naming a mu) fire one
// at a time only when nothing contractive applies.  A set of already-seen
// alpha-canonical forms breaks the loops the expanding rules can create:
// a candidate step whose result was seen before is skipped, and a term all
// of whose candidate steps revisit old forms counts as normal.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mucalc/cps.hpp"
#include "mucalc/elaborate.hpp"
#include "mucalc/functor.hpp"
#include "mucalc/typecheck.hpp"

namespace mucalc {

struct StepTrace {
  std::string rule;
  Term term;  // the whole term after the step
};

struct NormResult {
  Term term;
  bool complete = false;
  int steps = 0;
  std::vector<StepTrace> trace;
};

namespace detail {

using Rebuild = std::function<Term(const Term&)>;

struct Candidate {
  Term result;
  std::string rule;
};

// Contractive rules applicable at the root of `m`, tried in a fixed order.
// `env` carries the covariable types in scope (for stripping names on
// bottom-typed channels) and the declaration table (for the unfold step).
inline std::optional<Candidate> tier1_at(const Env& env, const Term& m) {
  using K = Term::Kind;
  switch (m.kind()) {
    case K::App: {
      const Term f = m.child_a();
      if (f.kind() == K::Lam)
        return Candidate{subst_term(f.child_a(), f.name(), m.child_b()), "beta"};
      break;
    }
    case K::Proj: {
      const Term p = m.child_a();
      if (p.kind() == K::Pair)
        return Candidate{m.idx() == 1 ? p.child_a() : p.child_b(), "pi-beta"};
      break;
    }
    case K::Named: {
      const Term inner = m.child_a();
      if (inner.kind() == K::Mu)
        return Candidate{rename_covar(inner.child_a(), inner.name(), m.name()), "rename"};
      if (const Type* bt = env.covar(m.name()))
        if (bt->kind() == Type::Kind::Bot) return Candidate{inner, "bot-strip"};
      break;
    }
    case K::Mu: {
      const Term body = m.child_a();
      if (body.kind() == K::Named && body.name() == m.name() &&
          !free_covars(body.child_a()).count(m.name()))
        return Candidate{body.child_a(), "mu-eta"};
      if (m.ty().kind() == Type::Kind::Bot && !free_covars(body).count(m.name()))
        return Candidate{body, "mu-bot-gc"};
      break;
    }
    case K::NamedPair: {
      const Term inner = m.child_a();
      if (inner.kind() == K::MuPair) {
        const std::string &a1 = inner.name(), &a2 = inner.name2();
        const std::string &b1 = m.name(), &b2 = m.name2();
        Term body = inner.child_a();
        if (a1 == a2) return Candidate{rename_covar(body, a2, b2), "pair-rename"};
        std::set<std::string> avoid = free_covars(body);
        avoid.insert(b1);
        avoid.insert(b2);
        avoid.insert(a2);
        std::string tmp = fresh_name(a1, avoid);
        body = rename_covar(body, a1, tmp);
        body = rename_covar(body, a2, b2);
        body = rename_covar(body, tmp, b1);
        return Candidate{body, "pair-rename"};
      }
      break;
    }
    case K::Destr: {
      const Term arg = m.child_a();
      if (arg.kind() == K::App && arg.child_a().kind() == K::Unfold &&
          arg.child_a().name() == m.name() && env.decls &&
          env.decls->codata(m.name())) {
        const Term u = arg.child_a();
        try {
          Type ft = infer(env, u.child_a());
          if (ft.kind() == Type::Kind::Arrow) {
            const FunctorExpr& g = env.decls->codata(m.name())->body;
            Term action = functor_action(g, u, ft.left(), Type::nu(m.name()));
            return Candidate{Term::app(action, Term::app(u.child_a(), arg.child_b())),
                             "unfold-comp"};
          }
        } catch (const TypeError&) {
          // open or ill-typed coalgebra: leave the destructor alone
        }
      }
      break;
    }
    default:
      break;
  }
  return std::nullopt;
}

// Expanding rules at the root of `m`: passing a stuck mu through an
// application, a projection, or a pair of names.
inline std::optional<Candidate> tier2_at(const Env& env, const Term& m) {
  (void)env;
  using K = Term::Kind;
  switch (m.kind()) {
    case K::App: {
      const Term f = m.child_a();
      if (f.kind() == K::Mu && f.ty().kind() == Type::Kind::Arrow) {
        const Term& n = m.child_b();
        std::set<std::string> avoid = free_covars(f.child_a());
        for (auto& c : free_covars(n)) avoid.insert(c);
        std::string b = fresh_name("b", avoid);
        avoid.insert(b);
        std::string a2 = fresh_name(f.name(), avoid);
        Term body = rename_covar(f.child_a(), f.name(), a2);
        ControlContext ctx{Term::named(b, Term::app(Term::hole(), n)), f.ty()};
        return Candidate{Term::mu(b, f.ty().right(), struct_subst(body, a2, ctx)), "mu-app"};
      }
      break;
    }
    case K::Proj: {
      const Term p = m.child_a();
      if (p.kind() == K::Mu && p.ty().kind() == Type::Kind::Prod) {
        std::set<std::string> avoid = free_covars(p.child_a());
        std::string b = fresh_name("b", avoid);
        avoid.insert(b);
        std::string a2 = fresh_name(p.name(), avoid);
        Term body = rename_covar(p.child_a(), p.name(), a2);
        ControlContext ctx{Term::named(b, Term::proj(m.idx(), Term::hole())), p.ty()};
        Type bt = m.idx() == 1 ? p.ty().left() : p.ty().right();
        return Candidate{Term::mu(b, bt, struct_subst(body, a2, ctx)), "mu-proj"};
      }
      break;
    }
    case K::NamedPair: {
      const Term inner = m.child_a();
      if (inner.kind() == K::Mu && inner.ty().kind() == Type::Kind::Disj) {
        std::set<std::string> avoid = free_covars(inner.child_a());
        avoid.insert(m.name());
        avoid.insert(m.name2());
        std::string a2 = fresh_name(inner.name(), avoid);
        Term body = rename_covar(inner.child_a(), inner.name(), a2);
        ControlContext ctx{Term::named_pair(m.name(), m.name2(), Term::hole()), inner.ty()};
        return Candidate{struct_subst(body, a2, ctx), "mu-disj"};
      }
      break;
    }
    default:
      break;
  }
  return std::nullopt;
}

using RuleAt = std::optional<Candidate> (*)(const Env&, const Term&);

// First candidate step, in root-then-left-then-right order, whose resulting
// whole term has not been seen.
inline std::optional<Candidate> find_step(const Env& env, const Term& whole, const Term& m,
                                          RuleAt rule_at,
                                          const std::set<std::string>& visited,
                                          const Rebuild& rebuild) {
  if (auto c = rule_at(env, m)) {
    Term result = rebuild(c->result);
    if (!visited.count(alpha_key(result))) return Candidate{result, c->rule};
  }
  using K = Term::Kind;
  auto descend1 = [&](const Term& child, const Env& child_env,
                      auto make) -> std::optional<Candidate> {
    Rebuild rb = [&](const Term& t) { return rebuild(make(t)); };
    return find_step(child_env, whole, child, rule_at, visited, rb);
  };
  switch (m.kind()) {
    case K::Lam:
      return descend1(m.child_a(), env.with_var(m.name(), m.ty()),
                      [&](const Term& t) { return Term::lam(m.name(), m.ty(), t); });
    case K::App: {
      if (auto c = descend1(m.child_a(), env,
                            [&](const Term& t) { return Term::app(t, m.child_b()); }))
        return c;
      return descend1(m.child_b(), env,
                      [&](const Term& t) { return Term::app(m.child_a(), t); });
    }
    case K::Pair: {
      if (auto c = descend1(m.child_a(), env,
                            [&](const Term& t) { return Term::pair(t, m.child_b()); }))
        return c;
      return descend1(m.child_b(), env,
                      [&](const Term& t) { return Term::pair(m.child_a(), t); });
    }
    case K::Proj:
      return descend1(m.child_a(), env,
                      [&](const Term& t) { return Term::proj(m.idx(), t); });
    case K::Mu:
      return descend1(m.child_a(), env.with_covar(m.name(), m.ty()),
                      [&](const Term& t) { return Term::mu(m.name(), m.ty(), t); });
    case K::Named:
      return descend1(m.child_a(), env,
                      [&](const Term& t) { return Term::named(m.name(), t); });
    case K::MuPair:
      return descend1(m.child_a(),
                      env.with_covar(m.name(), m.ty()).with_covar(m.name2(), m.ty2()),
                      [&](const Term& t) {
                        return Term::mu_pair(m.name(), m.ty(), m.name2(), m.ty2(), t);
                      });
    case K::NamedPair:
      return descend1(m.child_a(), env, [&](const Term& t) {
        return Term::named_pair(m.name(), m.name2(), t);
      });
    case K::Destr:
      return descend1(m.child_a(), env,
                      [&](const Term& t) { return Term::destr(m.name(), t); });
    case K::Unfold:
      return descend1(m.child_a(), env,
                      [&](const Term& t) { return Term::unfold(m.name(), t); });
    default:
      return std::nullopt;
  }
}

// Every applicable step at any position, in root-then-left-then-right order.
inline void collect_steps(const Env& env, const Term& m, RuleAt rule_at,
                          const Rebuild& rebuild, std::vector<Candidate>& out) {
  if (auto c = rule_at(env, m)) out.push_back(Candidate{rebuild(c->result), c->rule});
  using K = Term::Kind;
  auto descend1 = [&](const Term& child, const Env& child_env, auto make) {
    Rebuild rb = [&](const Term& t) { return rebuild(make(t)); };
    collect_steps(child_env, child, rule_at, rb, out);
  };
  switch (m.kind()) {
    case K::Lam:
      descend1(m.child_a(), env.with_var(m.name(), m.ty()),
               [&](const Term& t) { return Term::lam(m.name(), m.ty(), t); });
      break;
    case K::App:
      descend1(m.child_a(), env,
               [&](const Term& t) { return Term::app(t, m.child_b()); });
      descend1(m.child_b(), env,
               [&](const Term& t) { return Term::app(m.child_a(), t); });
      break;
    case K::Pair:
      descend1(m.child_a(), env,
               [&](const Term& t) { return Term::pair(t, m.child_b()); });
      descend1(m.child_b(), env,
               [&](const Term& t) { return Term::pair(m.child_a(), t); });
      break;
    case K::Proj:
      descend1(m.child_a(), env, [&](const Term& t) { return Term::proj(m.idx(), t); });
      break;
    case K::Mu:
      descend1(m.child_a(), env.with_covar(m.name(), m.ty()),
               [&](const Term& t) { return Term::mu(m.name(), m.ty(), t); });
      break;
    case K::Named:
      descend1(m.child_a(), env, [&](const Term& t) { return Term::named(m.name(), t); });
      break;
    case K::MuPair:
      descend1(m.child_a(),
               env.with_covar(m.name(), m.ty()).with_covar(m.name2(), m.ty2()),
               [&](const Term& t) {
                 return Term::mu_pair(m.name(), m.ty(), m.name2(), m.ty2(), t);
               });
      break;
    case K::NamedPair:
      descend1(m.child_a(), env, [&](const Term& t) {
        return Term::named_pair(m.name(), m.name2(), t);
      });
      break;
    case K::Destr:
      descend1(m.child_a(), env, [&](const Term& t) { return Term::destr(m.name(), t); });
      break;
    case K::Unfold:
      descend1(m.child_a(), env,
               [&](const Term& t) { return Term::unfold(m.name(), t); });
      break;
    default:
      break;
  }
}

}  // namespace detail

// Reduce `m` under `env`.  The contractive rules run to a fixed point; then
// one context-capturing step is taken and the contractive phase rerun.  A
// capture step is accepted only if it leads somewhere new: the capturing
// rules can reconstitute their own redex (jumps through a continuation pair
// rebind the channel), so progress is judged on the contractive normal forms.
// Stops when no capture step leads to an unseen form, or when the step budget
// runs out (then `complete` is false).
inline NormResult normalize(const Env& env, Term m, int fuel = 10000,
                            bool want_trace = false) {
  NormResult out;
  static const std::set<std::string> kNoVisited;
  detail::Rebuild id = [](const Term& t) { return t; };

  bool hit_fuel = false;
  auto tier1_fix = [&](Term t, std::vector<StepTrace>* tr) {
    while (true) {
      if (out.steps >= fuel) {
        hit_fuel = true;
        return t;
      }
      auto c = detail::find_step(env, t, t, &detail::tier1_at, kNoVisited, id);
      if (!c) return t;
      t = c->result;
      ++out.steps;
      if (tr) tr->push_back({c->rule, t});
    }
  };

  m = tier1_fix(m, want_trace ? &out.trace : nullptr);
  std::set<std::string> snapshots;
  snapshots.insert(alpha_key(m));
  while (!hit_fuel) {
    std::vector<detail::Candidate> cands;
    detail::collect_steps(env, m, &detail::tier2_at, id, cands);
    bool advanced = false;
    for (auto& c : cands) {
      if (out.steps >= fuel) {
        hit_fuel = true;
        break;
      }
      ++out.steps;  // every try burns fuel, accepted or not
      std::vector<StepTrace> local;
      if (want_trace) local.push_back({c.rule, c.result});
      Term nf = tier1_fix(c.result, want_trace ? &local : nullptr);
      if (hit_fuel) break;
      if (snapshots.insert(alpha_key(nf)).second) {
        m = nf;
        if (want_trace)
          out.trace.insert(out.trace.end(), local.begin(), local.end());
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  out.term = m;
  out.complete = !hit_fuel;
  return out;
}

// Replace every subterm of the unit type by the unit value.
inline Term collapse_top(const Env& env, const Term& m) {
  using K = Term::Kind;
  if (m.kind() != K::Unit) {
    Type t = infer(env, m);
    if (t.kind() == Type::Kind::Top) return Term::unit();
  }
  switch (m.kind()) {
    case K::Lam:
      return Term::lam(m.name(), m.ty(),
                       collapse_top(env.with_var(m.name(), m.ty()), m.child_a()));
    case K::App:
      return Term::app(collapse_top(env, m.child_a()), collapse_top(env, m.child_b()));
    case K::Pair:
      return Term::pair(collapse_top(env, m.child_a()), collapse_top(env, m.child_b()));
    case K::Proj:
      return Term::proj(m.idx(), collapse_top(env, m.child_a()));
    case K::Mu:
      return Term::mu(m.name(), m.ty(),
                      collapse_top(env.with_covar(m.name(), m.ty()), m.child_a()));
    case K::Named:
      return Term::named(m.name(), collapse_top(env, m.child_a()));
    case K::MuPair:
      return Term::mu_pair(
          m.name(), m.ty(), m.name2(), m.ty2(),
          collapse_top(env.with_covar(m.name(), m.ty()).with_covar(m.name2(), m.ty2()),
                       m.child_a()));
    case K::NamedPair:
      return Term::named_pair(m.name(), m.name2(), collapse_top(env, m.child_a()));
    case K::Destr:
      return Term::destr(m.name(), collapse_top(env, m.child_a()));
    case K::Unfold:
      return Term::unfold(m.name(), collapse_top(env, m.child_a()));
    default:
      return m;
  }
}

struct Verdict {
  enum class Outcome { Equal, Distinct, Unknown };
  Outcome outcome;
  std::string detail;

  bool equal() const { return outcome == Outcome::Equal; }
  bool distinct() const { return outcome == Outcome::Distinct; }
  std::string word() const {
    switch (outcome) {
      case Outcome::Equal: return "equal";
      case Outcome::Distinct: return "distinct";
      default: return "unknown";
    }
  }
};

namespace detail {

// Normal form followed by unit collapse, iterated until stable (collapse can
// expose further contractions).
inline std::optional<Term> canonical(const Env& env, Term m, int fuel) {
  for (int i = 0; i < 4; ++i) {
    NormResult n = normalize(env, m, fuel);
    if (!n.complete) return std::nullopt;
    Term c = collapse_top(env, n.term);
    if (alpha_eq(c, n.term)) return c;
    m = c;
  }
  return std::nullopt;
}

// Single eta-class contractions (function eta, surjective pairing, the
// pair-of-names eta) at any position; used only when deciding equivalence.
inline void eta_contractions(const Term& m, std::vector<Term>& out,
                             const Rebuild& rebuild) {
  using K = Term::Kind;
  if (m.kind() == K::Lam) {
    const Term body = m.child_a();
    if (body.kind() == K::App && body.child_b().kind() == K::Var &&
        body.child_b().name() == m.name() && !free_vars(body.child_a()).count(m.name()))
      out.push_back(rebuild(body.child_a()));
  }
  if (m.kind() == K::Pair) {
    const Term l = m.child_a(), r = m.child_b();
    if (l.kind() == K::Proj && l.idx() == 1 && r.kind() == K::Proj && r.idx() == 2 &&
        alpha_eq(l.child_a(), r.child_a()))
      out.push_back(rebuild(l.child_a()));
  }
  if (m.kind() == K::MuPair) {
    const Term body = m.child_a();
    if (body.kind() == K::NamedPair && body.name() == m.name() &&
        body.name2() == m.name2() && m.name() != m.name2()) {
      const auto fcv = free_covars(body.child_a());
      if (!fcv.count(m.name()) && !fcv.count(m.name2()))
        out.push_back(rebuild(body.child_a()));
    }
  }
  if (m.kind() == K::Mu) {
    // A mu at a structured type is interconvertible with the form that
    // respects the structure: the eta law at that type composed with the
    // control-passing step.  Needed to join eta instances whose body is
    // itself a captured continuation.
    const Type t = m.ty();
    const Term body = m.child_a();
    if (t.kind() == Type::Kind::Arrow) {
      std::string x = fresh_name("x", free_vars(body));
      std::string b = fresh_name("b", free_covars(body));
      ControlContext ctx{Term::named(b, Term::app(Term::hole(), Term::var(x))), t};
      out.push_back(rebuild(Term::lam(
          x, t.left(), Term::mu(b, t.right(), struct_subst(body, m.name(), ctx)))));
    } else if (t.kind() == Type::Kind::Prod) {
      std::string b = fresh_name("b", free_covars(body));
      ControlContext c1{Term::named(b, Term::proj(1, Term::hole())), t};
      ControlContext c2{Term::named(b, Term::proj(2, Term::hole())), t};
      out.push_back(
          rebuild(Term::pair(Term::mu(b, t.left(), struct_subst(body, m.name(), c1)),
                             Term::mu(b, t.right(), struct_subst(body, m.name(), c2)))));
    } else if (t.kind() == Type::Kind::Disj) {
      std::set<std::string> avoid = free_covars(body);
      std::string a1 = fresh_name("a1", avoid);
      avoid.insert(a1);
      std::string a2 = fresh_name("a2", avoid);
      ControlContext ctx{Term::named_pair(a1, a2, Term::hole()), t};
      out.push_back(rebuild(Term::mu_pair(a1, t.left(), a2, t.right(),
                                          struct_subst(body, m.name(), ctx))));
    }
  }
  auto descend1 = [&](const Term& child, auto make) {
    Rebuild rb = [&](const Term& t) { return rebuild(make(t)); };
    eta_contractions(child, out, rb);
  };
  switch (m.kind()) {
    case K::Lam:
      descend1(m.child_a(), [&](const Term& t) { return Term::lam(m.name(), m.ty(), t); });
      break;
    case K::App:
      descend1(m.child_a(), [&](const Term& t) { return Term::app(t, m.child_b()); });
      descend1(m.child_b(), [&](const Term& t) { return Term::app(m.child_a(), t); });
      break;
    case K::Pair:
      descend1(m.child_a(), [&](const Term& t) { return Term::pair(t, m.child_b()); });
      descend1(m.child_b(), [&](const Term& t) { return Term::pair(m.child_a(), t); });
      break;
    case K::Proj:
      descend1(m.child_a(), [&](const Term& t) { return Term::proj(m.idx(), t); });
      break;
    case K::Mu:
      descend1(m.child_a(), [&](const Term& t) { return Term::mu(m.name(), m.ty(), t); });
      break;
    case K::Named:
      descend1(m.child_a(), [&](const Term& t) { return Term::named(m.name(), t); });
      break;
    case K::MuPair:
      descend1(m.child_a(), [&](const Term& t) {
        return Term::mu_pair(m.name(), m.ty(), m.name2(), m.ty2(), t);
      });
      break;
    case K::NamedPair:
      descend1(m.child_a(),
               [&](const Term& t) { return Term::named_pair(m.name(), m.name2(), t); });
      break;
    case K::Destr:
      descend1(m.child_a(), [&](const Term& t) { return Term::destr(m.name(), t); });
      break;
    case K::Unfold:
      descend1(m.child_a(), [&](const Term& t) { return Term::unfold(m.name(), t); });
      break;
    default:
      break;
  }
}

// Breadth-first closure of a canonical form under single eta contractions
// (recanonicalized), capped.  Returns the set of alpha keys reached.
inline std::map<std::string, Term> eta_closure(const Env& env, const Term& start, int fuel,
                                               size_t cap = 64) {
  std::map<std::string, Term> seen;
  std::vector<Term> queue{start};
  seen.emplace(alpha_key(start), start);
  Rebuild id = [](const Term& t) { return t; };
  for (size_t qi = 0; qi < queue.size() && seen.size() < cap; ++qi) {
    Term cur = queue[qi];
    std::vector<Term> nexts;
    eta_contractions(cur, nexts, id);
    for (Term& n : nexts) {
      auto c = canonical(env, n, fuel);
      if (!c) continue;
      std::string key = alpha_key(*c);
      if (seen.emplace(key, *c).second) {
        queue.push_back(*c);
        if (seen.size() >= cap) break;
      }
    }
  }
  return seen;
}

// Terms built purely from constants, unit, pairs and constant-headed
// application spines describe observable first-order data: if two such terms
// differ, no theory step can bring them together.
inline bool first_order_rigid(const Term& m) {
  using K = Term::Kind;
  switch (m.kind()) {
    case K::Const:
    case K::Unit:
      return true;
    case K::Pair:
      return first_order_rigid(m.child_a()) && first_order_rigid(m.child_b());
    case K::App: {
      Term head = m.child_a();
      if (!first_order_rigid(m.child_b())) return false;
      while (head.kind() == K::App) {
        if (!first_order_rigid(head.child_b())) return false;
        head = head.child_a();
      }
      return head.kind() == K::Const;
    }
    default:
      return false;
  }
}

inline bool coinductive_free(const Term& m) {
  using K = Term::Kind;
  switch (m.kind()) {
    case K::Destr:
    case K::Unfold:
      return false;
    case K::Lam:
    case K::Mu:
      return !contains_nu(m.ty()) && coinductive_free(m.child_a());
    case K::MuPair:
      return !contains_nu(m.ty()) && !contains_nu(m.ty2()) && coinductive_free(m.child_a());
    case K::Inj:
      return !contains_nu(m.ty()) && !contains_nu(m.ty2()) && coinductive_free(m.child_a());
    case K::App:
    case K::Pair:
    case K::Case:
      return coinductive_free(m.child_a()) && coinductive_free(m.child_b());
    case K::Proj:
    case K::Named:
    case K::NamedPair:
    case K::Focus:
    case K::Unfocus:
    case K::NotF:
      return coinductive_free(m.child_a());
    default:
      return true;
  }
}

}  // namespace detail

// Decide whether two terms of the same type are interconvertible.  Equal
// verdicts always come from a syntactic join; the translation oracle only
// ever separates.
inline Verdict equiv(const Env& env, const Term& lhs, const Term& rhs, int fuel = 10000) {
  Term l = elaborate(env, lhs);
  Term r = elaborate(env, rhs);
  Type lt = infer(env, l);
  Type rt = infer(env, r);
  if (!(lt == rt))
    throw TypeError("mismatch", "compared terms have different types: " + print_type(lt) +
                                    " vs " + print_type(rt));
  auto cl = detail::canonical(env, l, fuel);
  auto cr = detail::canonical(env, r, fuel);
  if (!cl || !cr) return {Verdict::Outcome::Unknown, "normalization did not finish"};
  if (alpha_eq(*cl, *cr)) return {Verdict::Outcome::Equal, "joined by reduction"};

  auto left_set = detail::eta_closure(env, *cl, fuel);
  auto right_set = detail::eta_closure(env, *cr, fuel);
  for (auto& [k, t] : right_set)
    if (left_set.count(k)) return {Verdict::Outcome::Equal, "joined by eta"};

  if (detail::first_order_rigid(*cl) && detail::first_order_rigid(*cr))
    return {Verdict::Outcome::Distinct, "distinct observable values"};

  if (env.decls && detail::coinductive_free(*cl) && detail::coinductive_free(*cr)) {
    try {
      if (!cps_equal(*env.decls, env, *cl, *cr))
        return {Verdict::Outcome::Distinct, "separated by translation"};
      return {Verdict::Outcome::Unknown, "translation agrees but no syntactic join found"};
    } catch (const OracleUnsupported&) {
      // fall through
    }
  }
  return {Verdict::Outcome::Unknown, "no decision procedure applies"};
}

inline Verdict equiv(const DeclTable& table, const Term& lhs, const Term& rhs,
                     int fuel = 10000) {
  Env env;
  env.decls = &table;
  return equiv(env, lhs, rhs, fuel);
}

}  // namespace mucalc
