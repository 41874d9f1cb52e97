#pragma once

// Focality of functions: a syntactic certifier for the shapes that are focal
// by construction, and an empirical tester that probes the defining equation
//   F (mu a. M)  ==  mu b. M[ a [] := b (F []) ]
// on generated bodies M.  The probe runs with an extra observer continuation
// in scope, which is what separates genuinely focal functions from ones that
// merely look focal in a closed world (e.g. constant functions).

#include <optional>
#include <string>
#include <vector>

#include "mucalc/elaborate.hpp"
#include "mucalc/gen.hpp"
#include "mucalc/rewrite.hpp"

namespace mucalc {

namespace detail {

inline int occurrences(const Term& t, const std::string& x) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == x ? 1 : 0;
    case Term::Kind::Lam:
      return t.name() == x ? 0 : occurrences(t.child_a(), x);
    default: {
      int n = 0;
      if (t.child_a().valid()) n += occurrences(t.child_a(), x);
      if (t.child_b().valid()) n += occurrences(t.child_b(), x);
      return n;
    }
  }
}

// Does the unique free occurrence of x sit on an evaluation spine built from
// application-to-the-left, projections, lambda bodies, mu bodies and
// continuation passing?  (Caller guarantees occurrences(t, x) == 1.)
inline bool grammar_spine(const Term& t, const std::string& x) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == x;
    case Term::Kind::App:
      if (occurrences(t.child_b(), x) > 0) return false;
      return grammar_spine(t.child_a(), x);
    case Term::Kind::Lam:
      if (t.name() == x) return false;
      return grammar_spine(t.child_a(), x);
    case Term::Kind::Proj:
    case Term::Kind::Mu:
    case Term::Kind::Named:
    case Term::Kind::MuPair:
    case Term::Kind::NamedPair:
      return grammar_spine(t.child_a(), x);
    default:
      return false;
  }
}

}  // namespace detail

struct FocalCertificate {
  std::string rule;
  std::vector<FocalCertificate> premises;
  std::string note;
};

std::optional<FocalCertificate> certify_focal(const DeclTable& table, const Term& f);

namespace detail {

inline bool var_free_in(const Term& t, const std::string& x) {
  return occurrences(t, x) > 0;
}
inline bool covar_free_in(const Term& t, const std::string& a) {
  return free_covars(t).count(a) > 0;
}

inline std::optional<FocalCertificate> match_not_of(const Term& f) {
  // \k:~A. \x:B. k (G x)
  if (f.kind() != Term::Kind::Lam) return std::nullopt;
  const Term& inner = f.child_a();
  if (inner.kind() != Term::Kind::Lam) return std::nullopt;
  const std::string& k = f.name();
  const std::string& x = inner.name();
  if (k == x) return std::nullopt;
  const Term& body = inner.child_a();
  if (body.kind() != Term::Kind::App) return std::nullopt;
  const Term& head = body.child_a();
  const Term& arg = body.child_b();
  if (head.kind() != Term::Kind::Var || head.name() != k) return std::nullopt;
  if (arg.kind() != Term::Kind::App) return std::nullopt;
  const Term& g = arg.child_a();
  const Term& gx = arg.child_b();
  if (gx.kind() != Term::Kind::Var || gx.name() != x) return std::nullopt;
  if (var_free_in(g, k) || var_free_in(g, x)) return std::nullopt;
  return FocalCertificate{"not-of", {}, "precomposition with " + print_term(g)};
}

inline std::optional<FocalCertificate> match_focus_image(const Term& f) {
  // \x:~~B. mu a:A. x (\y:B. [a] (G y))
  if (f.kind() != Term::Kind::Lam) return std::nullopt;
  const std::string& x = f.name();
  const Term& mu = f.child_a();
  if (mu.kind() != Term::Kind::Mu) return std::nullopt;
  const std::string& a = mu.name();
  const Term& app = mu.child_a();
  if (app.kind() != Term::Kind::App) return std::nullopt;
  const Term& head = app.child_a();
  if (head.kind() != Term::Kind::Var || head.name() != x) return std::nullopt;
  const Term& lam = app.child_b();
  if (lam.kind() != Term::Kind::Lam) return std::nullopt;
  const std::string& y = lam.name();
  const Term& named = lam.child_a();
  if (named.kind() != Term::Kind::Named || named.name() != a) return std::nullopt;
  const Term& gy = named.child_a();
  if (gy.kind() != Term::Kind::App) return std::nullopt;
  const Term& g = gy.child_a();
  const Term& yv = gy.child_b();
  if (yv.kind() != Term::Kind::Var || yv.name() != y) return std::nullopt;
  if (var_free_in(g, x) || var_free_in(g, y) || covar_free_in(g, a)) return std::nullopt;
  return FocalCertificate{"focus-image", {}, "focus of " + print_term(g)};
}

inline std::optional<FocalCertificate> match_composition(const DeclTable& table,
                                                         const Term& f) {
  // \x:B. G2 (G1 x)
  if (f.kind() != Term::Kind::Lam) return std::nullopt;
  const std::string& x = f.name();
  const Term& body = f.child_a();
  if (body.kind() != Term::Kind::App) return std::nullopt;
  const Term& g2 = body.child_a();
  const Term& inner = body.child_b();
  if (inner.kind() != Term::Kind::App) return std::nullopt;
  const Term& g1 = inner.child_a();
  const Term& xv = inner.child_b();
  if (xv.kind() != Term::Kind::Var || xv.name() != x) return std::nullopt;
  if (var_free_in(g1, x) || var_free_in(g2, x)) return std::nullopt;
  auto c1 = certify_focal(table, g1);
  if (!c1) return std::nullopt;
  auto c2 = certify_focal(table, g2);
  if (!c2) return std::nullopt;
  return FocalCertificate{"composition", {*c1, *c2}, ""};
}

inline std::optional<FocalCertificate> match_prod_action(const DeclTable& table,
                                                         const Term& f) {
  // \p:X1*X2. < A1 (pi1 p), A2 (pi2 p) >
  if (f.kind() != Term::Kind::Lam) return std::nullopt;
  const std::string& p = f.name();
  const Term& body = f.child_a();
  if (body.kind() != Term::Kind::Pair) return std::nullopt;
  Term comp[2] = {body.child_a(), body.child_b()};
  Term act[2];
  for (int j = 0; j < 2; ++j) {
    const Term& c = comp[j];
    if (c.kind() != Term::Kind::App) return std::nullopt;
    const Term& pr = c.child_b();
    if (pr.kind() != Term::Kind::Proj || pr.idx() != j + 1) return std::nullopt;
    if (pr.child_a().kind() != Term::Kind::Var || pr.child_a().name() != p)
      return std::nullopt;
    act[j] = c.child_a();
    if (var_free_in(act[j], p)) return std::nullopt;
  }
  auto c1 = certify_focal(table, act[0]);
  if (!c1) return std::nullopt;
  auto c2 = certify_focal(table, act[1]);
  if (!c2) return std::nullopt;
  return FocalCertificate{"product-action", {*c1, *c2}, ""};
}

inline std::optional<FocalCertificate> match_disj_action(const DeclTable& table,
                                                         const Term& f) {
  // \v:X1\/X2. mu(c1:Y1, c2:Y2). [c2] (K2 (mu d2:X2. [c1] (K1 (mu d1:X1. [d1,d2] v))))
  if (f.kind() != Term::Kind::Lam) return std::nullopt;
  const std::string& v = f.name();
  const Term& mp = f.child_a();
  if (mp.kind() != Term::Kind::MuPair) return std::nullopt;
  const std::string& c1 = mp.name();
  const std::string& c2 = mp.name2();
  if (c1 == c2) return std::nullopt;
  const Term& n2 = mp.child_a();
  if (n2.kind() != Term::Kind::Named || n2.name() != c2) return std::nullopt;
  const Term& app2 = n2.child_a();
  if (app2.kind() != Term::Kind::App) return std::nullopt;
  Term k2 = app2.child_a();
  const Term& mu2 = app2.child_b();
  if (mu2.kind() != Term::Kind::Mu) return std::nullopt;
  const std::string& d2 = mu2.name();
  const Term& n1 = mu2.child_a();
  if (n1.kind() != Term::Kind::Named || n1.name() != c1) return std::nullopt;
  const Term& app1 = n1.child_a();
  if (app1.kind() != Term::Kind::App) return std::nullopt;
  Term k1 = app1.child_a();
  const Term& mu1 = app1.child_b();
  if (mu1.kind() != Term::Kind::Mu) return std::nullopt;
  const std::string& d1 = mu1.name();
  if (d1 == d2) return std::nullopt;
  const Term& np = mu1.child_a();
  if (np.kind() != Term::Kind::NamedPair || np.name() != d1 || np.name2() != d2)
    return std::nullopt;
  if (np.child_a().kind() != Term::Kind::Var || np.child_a().name() != v)
    return std::nullopt;
  for (const Term* k : {&k1, &k2}) {
    if (var_free_in(*k, v)) return std::nullopt;
    for (const std::string* cv : {&c1, &c2, &d1, &d2})
      if (covar_free_in(*k, *cv)) return std::nullopt;
  }
  auto p1 = certify_focal(table, k1);
  if (!p1) return std::nullopt;
  auto p2 = certify_focal(table, k2);
  if (!p2) return std::nullopt;
  return FocalCertificate{"sum-action", {*p1, *p2}, ""};
}

}  // namespace detail

inline std::optional<FocalCertificate> certify_focal(const DeclTable& table,
                                                     const Term& f) {
  Term fe = elaborate(table, f);
  if (auto c = detail::match_not_of(fe)) return c;
  if (auto c = detail::match_focus_image(fe)) return c;
  if (fe.kind() == Term::Kind::Lam) {
    const std::string& x = fe.name();
    const Term& body = fe.child_a();
    if (detail::occurrences(body, x) == 1 && detail::grammar_spine(body, x))
      return FocalCertificate{"context-grammar", {}, ""};
  }
  if (auto c = detail::match_composition(table, fe)) return c;
  if (auto c = detail::match_prod_action(table, fe)) return c;
  if (auto c = detail::match_disj_action(table, fe)) return c;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Empirical probe.

struct FocalReport {
  Verdict::Outcome outcome = Verdict::Outcome::Unknown;
  int tested = 0;
  int equal = 0;
  int unknown = 0;
  std::optional<Term> witness;  // body M of a failing probe
  std::string detail;
};

inline FocalReport test_focal(const DeclTable& table, const Term& f0, int samples = 40,
                              uint64_t seed = 1, int fuel = 10000) {
  DeclTable sig = table;
  default_signature(sig);
  Env base;
  base.decls = &sig;
  Term f = elaborate(sig, f0);
  Type fty = infer(base, f);
  if (fty.kind() != Type::Kind::Arrow)
    throw TypeError("mismatch", "focality probe needs a function, got " + print_type(fty),
                    f.span());
  Type b = fty.left(), a_ty = fty.right();

  auto fcv_f = free_covars(f);
  std::set<std::string> avoid = fcv_f;
  std::string obs = fresh_name("w", avoid);
  avoid.insert(obs);
  std::string a = fresh_name("a", avoid);
  avoid.insert(a);
  std::string bchan = fresh_name("b", avoid);
  avoid.insert(bchan);
  std::string aprime = fresh_name("a", avoid);

  Env obs_env = base.with_covar(obs, Type::constant("Q"));
  Env gen_env = obs_env.with_covar(a, b);
  Generator gen(gen_env, seed);
  auto bodies = gen.sample(Type::bot(), static_cast<size_t>(samples), 7);

  FocalReport rep;
  for (const Term& m : bodies) {
    Term lhs = Term::app(f, Term::mu(a, b, m));
    Term renamed = rename_covar(m, a, aprime);
    ControlContext ctx{Term::named(bchan, Term::app(f, Term::hole())), b};
    Term rhs = Term::mu(bchan, a_ty, struct_subst(renamed, aprime, ctx));
    Verdict v = equiv(obs_env, lhs, rhs, fuel);
    ++rep.tested;
    if (v.outcome == Verdict::Outcome::Distinct) {
      rep.outcome = Verdict::Outcome::Distinct;
      rep.witness = m;
      rep.detail = "probe body mu " + a + ":" + print_type(b) + ". " + print_term(m);
      return rep;
    }
    if (v.outcome == Verdict::Outcome::Equal)
      ++rep.equal;
    else
      ++rep.unknown;
  }
  rep.outcome =
      rep.unknown == 0 ? Verdict::Outcome::Equal : Verdict::Outcome::Unknown;
  rep.detail = std::to_string(rep.equal) + "/" + std::to_string(rep.tested) +
               " probes joined" +
               (rep.unknown ? ", " + std::to_string(rep.unknown) + " undecided" : "");
  return rep;
}

// Do two functions commute past each other when both capture their contexts?
inline FocalReport check_central(const DeclTable& table, const Term& f0, const Term& g0,
                                 int samples = 25, uint64_t seed = 1, int fuel = 10000) {
  DeclTable sig = table;
  default_signature(sig);
  Env base;
  base.decls = &sig;
  Term f = elaborate(sig, f0), g = elaborate(sig, g0);
  Type fty = infer(base, f), gty = infer(base, g);
  if (fty.kind() != Type::Kind::Arrow || gty.kind() != Type::Kind::Arrow)
    throw TypeError("mismatch", "centrality probe needs two functions", f.span());
  Type b1 = fty.left(), a1 = fty.right();
  Type b2 = gty.left(), a2 = gty.right();

  std::set<std::string> avoid = free_covars(f);
  for (auto& c : free_covars(g)) avoid.insert(c);
  std::string ka = fresh_name("a", avoid);
  avoid.insert(ka);
  std::string kb = fresh_name("a", avoid);
  avoid.insert(kb);
  std::string d1 = fresh_name("b", avoid);
  avoid.insert(d1);
  std::string d2 = fresh_name("b", avoid);

  Env env = base.with_covar(ka, a1).with_covar(kb, a2);
  Generator gen(env, seed);
  auto xs = gen.sample(Type::disj(b1, b2), static_cast<size_t>(samples), 7);

  FocalReport rep;
  for (const Term& x : xs) {
    Term pair_jump = Term::named_pair(d1, d2, x);
    Term lhs = Term::named(
        ka, Term::app(f, Term::mu(d1, b1,
                                  Term::named(kb, Term::app(g, Term::mu(d2, b2,
                                                                        pair_jump))))));
    Term rhs = Term::named(
        kb, Term::app(g, Term::mu(d2, b2,
                                  Term::named(ka, Term::app(f, Term::mu(d1, b1,
                                                                        pair_jump))))));
    Verdict v = equiv(env, lhs, rhs, fuel);
    ++rep.tested;
    if (v.outcome == Verdict::Outcome::Distinct) {
      rep.outcome = Verdict::Outcome::Distinct;
      rep.witness = x;
      rep.detail = "joint argument " + print_term(x);
      return rep;
    }
    if (v.outcome == Verdict::Outcome::Equal)
      ++rep.equal;
    else
      ++rep.unknown;
  }
  rep.outcome =
      rep.unknown == 0 ? Verdict::Outcome::Equal : Verdict::Outcome::Unknown;
  rep.detail = std::to_string(rep.equal) + "/" + std::to_string(rep.tested) +
               " probes joined" +
               (rep.unknown ? ", " + std::to_string(rep.unknown) + " undecided" : "");
  return rep;
}

}  // namespace mucalc
