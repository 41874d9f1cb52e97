#pragma once

// The payload: inductive data carved out of coinductive types.  A `DataPair`
// packages two functors F, G with term witnesses converting F(~a) to ~G(a)
// and back.  Declaring `nu N = G` then makes ~(nu N) an F-algebra whose fold
// comes from the unfold of N.  Concrete encodings for naturals, lists and
// binary trees are built this way, together with direct (hand-optimised)
// folds used by the demos.

#include <functional>
#include <string>
#include <vector>

#include "mucalc/elaborate.hpp"
#include "mucalc/focality.hpp"

namespace mucalc {

struct DataPair {
  std::string name;
  bool functorial = true;  // f and g are genuine hole-functors
  FunctorExpr f, g;
  // Term witnesses, parameterised by the type argument.
  std::function<Term(const Type&)> to;    // F(~a) -> ~G(a)
  std::function<Term(const Type&)> from;  // ~G(a) -> F(~a)
  // The instance types at a given argument.  Overridable for the diagonal
  // pair, whose F and G are type families rather than functors.
  std::function<Type(const Type&)> dom_at, cod_at;

  Type dom(const Type& a) const {
    return dom_at ? dom_at(a) : f.instantiate(Type::neg(a));
  }
  Type cod(const Type& a) const {
    return cod_at ? cod_at(a) : g.instantiate(a);
  }
};

namespace pairs {

namespace detail_t {
inline Type n(const Type& t) { return Type::neg(t); }
inline Type nn(const Type& t) { return Type::neg(Type::neg(t)); }
}  // namespace detail_t

// (~~ [], ~~ []) : both witnesses are the identity.
inline DataPair row_dneg() {
  DataPair p;
  p.name = "double-negation";
  p.f = FunctorExpr::double_neg(FunctorExpr::hole());
  p.g = FunctorExpr::double_neg(FunctorExpr::hole());
  auto id_at = [](const Type& a) {
    return identity_fn(Type::neg(Type::neg(Type::neg(a))));
  };
  p.to = id_at;
  p.from = id_at;
  return p;
}

// (~B \/ [], B * []) : a sum of refutations against a product.
inline Term disj_prod_to(const Type& b, const Type& a) {
  using namespace detail_t;
  Type fa = Type::disj(n(b), n(a));  // F(~a)
  Term body = Term::app(
      Term::mu("c1", n(b),
               Term::app(Term::mu("c2", n(a),
                                  Term::named_pair("c1", "c2", Term::var("v"))),
                         Term::proj(2, Term::var("p")))),
      Term::proj(1, Term::var("p")));
  return Term::lam("v", fa, Term::lam("p", Type::prod(b, a), body));
}
inline Term disj_prod_from(const Type& b, const Type& a) {
  using namespace detail_t;
  Term x1 = Term::mu(
      "d1", b,
      Term::named("c1", Term::lam("y", b, Term::named("d1", Term::var("y")))));
  Term x2 = Term::mu(
      "d2", a,
      Term::named("c2", Term::lam("z", a, Term::named("d2", Term::var("z")))));
  return Term::lam(
      "k", n(Type::prod(b, a)),
      Term::mu_pair("c1", n(b), "c2", n(a),
                    Term::app(Term::var("k"), Term::pair(x1, x2))));
}
inline DataPair row_disj_prod(const Type& b) {
  DataPair p;
  p.name = "sum-vs-product";
  p.f = FunctorExpr::disj(FunctorExpr::const_t(Type::neg(b)), FunctorExpr::hole());
  p.g = FunctorExpr::prod(FunctorExpr::const_t(b), FunctorExpr::hole());
  p.to = [b](const Type& a) { return disj_prod_to(b, a); };
  p.from = [b](const Type& a) { return disj_prod_from(b, a); };
  return p;
}

// (~a \/ a, a * a) : the diagonal instance of the previous pair.  F and G
// here are type families (the argument occurs negatively on the left), so
// the pair is validated directly and never composed.
inline DataPair row_self_prod() {
  DataPair p;
  p.name = "self-sum-vs-square";
  p.functorial = false;
  p.to = [](const Type& a) { return disj_prod_to(a, a); };
  p.from = [](const Type& a) { return disj_prod_from(a, a); };
  p.dom_at = [](const Type& a) {
    return Type::disj(Type::neg(a), Type::neg(a));
  };
  p.cod_at = [](const Type& a) { return Type::prod(a, a); };
  return p;
}

// (~~(B * []), ~B \/ ~~ []) : a shielded product against a sum.
inline Term prod_disj_to(const Type& b, const Type& a) {
  using namespace detail_t;
  Type fa = nn(Type::prod(b, n(a)));           // F(~a)
  Type ga = Type::disj(n(b), nn(a));           // G(a)
  Term inner = Term::app(
      Term::mu("c2", nn(a),
               Term::app(Term::mu("c1", n(b),
                                  Term::named_pair("c1", "c2", Term::var("v"))),
                         Term::proj(1, Term::var("p")))),
      Term::proj(2, Term::var("p")));
  Term lam_p = Term::lam("p", Type::prod(b, n(a)), inner);
  return Term::lam(
      "w", fa, Term::lam("v", ga, Term::app(Term::var("w"), lam_p)));
}
inline Term prod_disj_from(const Type& b, const Type& a) {
  using namespace detail_t;
  Type ga = Type::disj(n(b), nn(a));
  Term x1 = Term::mu(
      "d1", b,
      Term::named("c1", Term::lam("y", b, Term::named("d1", Term::var("y")))));
  Term x2 = Term::mu(
      "d2", n(a),
      Term::named("c2", Term::lam("h", n(a), Term::named("d2", Term::var("h")))));
  Term mp = Term::mu_pair("c1", n(b), "c2", nn(a),
                          Term::app(Term::var("q"), Term::pair(x1, x2)));
  return Term::lam(
      "k", n(ga),
      Term::lam("q", n(Type::prod(b, n(a))), Term::app(Term::var("k"), mp)));
}
inline DataPair row_prod_disj(const Type& b) {
  DataPair p;
  p.name = "shielded-product-vs-sum";
  p.f = FunctorExpr::double_neg(
      FunctorExpr::prod(FunctorExpr::const_t(b), FunctorExpr::hole()));
  p.g = FunctorExpr::disj(FunctorExpr::const_t(Type::neg(b)),
                          FunctorExpr::double_neg(FunctorExpr::hole()));
  p.to = [b](const Type& a) { return prod_disj_to(b, a); };
  p.from = [b](const Type& a) { return prod_disj_from(b, a); };
  return p;
}

// (~~([]*[]), [] (+) []) : a shielded square against a doubled choice.
inline DataPair row_square_oplus() {
  DataPair p;
  p.name = "square-vs-choice";
  p.f = FunctorExpr::double_neg(
      FunctorExpr::prod(FunctorExpr::hole(), FunctorExpr::hole()));
  p.g = FunctorExpr::oplus(FunctorExpr::hole(), FunctorExpr::hole());
  p.to = [](const Type& a) {
    using namespace detail_t;
    Type fa = nn(Type::prod(n(a), n(a)));
    Type ga = Type::disj(nn(a), nn(a));
    Term inner = Term::app(
        Term::mu("c2", nn(a),
                 Term::app(Term::mu("c1", nn(a),
                                    Term::named_pair("c1", "c2", Term::var("v"))),
                           Term::proj(1, Term::var("p")))),
        Term::proj(2, Term::var("p")));
    Term lam_p = Term::lam("p", Type::prod(n(a), n(a)), inner);
    return Term::lam(
        "w", fa, Term::lam("v", ga, Term::app(Term::var("w"), lam_p)));
  };
  p.from = [](const Type& a) {
    using namespace detail_t;
    Type ga = Type::disj(nn(a), nn(a));
    Term x1 = Term::mu(
        "d1", n(a),
        Term::named("c1",
                    Term::lam("h1", n(a), Term::named("d1", Term::var("h1")))));
    Term x2 = Term::mu(
        "d2", n(a),
        Term::named("c2",
                    Term::lam("h2", n(a), Term::named("d2", Term::var("h2")))));
    Term mp = Term::mu_pair("c1", nn(a), "c2", nn(a),
                            Term::app(Term::var("q"), Term::pair(x1, x2)));
    return Term::lam(
        "k", n(ga),
        Term::lam("q", n(Type::prod(n(a), n(a))), Term::app(Term::var("k"), mp)));
  };
  return p;
}

// (~~Top \/ [], Bot * []) : the successor shape for naturals.
inline DataPair row_nat() {
  DataPair p;
  p.name = "nat-step";
  p.f = FunctorExpr::disj(FunctorExpr::const_t(Type::neg(Type::neg(Type::top()))),
                          FunctorExpr::hole());
  p.g = FunctorExpr::prod(FunctorExpr::const_t(Type::bot()), FunctorExpr::hole());
  p.to = [](const Type& a) {
    using namespace detail_t;
    Type fa = Type::disj(nn(Type::top()), n(a));
    Term body = Term::app(
        Term::mu("c1", nn(Type::top()),
                 Term::app(Term::mu("c2", n(a),
                                    Term::named_pair("c1", "c2", Term::var("v"))),
                           Term::proj(2, Term::var("p")))),
        Term::lam("u", Type::top(), Term::proj(1, Term::var("p"))));
    return Term::lam("v", fa, Term::lam("p", Type::prod(Type::bot(), a), body));
  };
  p.from = [](const Type& a) {
    using namespace detail_t;
    Term x1 = Term::mu(
        "d1", Type::bot(),
        Term::named("c1",
                    Term::lam("h", n(Type::top()),
                              Term::named("d1", Term::app(Term::var("h"),
                                                          Term::unit())))));
    Term x2 = Term::mu(
        "d2", a,
        Term::named("c2", Term::lam("z", a, Term::named("d2", Term::var("z")))));
    return Term::lam(
        "k", n(Type::prod(Type::bot(), a)),
        Term::mu_pair("c1", nn(Type::top()), "c2", n(a),
                      Term::app(Term::var("k"), Term::pair(x1, x2))));
  };
  return p;
}

}  // namespace pairs

// Composite pair: functors compose, and the witnesses route through the
// outer functor's action.
inline DataPair compose_pairs(const DataPair& outer, const DataPair& inner) {
  DataPair p;
  p.name = outer.name + " . " + inner.name;
  p.f = outer.f.compose(inner.f);
  p.g = outer.g.compose(inner.g);
  DataPair o = outer, i = inner;
  p.to = [o, i](const Type& a) {
    Type x = i.f.instantiate(Type::neg(a));   // F1(~a)
    Type g1a = i.g.instantiate(a);            // G1(a)
    Type y = Type::neg(g1a);                  // ~G1(a)
    Term act = functor_action(o.f, i.to(a), x, y);
    Term t2 = o.to(g1a);
    Type fa = o.f.instantiate(x);             // F(~a)
    std::set<std::string> avoid;
    for (auto& v : free_vars(act)) avoid.insert(v);
    for (auto& v : free_vars(t2)) avoid.insert(v);
    std::string z = fresh_name("z", avoid);
    return Term::lam(z, fa,
                     Term::app(t2, Term::app(act, Term::var(z))));
  };
  p.from = [o, i](const Type& a) {
    Type x = i.f.instantiate(Type::neg(a));
    Type g1a = i.g.instantiate(a);
    Type y = Type::neg(g1a);
    Term act = functor_action(o.f, i.from(a), y, x);
    Term f2 = o.from(g1a);
    Type nga = Type::neg(o.g.instantiate(g1a));
    std::set<std::string> avoid;
    for (auto& v : free_vars(act)) avoid.insert(v);
    for (auto& v : free_vars(f2)) avoid.insert(v);
    std::string k = fresh_name("k", avoid);
    return Term::lam(k, nga,
                     Term::app(act, Term::app(f2, Term::var(k))));
  };
  return p;
}

inline DataPair list_pair(const Type& b) {
  return compose_pairs(pairs::row_disj_prod(Type::neg(Type::top())),
                       pairs::row_prod_disj(b));
}
inline DataPair tree_pair(const Type& b) {
  return compose_pairs(pairs::row_disj_prod(Type::neg(b)),
                       pairs::row_square_oplus());
}

inline std::vector<DataPair> table3_pairs(const Type& b) {
  return {pairs::row_dneg(),      pairs::row_disj_prod(b), pairs::row_self_prod(),
          pairs::row_prod_disj(b), pairs::row_square_oplus()};
}

// ---------------------------------------------------------------------------
// Validation: both witnesses are focal and the two composites are identities
// as observed through generated continuations.

struct PairReport {
  bool ok = false;
  std::string to_rule, from_rule;  // certificates, or "probe"
  int checked = 0;
  int unknown = 0;
  std::string detail;
};

inline PairReport validate_pair(const DeclTable& table0, const DataPair& pair,
                                int samples = 20, uint64_t seed = 1,
                                int fuel = 10000) {
  PairReport rep;
  DeclTable table = table0;
  default_signature(table);
  Env env;
  env.decls = &table;
  Type alpha = Type::constant("P");
  Type fna = pair.dom(alpha);
  Type ga = pair.cod(alpha);
  Term to_t = pair.to(alpha);
  Term from_t = pair.from(alpha);
  {
    Type want_to = Type::arrow(fna, Type::neg(ga));
    Type want_from = Type::arrow(Type::neg(ga), fna);
    Type got_to = infer(env, to_t);
    Type got_from = infer(env, from_t);
    if (!(got_to == want_to) || !(got_from == want_from)) {
      rep.detail = "witness types wrong: to " + print_type(got_to) + ", from " +
                   print_type(got_from);
      return rep;
    }
  }
  // Observations happen under free covariables: the closed fragment of the
  // bottom type is empty, so continuations only exist relative to an
  // ambient context to escape into.
  env = env.with_covar("w0", Type::constant("Q")).with_covar("w1", alpha);

  if (auto c = certify_focal(table, to_t))
    rep.to_rule = c->rule;
  else {
    auto r = test_focal(table, to_t, samples, seed, fuel);
    if (r.outcome == Verdict::Outcome::Distinct) {
      rep.detail = "to-witness not focal: " + r.detail;
      return rep;
    }
    rep.to_rule = "probe";
  }
  if (auto c = certify_focal(table, from_t))
    rep.from_rule = c->rule;
  else {
    auto r = test_focal(table, from_t, samples, seed, fuel);
    if (r.outcome == Verdict::Outcome::Distinct) {
      rep.detail = "from-witness not focal: " + r.detail;
      return rep;
    }
    rep.from_rule = "probe";
  }

  Generator gen(env, seed);
  auto ks = gen.sample(Type::neg(ga), static_cast<size_t>(samples), 8);
  auto gs = gen.sample(ga, static_cast<size_t>(samples), 8);
  auto os = gen.sample(Type::neg(fna), static_cast<size_t>(samples), 8);
  auto vs = gen.sample(fna, static_cast<size_t>(samples), 8);
  if (ks.empty() || gs.empty() || os.empty() || vs.empty()) {
    rep.detail = "no closed instances to observe";
    return rep;
  }
  for (int i = 0; i < samples; ++i) {
    const Term& k = ks[i % ks.size()];
    const Term& g = gs[(i * 7 + 3) % gs.size()];
    Term lhs = Term::app(Term::app(to_t, Term::app(from_t, k)), g);
    Term rhs = Term::app(k, g);
    Verdict v = equiv(env, lhs, rhs, fuel);
    ++rep.checked;
    if (v.outcome == Verdict::Outcome::Distinct) {
      rep.detail = "to.from != id at k = " + print_term(k) + ", g = " + print_term(g);
      return rep;
    }
    if (v.outcome == Verdict::Outcome::Unknown) ++rep.unknown;
  }
  for (int i = 0; i < samples; ++i) {
    const Term& o = os[i % os.size()];
    const Term& val = vs[(i * 5 + 2) % vs.size()];
    Term lhs = Term::app(o, Term::app(from_t, Term::app(to_t, val)));
    Term rhs = Term::app(o, val);
    Verdict v = equiv(env, lhs, rhs, fuel);
    ++rep.checked;
    if (v.outcome == Verdict::Outcome::Distinct) {
      rep.detail = "from.to != id at o = " + print_term(o) + ", v = " + print_term(val);
      return rep;
    }
    if (v.outcome == Verdict::Outcome::Unknown) ++rep.unknown;
  }
  rep.ok = rep.unknown == 0;
  rep.detail = std::to_string(rep.checked) + " observations, " +
               std::to_string(rep.unknown) + " undecided";
  return rep;
}

// ---------------------------------------------------------------------------
// The generic construction: fold for ~(nu N) out of the unfold of N.

namespace detail {
// ~~T -> T by capturing the context.
inline Term dneg_elim(const Type& t) {
  return Term::lam(
      "x", Type::neg(Type::neg(t)),
      Term::mu("a", t,
               Term::app(Term::var("x"),
                         Term::lam("z", t, Term::named("a", Term::var("z"))))));
}
}  // namespace detail

struct DerivedInductive {
  Term fold;     // ~(nu N) -> A
  Term coalg;    // ~A -> G(~A), the coalgebra fed to unfold
  Term algebra;  // F(~(nu N)) -> ~(nu N), the constructor combiner
};

inline DerivedInductive derive_inductive(const DeclTable& table, const DataPair& pair,
                                         const std::string& nu_name, const Type& a,
                                         const Term& f0) {
  Type nu = Type::nu(nu_name);
  Type na = Type::neg(a);
  Type f_a = pair.f.instantiate(a);
  Type f_nna = pair.f.instantiate(Type::neg(na));
  Type g_na = pair.g.instantiate(na);

  Term m_a = detail::dneg_elim(a);
  Term act = functor_action(pair.f, m_a, Type::neg(na), a);  // F(~~A) -> F(A)
  Term na1 = not_action(act, f_nna, f_a);                    // ~F(A) -> ~F(~~A)
  Term from_na = pair.from(na);                              // ~G(~A) -> F(~~A)
  Term na2 = not_action(from_na, Type::neg(g_na), f_nna);    // ~F(~~A) -> ~~G(~A)
  Term m_g = detail::dneg_elim(g_na);

  std::set<std::string> avoid;
  for (const Term* t : {&m_a, &act, &na1, &from_na, &na2, &m_g})
    for (auto& v : free_vars(*t)) avoid.insert(v);
  std::string q = fresh_name("q", avoid);
  Term d = Term::lam(
      q, Type::neg(f_a),
      Term::app(m_g, Term::app(na2, Term::app(na1, Term::var(q)))));

  Term na0 = not_action(f0, f_a, a);  // ~A -> ~F(A)
  std::string r = fresh_name("r", avoid);
  Term coalg = Term::lam(r, na, Term::app(d, Term::app(na0, Term::var(r))));

  Term u = Term::unfold(nu_name, coalg);  // ~A -> nu N
  Term na_u = not_action(u, na, nu);      // ~nu -> ~~A
  std::string w = fresh_name("w", avoid);
  Term fold = Term::lam(w, Type::neg(nu),
                        Term::app(m_a, Term::app(na_u, Term::var(w))));

  // Written as an explicit composition (precompose-with-out after the
  // conversion witness) so the focality certifier can take it apart.
  Term to_nu = pair.to(nu);  // F(~nu) -> ~G(nu)
  Term not_out = Term::lam(
      "k", Type::neg(pair.g.instantiate(nu)),
      Term::lam("s", nu,
                Term::app(Term::var("k"), Term::destr(nu_name, Term::var("s")))));
  Term algebra = Term::lam(
      "h", pair.f.instantiate(Type::neg(nu)),
      Term::app(not_out, Term::app(to_nu, Term::var("h"))));

  DerivedInductive out;
  out.fold = fold;
  out.coalg = coalg;
  out.algebra = algebra;
  return out;
}

// ---------------------------------------------------------------------------
// Concrete encodings.

// Naturals: counting streams.  nu Streams = Bot * [], Nat = ~Streams.
struct NatEncoding {
  std::string nu = "Streams";
  Type stream() const { return Type::nu(nu); }
  Type nat() const { return Type::neg(stream()); }

  static NatEncoding ensure(DeclTable& table) {
    NatEncoding e;
    if (!table.codata(e.nu))
      table.declare_codata(e.nu,
                           FunctorExpr::prod(FunctorExpr::const_t(Type::bot()),
                                             FunctorExpr::hole()));
    return e;
  }

  Term zero(const DeclTable& table) const {  // Top -> Nat
    return Term::lam("u", Type::top(), head_fn(table, nu));
  }
  Term suc() const {  // Nat -> Nat
    Term tail_x = Term::proj(2, Term::destr(nu, Term::var("x")));
    return Term::lam("y", nat(),
                     Term::lam("x", stream(),
                               Term::app(Term::var("y"), tail_x)));
  }
  Term numeral(const DeclTable& table, int n) const { return numeral_term(table, n); }

  // fold g f : Nat -> A with g : Top -> A, f : A -> A.
  Term fold(const Type& a, const Term& g, const Term& f) const {
    Type na = Type::neg(a);
    Term coalg = Term::lam(
        "w", na,
        Term::pair(Term::app(Term::var("w"), Term::app(g, Term::unit())),
                   Term::lam("x", a,
                             Term::app(Term::var("w"),
                                       Term::app(f, Term::var("x"))))));
    Term u = Term::unfold(nu, coalg);
    return Term::lam(
        "y", nat(),
        Term::mu("a", a,
                 Term::app(Term::var("y"),
                           Term::app(u, Term::lam("z", a,
                                                  Term::named("a", Term::var("z")))))));
  }
};

// Naturals with a shielded tail: nu StreamsS = Bot * ~~[].
struct ShieldedNatEncoding {
  std::string nu = "Streams'";
  Type stream() const { return Type::nu(nu); }
  Type nat() const { return Type::neg(stream()); }

  static ShieldedNatEncoding ensure(DeclTable& table) {
    ShieldedNatEncoding e;
    if (!table.codata(e.nu))
      table.declare_codata(
          e.nu, FunctorExpr::prod(FunctorExpr::const_t(Type::bot()),
                                  FunctorExpr::double_neg(FunctorExpr::hole())));
    return e;
  }

  Term zero(const DeclTable& table) const {  // Top -> Nat
    return Term::lam("u", Type::top(), head_fn(table, nu));
  }
  Term suc() const {  // Nat -> Nat
    Term tail_x = Term::proj(2, Term::destr(nu, Term::var("x")));  // ~~stream
    return Term::lam(
        "y", nat(),
        Term::lam("x", stream(), Term::app(tail_x, Term::var("y"))));
  }

  // fold alg : Nat -> A with alg : Top (+) A -> A.
  Term fold(const DeclTable& table, const Type& a, const Term& alg) const {
    Type na = Type::neg(a);
    Term in1 = Term::inj(1, Type::top(), a, Term::unit());
    Term first = Term::app(Term::var("k"), Term::app(alg, in1));
    Term in2 = Term::inj(2, Type::top(), a, Term::var("z"));
    Term second = Term::lam(
        "q", Type::neg(na),
        Term::app(Term::var("q"),
                  Term::lam("z", a,
                            Term::app(Term::var("k"), Term::app(alg, in2)))));
    Term coalg = Term::lam("k", na, Term::pair(first, second));
    Term u = Term::unfold(nu, coalg);
    Term h = Term::lam(
        "y", nat(),
        Term::mu("a", a,
                 Term::app(Term::var("y"),
                           Term::app(u, Term::lam("z", a,
                                                  Term::named("a", Term::var("z")))))));
    return elaborate(table, h);
  }
};

// Lists over b: nu L = ~Top * (~b \/ ~~[]), List = ~L.
struct ListEncoding {
  std::string nu;
  Type b;
  Type carrier() const { return Type::nu(nu); }
  Type list() const { return Type::neg(carrier()); }

  static ListEncoding ensure(DeclTable& table, const Type& b,
                             const std::string& name = "ListStream") {
    ListEncoding e;
    e.nu = name;
    e.b = b;
    if (!table.codata(name))
      table.declare_codata(
          name,
          FunctorExpr::prod(
              FunctorExpr::const_t(Type::neg(Type::top())),
              FunctorExpr::disj(FunctorExpr::const_t(Type::neg(b)),
                                FunctorExpr::double_neg(FunctorExpr::hole()))));
    return e;
  }

  Term nil() const {  // List
    return Term::lam(
        "x", carrier(),
        Term::app(Term::proj(1, Term::destr(nu, Term::var("x"))), Term::unit()));
  }
  Term cons() const {  // b * List -> List
    Term tail = Term::proj(2, Term::destr(nu, Term::var("x")));  // ~b \/ ~~L
    Term body = Term::app(
        Term::mu("c2", Type::neg(Type::neg(carrier())),
                 Term::app(Term::mu("c1", Type::neg(b),
                                    Term::named_pair("c1", "c2", tail)),
                           Term::proj(1, Term::var("p")))),
        Term::proj(2, Term::var("p")));
    return Term::lam("p", Type::prod(b, list()),
                     Term::lam("x", carrier(), body));
  }

  // fold g f : List -> A with g : Top -> A (empty), f : b * A -> A (link).
  Term fold(const Type& a, const Term& g, const Term& f) const {
    Type na = Type::neg(a);
    Type nnna = Type::neg(Type::neg(na));
    Type chan = Type::disj(Type::neg(b), nnna);
    Term first = Term::lam("u", Type::top(),
                           Term::app(Term::var("k"),
                                     Term::app(g, Term::var("u"))));
    Term xb = Term::mu(
        "b1", b,
        Term::named(
            "b",
            Term::mu_pair("c1", Type::neg(b), "c2", nnna,
                          Term::named("c1",
                                      Term::lam("y", b,
                                                Term::named("b1", Term::var("y")))))));
    Term xa = Term::mu(
        "b2", a,
        Term::named(
            "b",
            Term::mu_pair(
                "c1", Type::neg(b), "c2", nnna,
                Term::named(
                    "c2",
                    Term::lam("q", Type::neg(na),
                              Term::app(Term::var("q"),
                                        Term::lam("z", a,
                                                  Term::named("b2",
                                                              Term::var("z")))))))));
    Term second =
        Term::mu("b", chan,
                 Term::app(Term::var("k"), Term::app(f, Term::pair(xb, xa))));
    Term coalg = Term::lam("k", na, Term::pair(first, second));
    Term u = Term::unfold(nu, coalg);
    return Term::lam(
        "y", list(),
        Term::mu("a", a,
                 Term::app(Term::var("y"),
                           Term::app(u, Term::lam("z", a,
                                                  Term::named("a", Term::var("z")))))));
  }

  Term literal(const std::vector<Term>& elems) const {
    Term acc = nil();
    for (auto it = elems.rbegin(); it != elems.rend(); ++it)
      acc = Term::app(cons(), Term::pair(*it, acc));
    return acc;
  }
};

// Binary trees over b: nu T = ~b * ([] (+) []), Tree = ~T.
struct TreeEncoding {
  std::string nu;
  Type b;
  Type carrier() const { return Type::nu(nu); }
  Type tree() const { return Type::neg(carrier()); }

  static TreeEncoding ensure(DeclTable& table, const Type& b,
                             const std::string& name = "TreeStream") {
    TreeEncoding e;
    e.nu = name;
    e.b = b;
    if (!table.codata(name))
      table.declare_codata(
          name, FunctorExpr::prod(FunctorExpr::const_t(Type::neg(b)),
                                  FunctorExpr::oplus(FunctorExpr::hole(),
                                                     FunctorExpr::hole())));
    return e;
  }

  Term leaf() const {  // b -> Tree
    return Term::lam(
        "y", b,
        Term::lam("x", carrier(),
                  Term::app(Term::proj(1, Term::destr(nu, Term::var("x"))),
                            Term::var("y"))));
  }
  Term fork() const {  // Tree * Tree -> Tree
    Term branches = Term::proj(2, Term::destr(nu, Term::var("x")));
    Term body = Term::app(
        Term::mu("a2", Type::neg(tree()),
                 Term::app(Term::mu("a1", Type::neg(tree()),
                                    Term::named_pair("a1", "a2", branches)),
                           Term::proj(1, Term::var("y")))),
        Term::proj(2, Term::var("y")));
    return Term::lam("y", Type::prod(tree(), tree()),
                     Term::lam("x", carrier(), body));
  }

  // fold g f : Tree -> A with g : b -> A (leaf), f : A * A -> A (fork).
  Term fold(const DeclTable& table, const Type& a, const Term& g,
            const Term& f) const {
    Type na = Type::neg(a);
    Term first = Term::lam("x", b,
                           Term::app(Term::var("k"),
                                     Term::app(g, Term::var("x"))));
    auto xj = [&](int j, const char* bj) {
      return Term::mu(
          bj, a,
          Term::named("b", Term::inj(j, na, na,
                                     Term::lam("z", a,
                                               Term::named(bj, Term::var("z"))))));
    };
    Term second = Term::mu(
        "b", Type::oplus(na, na),
        Term::app(Term::var("k"),
                  Term::app(f, Term::pair(xj(1, "b1"), xj(2, "b2")))));
    Term coalg = Term::lam("k", na, Term::pair(first, second));
    Term u = Term::unfold(nu, coalg);
    Term h = Term::lam(
        "y", tree(),
        Term::mu("a", a,
                 Term::app(Term::var("y"),
                           Term::app(u, Term::lam("z", a,
                                                  Term::named("a", Term::var("z")))))));
    return elaborate(table, h);
  }

  Term leaf_of(const Term& c) const { return Term::app(leaf(), c); }
  Term fork_of(const Term& l, const Term& r) const {
    return Term::app(fork(), Term::pair(l, r));
  }
  // All literals of depth <= d over the given leaf payloads.
  std::vector<Term> literals(int depth, const std::vector<Term>& consts) const {
    std::vector<Term> cur;
    for (auto& c : consts) cur.push_back(leaf_of(c));
    if (depth <= 1) return cur;
    std::vector<Term> below = literals(depth - 1, consts);
    std::vector<Term> out = cur;
    for (auto& l : below)
      for (auto& r : below) out.push_back(fork_of(l, r));
    return out;
  }
};

// A recorded failure of the fold law for a non-focal step function: the
// context-jumping argument separates f(fold n) from fold(suc n).
struct PhasePair {
  Term lhs, rhs;  // closed, type P; provably distinct observations
  Term bad_step;  // the non-focal function responsible
};

inline PhasePair nonfocal_phase_pair(DeclTable& table) {
  default_signature(table);
  if (!table.constant("c0")) table.declare_const("c0", Type::constant("P"));
  NatEncoding nat = NatEncoding::ensure(table);
  Type p = Type::constant("P");
  Term f_bad = Term::lam("x", p, Term::constant("c0"));
  Term g = Term::constant("g1");  // Top -> P
  Term h = nat.fold(p, g, f_bad);
  Term n_d = Term::lam("s", nat.stream(),
                       Term::named("d", Term::constant("p0")));  // jumps out
  PhasePair out;
  out.bad_step = f_bad;
  out.lhs = Term::mu("d", p,
                     Term::named("d", Term::app(h, Term::app(nat.suc(), n_d))));
  out.rhs = Term::mu("d", p,
                     Term::named("d", Term::app(f_bad, Term::app(h, n_d))));
  return out;
}

}  // namespace mucalc
