#pragma once

// Syntactic functors over one type variable, their instantiation at a type,
// and generated term-level actions (the "map" of each shape).  The action at
// a disjunction node routes through control operators and is semantically a
// map only when the supplied component functions are focal; double negation
// shields a position so its action works for arbitrary functions.

#include <memory>
#include <stdexcept>
#include <string>

#include "mucalc/syntax.hpp"

namespace mucalc {

class FunctorExpr {
public:
  enum class Kind { Hole, ConstT, DoubleNeg, Prod, Disj };

private:
  struct Node {
    Kind kind;
    Type ty;  // ConstT payload
    std::shared_ptr<const Node> f, g;
  };
  std::shared_ptr<const Node> p_;
  explicit FunctorExpr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

  static FunctorExpr make(Kind k, Type ty, FunctorExpr f, FunctorExpr g) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->ty = std::move(ty);
    n->f = f.p_;
    n->g = g.p_;
    return FunctorExpr(std::move(n));
  }

public:
  FunctorExpr() = default;
  bool valid() const { return p_ != nullptr; }

  static FunctorExpr hole() { return make(Kind::Hole, {}, {}, {}); }
  static FunctorExpr const_t(Type t) { return make(Kind::ConstT, std::move(t), {}, {}); }
  static FunctorExpr double_neg(FunctorExpr f) {
    return make(Kind::DoubleNeg, {}, std::move(f), {});
  }
  static FunctorExpr prod(FunctorExpr f, FunctorExpr g) {
    return make(Kind::Prod, {}, std::move(f), std::move(g));
  }
  static FunctorExpr disj(FunctorExpr f, FunctorExpr g) {
    return make(Kind::Disj, {}, std::move(f), std::move(g));
  }

  // Convenience shapes used by the standard pairs.
  static FunctorExpr disj_l(Type left, FunctorExpr f) {
    return disj(const_t(std::move(left)), std::move(f));
  }
  static FunctorExpr prod_l(Type left, FunctorExpr f) {
    return prod(const_t(std::move(left)), std::move(f));
  }
  static FunctorExpr dneg_prod(Type left, FunctorExpr f) {
    return double_neg(prod(const_t(std::move(left)), std::move(f)));
  }
  static FunctorExpr dneg_prod_self(FunctorExpr f, FunctorExpr g) {
    return double_neg(prod(std::move(f), std::move(g)));
  }
  static FunctorExpr oplus(FunctorExpr f, FunctorExpr g) {
    return disj(double_neg(std::move(f)), double_neg(std::move(g)));
  }

  Kind kind() const { return p_->kind; }
  const Type& const_type() const { return p_->ty; }
  FunctorExpr fst() const { return FunctorExpr(p_->f); }
  FunctorExpr snd() const { return FunctorExpr(p_->g); }

  bool contains_hole() const {
    switch (kind()) {
      case Kind::Hole: return true;
      case Kind::ConstT: return false;
      case Kind::DoubleNeg: return fst().contains_hole();
      default: return fst().contains_hole() || snd().contains_hole();
    }
  }

  // F[A/alpha]
  Type instantiate(const Type& a) const {
    switch (kind()) {
      case Kind::Hole: return a;
      case Kind::ConstT: return const_type();
      case Kind::DoubleNeg: return Type::neg(Type::neg(fst().instantiate(a)));
      case Kind::Prod: return Type::prod(fst().instantiate(a), snd().instantiate(a));
      case Kind::Disj: return Type::disj(fst().instantiate(a), snd().instantiate(a));
    }
    throw std::logic_error("bad functor");
  }

  // Composition: plug g into every hole of this.
  FunctorExpr compose(const FunctorExpr& inner) const {
    switch (kind()) {
      case Kind::Hole: return inner;
      case Kind::ConstT: return *this;
      case Kind::DoubleNeg: return double_neg(fst().compose(inner));
      case Kind::Prod: return prod(fst().compose(inner), snd().compose(inner));
      case Kind::Disj: return disj(fst().compose(inner), snd().compose(inner));
    }
    throw std::logic_error("bad functor");
  }

  // A functor is "full" when its generated action is a map for arbitrary
  // component functions: every disjunction arm that contains the hole must be
  // shielded by a double negation at its root.  Only full functors may be the
  // body of a coinductive declaration (the unfold computation rule maps an
  // arbitrary, not-necessarily-focal coalgebra over the body).
  bool is_full() const {
    switch (kind()) {
      case Kind::Hole:
      case Kind::ConstT:
        return true;
      case Kind::DoubleNeg:
        return fst().is_full();
      case Kind::Prod:
        return fst().is_full() && snd().is_full();
      case Kind::Disj: {
        auto arm_ok = [](const FunctorExpr& h) {
          if (!h.contains_hole()) return true;
          return h.kind() == Kind::DoubleNeg && h.fst().is_full();
        };
        return arm_ok(fst()) && arm_ok(snd());
      }
    }
    return false;
  }

  friend bool operator==(const FunctorExpr& x, const FunctorExpr& y) {
    if (x.p_ == y.p_) return true;
    if (!x.p_ || !y.p_) return false;
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case Kind::Hole: return true;
      case Kind::ConstT: return x.const_type() == y.const_type();
      case Kind::DoubleNeg: return x.fst() == y.fst();
      default: return x.fst() == y.fst() && x.snd() == y.snd();
    }
  }
  friend bool operator!=(const FunctorExpr& x, const FunctorExpr& y) { return !(x == y); }
};

// ---------------------------------------------------------------------------
// Generated actions.

namespace detail {
inline std::set<std::string> avoid_of(std::initializer_list<Term> ts) {
  std::set<std::string> s;
  for (const auto& t : ts) {
    if (!t.valid()) continue;
    for (auto& v : free_vars(t)) s.insert(v);
    for (auto& v : free_covars(t)) s.insert(v);
  }
  return s;
}
}  // namespace detail

inline Term identity_fn(const Type& t) { return Term::lam("x0", t, Term::var("x0")); }

// k : X -> Y   |->   ~~X -> ~~Y, a map for arbitrary k.
inline Term notnot_lift(const Term& k, const Type& x_ty, const Type& y_ty) {
  auto avoid = detail::avoid_of({k});
  std::string y = fresh_name("y", avoid);
  avoid.insert(y);
  std::string kk = fresh_name("k", avoid);
  avoid.insert(kk);
  std::string x = fresh_name("x", avoid);
  return Term::lam(
      y, Type::neg(Type::neg(x_ty)),
      Term::lam(kk, Type::neg(y_ty),
                Term::app(Term::var(y),
                          Term::lam(x, x_ty,
                                    Term::app(Term::var(kk), Term::app(k, Term::var(x)))))));
}

// k : X -> Y   |->   ~Y -> ~X (precomposition).
inline Term not_action(const Term& k, const Type& x_ty, const Type& y_ty) {
  auto avoid = detail::avoid_of({k});
  std::string kk = fresh_name("k", avoid);
  avoid.insert(kk);
  std::string x = fresh_name("x", avoid);
  return Term::lam(kk, Type::neg(y_ty),
                   Term::lam(x, x_ty, Term::app(Term::var(kk), Term::app(k, Term::var(x)))));
}

// k1 : X1 -> Y1, k2 : X2 -> Y2  |->  X1 \/ X2 -> Y1 \/ Y2.
// Control plumbing; a genuine map only when k1 and k2 are focal.
inline Term disj_action(const Term& k1, const Term& k2, const Type& x1, const Type& x2,
                        const Type& y1, const Type& y2) {
  auto avoid = detail::avoid_of({k1, k2});
  std::string v = fresh_name("v", avoid);
  avoid.insert(v);
  std::string c1 = fresh_name("c", avoid);
  avoid.insert(c1);
  std::string c2 = fresh_name("c", avoid);
  avoid.insert(c2);
  std::string d1 = fresh_name("d", avoid);
  avoid.insert(d1);
  std::string d2 = fresh_name("d", avoid);
  Term inner = Term::named_pair(d1, d2, Term::var(v));
  Term body = Term::named(
      c2, Term::app(k2, Term::mu(d2, x2,
                                 Term::named(c1, Term::app(k1, Term::mu(d1, x1, inner))))));
  return Term::lam(v, Type::disj(x1, x2), Term::mu_pair(c1, y1, c2, y2, body));
}

// F's action on k : X -> Y, a term of type F[X] -> F[Y].
inline Term functor_action(const FunctorExpr& f, const Term& k, const Type& x_ty,
                           const Type& y_ty) {
  switch (f.kind()) {
    case FunctorExpr::Kind::Hole:
      return k;
    case FunctorExpr::Kind::ConstT:
      return identity_fn(f.const_type());
    case FunctorExpr::Kind::DoubleNeg:
      return notnot_lift(functor_action(f.fst(), k, x_ty, y_ty), f.fst().instantiate(x_ty),
                         f.fst().instantiate(y_ty));
    case FunctorExpr::Kind::Prod: {
      Term a1 = functor_action(f.fst(), k, x_ty, y_ty);
      Term a2 = functor_action(f.snd(), k, x_ty, y_ty);
      auto avoid = detail::avoid_of({a1, a2});
      std::string p = fresh_name("p", avoid);
      return Term::lam(p, Type::prod(f.fst().instantiate(x_ty), f.snd().instantiate(x_ty)),
                       Term::pair(Term::app(a1, Term::proj(1, Term::var(p))),
                                  Term::app(a2, Term::proj(2, Term::var(p)))));
    }
    case FunctorExpr::Kind::Disj:
      return disj_action(functor_action(f.fst(), k, x_ty, y_ty),
                         functor_action(f.snd(), k, x_ty, y_ty), f.fst().instantiate(x_ty),
                         f.snd().instantiate(x_ty), f.fst().instantiate(y_ty),
                         f.snd().instantiate(y_ty));
  }
  throw std::logic_error("bad functor");
}

}  // namespace mucalc
