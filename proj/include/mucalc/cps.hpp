#pragma once

// Continuation-passing translation into a pure target calculus with unit,
// empty, sums, products and functions, plus one opaque recursive-type former
// for the images of coinductive types.  The translation sends a source term
// of type A to a target term of type [A] -> R; two source terms are compared
// by normalizing their images.  The target normalizer computes eta-long
// beta-normal forms with commuting conversions and canonical collapse at
// Unit and Empty, then contracts generalized case-eta redexes.

#include <cassert>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mucalc/elaborate.hpp"
#include "mucalc/typecheck.hpp"

namespace mucalc {

// Raised when a term falls outside the fragment the translation covers
// (anything touching coinductive types).
struct OracleUnsupported : std::runtime_error {
  explicit OracleUnsupported(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Target types.

class TargetType {
public:
  enum class Kind { R, Unit, Empty, Const, Var, Prod, Sum, Arrow, Ind };

private:
  struct Node {
    Kind kind;
    std::string name;  // Const/Var/Ind binder
    std::shared_ptr<const Node> l, r;
  };
  std::shared_ptr<const Node> p_;
  explicit TargetType(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  static TargetType make(Kind k, std::string n, TargetType l, TargetType r) {
    auto node = std::make_shared<Node>();
    node->kind = k;
    node->name = std::move(n);
    node->l = l.p_;
    node->r = r.p_;
    return TargetType(std::move(node));
  }

public:
  TargetType() = default;
  bool valid() const { return p_ != nullptr; }

  static TargetType res() { return make(Kind::R, {}, {}, {}); }
  static TargetType unit() { return make(Kind::Unit, {}, {}, {}); }
  static TargetType empty() { return make(Kind::Empty, {}, {}, {}); }
  static TargetType constant(std::string n) { return make(Kind::Const, std::move(n), {}, {}); }
  static TargetType var(std::string n) { return make(Kind::Var, std::move(n), {}, {}); }
  static TargetType prod(TargetType a, TargetType b) {
    return make(Kind::Prod, {}, std::move(a), std::move(b));
  }
  static TargetType sum(TargetType a, TargetType b) {
    return make(Kind::Sum, {}, std::move(a), std::move(b));
  }
  static TargetType arrow(TargetType a, TargetType b) {
    return make(Kind::Arrow, {}, std::move(a), std::move(b));
  }
  static TargetType ind(std::string v, TargetType body) {
    return make(Kind::Ind, std::move(v), std::move(body), {});
  }

  Kind kind() const { return p_->kind; }
  const std::string& name() const { return p_->name; }
  TargetType left() const { return TargetType(p_->l); }
  TargetType right() const { return TargetType(p_->r); }
  TargetType body() const { return TargetType(p_->l); }

  friend bool operator==(const TargetType& x, const TargetType& y) {
    std::vector<std::pair<std::string, std::string>> binders;
    return eq_rec(x, y, binders);
  }
  friend bool operator!=(const TargetType& x, const TargetType& y) { return !(x == y); }

private:
  static bool eq_rec(const TargetType& x, const TargetType& y,
                     std::vector<std::pair<std::string, std::string>>& binders) {
    if (x.p_ == y.p_) return true;
    if (!x.p_ || !y.p_) return false;
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case Kind::R:
      case Kind::Unit:
      case Kind::Empty:
        return true;
      case Kind::Const:
        return x.name() == y.name();
      case Kind::Var: {
        for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
          bool lx = it->first == x.name(), ly = it->second == y.name();
          if (lx || ly) return lx && ly;
        }
        return x.name() == y.name();
      }
      case Kind::Prod:
      case Kind::Sum:
      case Kind::Arrow:
        return eq_rec(x.left(), y.left(), binders) && eq_rec(x.right(), y.right(), binders);
      case Kind::Ind: {
        binders.emplace_back(x.name(), y.name());
        bool ok = eq_rec(x.body(), y.body(), binders);
        binders.pop_back();
        return ok;
      }
    }
    return false;
  }
};

inline void print_tt_rec(const TargetType& t, int prec, std::string& out) {
  auto wrap = [&](int mine, auto&& f) {
    if (mine < prec) out += '(';
    f();
    if (mine < prec) out += ')';
  };
  switch (t.kind()) {
    case TargetType::Kind::R: out += "R"; return;
    case TargetType::Kind::Unit: out += "Unit"; return;
    case TargetType::Kind::Empty: out += "Empty"; return;
    case TargetType::Kind::Const:
    case TargetType::Kind::Var: out += t.name(); return;
    case TargetType::Kind::Prod:
      wrap(3, [&] {
        print_tt_rec(t.left(), 4, out);
        out += " * ";
        print_tt_rec(t.right(), 3, out);
      });
      return;
    case TargetType::Kind::Sum:
      wrap(2, [&] {
        print_tt_rec(t.left(), 3, out);
        out += " + ";
        print_tt_rec(t.right(), 2, out);
      });
      return;
    case TargetType::Kind::Arrow:
      wrap(1, [&] {
        print_tt_rec(t.left(), 2, out);
        out += " -> ";
        print_tt_rec(t.right(), 1, out);
      });
      return;
    case TargetType::Kind::Ind:
      wrap(0, [&] {
        out += "mu " + t.name() + ". ";
        print_tt_rec(t.body(), 0, out);
      });
      return;
  }
}

inline std::string print_target_type(const TargetType& t) {
  std::string out;
  print_tt_rec(t, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Target terms.

class TTerm {
public:
  enum class Kind { Var, ConstV, Lam, App, Pair, Proj, Inj, Case, UnitV, Absurd, Hole };

private:
  struct Node {
    Kind kind;
    std::string name, name2;
    TargetType tt, tt2;
    std::shared_ptr<const Node> a, b, c;
    int idx = 0;
  };
  std::shared_ptr<const Node> p_;
  explicit TTerm(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  static TTerm make(Kind k, std::string n, std::string n2, TargetType t, TargetType t2, TTerm a,
                    TTerm b, TTerm c, int idx) {
    auto node = std::make_shared<Node>();
    node->kind = k;
    node->name = std::move(n);
    node->name2 = std::move(n2);
    node->tt = std::move(t);
    node->tt2 = std::move(t2);
    node->a = a.p_;
    node->b = b.p_;
    node->c = c.p_;
    node->idx = idx;
    return TTerm(std::move(node));
  }

public:
  TTerm() = default;
  bool valid() const { return p_ != nullptr; }

  static TTerm var(std::string x) { return make(Kind::Var, std::move(x), {}, {}, {}, {}, {}, {}, 0); }
  static TTerm constv(std::string c, TargetType t) {
    return make(Kind::ConstV, std::move(c), {}, std::move(t), {}, {}, {}, {}, 0);
  }
  static TTerm lam(std::string x, TargetType t, TTerm b) {
    return make(Kind::Lam, std::move(x), {}, std::move(t), {}, std::move(b), {}, {}, 0);
  }
  static TTerm app(TTerm f, TTerm a) {
    return make(Kind::App, {}, {}, {}, {}, std::move(f), std::move(a), {}, 0);
  }
  static TTerm pair(TTerm a, TTerm b) {
    return make(Kind::Pair, {}, {}, {}, {}, std::move(a), std::move(b), {}, 0);
  }
  static TTerm proj(int j, TTerm t) {
    assert(j == 1 || j == 2);
    return make(Kind::Proj, {}, {}, {}, {}, std::move(t), {}, {}, j);
  }
  static TTerm inj(int j, TargetType sum, TTerm t) {
    assert(j == 1 || j == 2);
    return make(Kind::Inj, {}, {}, std::move(sum), {}, std::move(t), {}, {}, j);
  }
  static TTerm case_of(TTerm s, std::string x1, TargetType t1, TTerm b1, std::string x2,
                       TargetType t2, TTerm b2) {
    return make(Kind::Case, std::move(x1), std::move(x2), std::move(t1), std::move(t2),
                std::move(s), std::move(b1), std::move(b2), 0);
  }
  static TTerm unitv() { return make(Kind::UnitV, {}, {}, {}, {}, {}, {}, {}, 0); }
  static TTerm absurd(TargetType result, TTerm t) {
    return make(Kind::Absurd, {}, {}, std::move(result), {}, std::move(t), {}, {}, 0);
  }
  static TTerm hole() { return make(Kind::Hole, {}, {}, {}, {}, {}, {}, {}, 0); }

  Kind kind() const { return p_->kind; }
  const std::string& name() const { return p_->name; }
  const std::string& name2() const { return p_->name2; }
  const TargetType& tt() const { return p_->tt; }
  const TargetType& tt2() const { return p_->tt2; }
  TTerm child_a() const { return TTerm(p_->a); }
  TTerm child_b() const { return TTerm(p_->b); }
  TTerm child_c() const { return TTerm(p_->c); }
  int idx() const { return p_->idx; }
  bool same_node(const TTerm& o) const { return p_ == o.p_; }
};

namespace detail {

inline void t_free_vars_rec(const TTerm& t, std::set<std::string>& bound,
                            std::set<std::string>& out) {
  switch (t.kind()) {
    case TTerm::Kind::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case TTerm::Kind::ConstV:
    case TTerm::Kind::UnitV:
    case TTerm::Kind::Hole:
      return;
    case TTerm::Kind::Lam: {
      bool had = bound.count(t.name());
      bound.insert(t.name());
      t_free_vars_rec(t.child_a(), bound, out);
      if (!had) bound.erase(t.name());
      return;
    }
    case TTerm::Kind::App:
    case TTerm::Kind::Pair:
      t_free_vars_rec(t.child_a(), bound, out);
      t_free_vars_rec(t.child_b(), bound, out);
      return;
    case TTerm::Kind::Proj:
    case TTerm::Kind::Inj:
    case TTerm::Kind::Absurd:
      t_free_vars_rec(t.child_a(), bound, out);
      return;
    case TTerm::Kind::Case: {
      t_free_vars_rec(t.child_a(), bound, out);
      bool h1 = bound.count(t.name());
      bound.insert(t.name());
      t_free_vars_rec(t.child_b(), bound, out);
      if (!h1) bound.erase(t.name());
      bool h2 = bound.count(t.name2());
      bound.insert(t.name2());
      t_free_vars_rec(t.child_c(), bound, out);
      if (!h2) bound.erase(t.name2());
      return;
    }
  }
}

}  // namespace detail

inline std::set<std::string> t_free_vars(const TTerm& t) {
  std::set<std::string> bound, out;
  detail::t_free_vars_rec(t, bound, out);
  return out;
}

// Capture-avoiding substitution of a target term for a target variable.
inline TTerm t_subst(const TTerm& t, const std::string& x, const TTerm& repl) {
  std::set<std::string> rfv = t_free_vars(repl);
  std::function<TTerm(const TTerm&)> go = [&](const TTerm& s) -> TTerm {
    switch (s.kind()) {
      case TTerm::Kind::Var:
        return s.name() == x ? repl : s;
      case TTerm::Kind::ConstV:
      case TTerm::Kind::UnitV:
      case TTerm::Kind::Hole:
        return s;
      case TTerm::Kind::Lam: {
        if (s.name() == x) return s;
        std::string y = s.name();
        TTerm body = s.child_a();
        if (rfv.count(y) && t_free_vars(body).count(x)) {
          std::set<std::string> avoid = rfv;
          for (auto& v : t_free_vars(body)) avoid.insert(v);
          avoid.insert(x);
          std::string y2 = fresh_name(y, avoid);
          body = t_subst(body, y, TTerm::var(y2));
          y = y2;
        }
        return TTerm::lam(y, s.tt(), go(body));
      }
      case TTerm::Kind::App:
        return TTerm::app(go(s.child_a()), go(s.child_b()));
      case TTerm::Kind::Pair:
        return TTerm::pair(go(s.child_a()), go(s.child_b()));
      case TTerm::Kind::Proj:
        return TTerm::proj(s.idx(), go(s.child_a()));
      case TTerm::Kind::Inj:
        return TTerm::inj(s.idx(), s.tt(), go(s.child_a()));
      case TTerm::Kind::Absurd:
        return TTerm::absurd(s.tt(), go(s.child_a()));
      case TTerm::Kind::Case: {
        TTerm scrut = go(s.child_a());
        std::string x1 = s.name(), x2 = s.name2();
        TTerm b1 = s.child_b(), b2 = s.child_c();
        if (x1 != x) {
          if (rfv.count(x1) && t_free_vars(b1).count(x)) {
            std::set<std::string> avoid = rfv;
            for (auto& v : t_free_vars(b1)) avoid.insert(v);
            avoid.insert(x);
            std::string y = fresh_name(x1, avoid);
            b1 = t_subst(b1, x1, TTerm::var(y));
            x1 = y;
          }
          b1 = go(b1);
        }
        if (x2 != x) {
          if (rfv.count(x2) && t_free_vars(b2).count(x)) {
            std::set<std::string> avoid = rfv;
            for (auto& v : t_free_vars(b2)) avoid.insert(v);
            avoid.insert(x);
            std::string y = fresh_name(x2, avoid);
            b2 = t_subst(b2, x2, TTerm::var(y));
            x2 = y;
          }
          b2 = go(b2);
        }
        return TTerm::case_of(scrut, x1, s.tt(), b1, x2, s.tt2(), b2);
      }
    }
    return s;
  };
  return go(t);
}

namespace detail {

struct TAlphaEnv {
  std::vector<std::pair<std::string, std::string>> pairs;
  bool eq(const std::string& l, const std::string& r) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
      bool lx = it->first == l, ly = it->second == r;
      if (lx || ly) return lx && ly;
    }
    return l == r;
  }
};

inline bool t_alpha_rec(const TTerm& x, const TTerm& y, TAlphaEnv& env) {
  if (x.same_node(y) && env.pairs.empty()) return true;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case TTerm::Kind::Var:
      return env.eq(x.name(), y.name());
    case TTerm::Kind::ConstV:
      return x.name() == y.name() && x.tt() == y.tt();
    case TTerm::Kind::UnitV:
    case TTerm::Kind::Hole:
      return true;
    case TTerm::Kind::Lam: {
      if (x.tt() != y.tt()) return false;
      env.pairs.emplace_back(x.name(), y.name());
      bool ok = t_alpha_rec(x.child_a(), y.child_a(), env);
      env.pairs.pop_back();
      return ok;
    }
    case TTerm::Kind::App:
    case TTerm::Kind::Pair:
      return t_alpha_rec(x.child_a(), y.child_a(), env) &&
             t_alpha_rec(x.child_b(), y.child_b(), env);
    case TTerm::Kind::Proj:
      return x.idx() == y.idx() && t_alpha_rec(x.child_a(), y.child_a(), env);
    case TTerm::Kind::Inj:
      return x.idx() == y.idx() && x.tt() == y.tt() &&
             t_alpha_rec(x.child_a(), y.child_a(), env);
    case TTerm::Kind::Absurd:
      return x.tt() == y.tt() && t_alpha_rec(x.child_a(), y.child_a(), env);
    case TTerm::Kind::Case: {
      if (x.tt() != y.tt() || x.tt2() != y.tt2()) return false;
      if (!t_alpha_rec(x.child_a(), y.child_a(), env)) return false;
      env.pairs.emplace_back(x.name(), y.name());
      bool ok = t_alpha_rec(x.child_b(), y.child_b(), env);
      env.pairs.pop_back();
      if (!ok) return false;
      env.pairs.emplace_back(x.name2(), y.name2());
      ok = t_alpha_rec(x.child_c(), y.child_c(), env);
      env.pairs.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace detail

inline bool t_alpha_eq(const TTerm& x, const TTerm& y) {
  detail::TAlphaEnv env;
  return detail::t_alpha_rec(x, y, env);
}

inline void print_t_rec(const TTerm& t, int prec, std::string& out) {
  auto wrap = [&](int mine, auto&& f) {
    if (mine < prec) out += '(';
    f();
    if (mine < prec) out += ')';
  };
  switch (t.kind()) {
    case TTerm::Kind::Var:
    case TTerm::Kind::ConstV:
      out += t.name();
      return;
    case TTerm::Kind::UnitV:
      out += "unit";
      return;
    case TTerm::Kind::Hole:
      out += "_";
      return;
    case TTerm::Kind::Lam:
      wrap(0, [&] {
        out += "\\" + t.name() + ":" + print_target_type(t.tt()) + ". ";
        print_t_rec(t.child_a(), 0, out);
      });
      return;
    case TTerm::Kind::App:
      wrap(10, [&] {
        print_t_rec(t.child_a(), 10, out);
        out += ' ';
        print_t_rec(t.child_b(), 11, out);
      });
      return;
    case TTerm::Kind::Pair:
      out += '<';
      print_t_rec(t.child_a(), 0, out);
      out += ", ";
      print_t_rec(t.child_b(), 0, out);
      out += '>';
      return;
    case TTerm::Kind::Proj:
      wrap(10, [&] {
        out += t.idx() == 1 ? "pi1 " : "pi2 ";
        print_t_rec(t.child_a(), 11, out);
      });
      return;
    case TTerm::Kind::Inj:
      wrap(10, [&] {
        out += (t.idx() == 1 ? "in1[" : "in2[") + print_target_type(t.tt()) + "] ";
        print_t_rec(t.child_a(), 11, out);
      });
      return;
    case TTerm::Kind::Absurd:
      wrap(10, [&] {
        out += "absurd[" + print_target_type(t.tt()) + "] ";
        print_t_rec(t.child_a(), 11, out);
      });
      return;
    case TTerm::Kind::Case:
      out += "case(";
      print_t_rec(t.child_a(), 0, out);
      out += "; " + t.name() + ":" + print_target_type(t.tt()) + ". ";
      print_t_rec(t.child_b(), 0, out);
      out += "; " + t.name2() + ":" + print_target_type(t.tt2()) + ". ";
      print_t_rec(t.child_c(), 0, out);
      out += ')';
      return;
  }
}

inline std::string print_target_term(const TTerm& t) {
  std::string out;
  print_t_rec(t, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Target typing.

using TEnv = std::vector<std::pair<std::string, TargetType>>;

inline TargetType infer_t(const TEnv& env, const TTerm& t) {
  auto fail = [&](const std::string& msg) -> TargetType {
    throw std::logic_error("target typing: " + msg + " in " + print_target_term(t));
  };
  switch (t.kind()) {
    case TTerm::Kind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == t.name()) return it->second;
      return fail("unbound variable " + t.name());
    }
    case TTerm::Kind::ConstV:
      return t.tt();
    case TTerm::Kind::UnitV:
      return TargetType::unit();
    case TTerm::Kind::Hole:
      return fail("hole");
    case TTerm::Kind::Lam: {
      TEnv e = env;
      e.emplace_back(t.name(), t.tt());
      return TargetType::arrow(t.tt(), infer_t(e, t.child_a()));
    }
    case TTerm::Kind::App: {
      TargetType f = infer_t(env, t.child_a());
      if (f.kind() != TargetType::Kind::Arrow) return fail("application of non-function");
      TargetType a = infer_t(env, t.child_b());
      if (a != f.left()) return fail("argument type mismatch");
      return f.right();
    }
    case TTerm::Kind::Pair:
      return TargetType::prod(infer_t(env, t.child_a()), infer_t(env, t.child_b()));
    case TTerm::Kind::Proj: {
      TargetType p = infer_t(env, t.child_a());
      if (p.kind() != TargetType::Kind::Prod) return fail("projection from non-product");
      return t.idx() == 1 ? p.left() : p.right();
    }
    case TTerm::Kind::Inj: {
      if (t.tt().kind() != TargetType::Kind::Sum) return fail("injection into non-sum");
      TargetType a = infer_t(env, t.child_a());
      if (a != (t.idx() == 1 ? t.tt().left() : t.tt().right()))
        return fail("injection payload mismatch");
      return t.tt();
    }
    case TTerm::Kind::Case: {
      TargetType s = infer_t(env, t.child_a());
      if (s.kind() != TargetType::Kind::Sum) return fail("case on non-sum");
      if (s.left() != t.tt() || s.right() != t.tt2()) return fail("case binder annotation");
      TEnv e1 = env;
      e1.emplace_back(t.name(), t.tt());
      TargetType r1 = infer_t(e1, t.child_b());
      TEnv e2 = env;
      e2.emplace_back(t.name2(), t.tt2());
      TargetType r2 = infer_t(e2, t.child_c());
      if (r1 != r2) return fail("case branches disagree");
      return r1;
    }
    case TTerm::Kind::Absurd: {
      TargetType a = infer_t(env, t.child_a());
      if (a.kind() != TargetType::Kind::Empty) return fail("absurd payload not empty");
      return t.tt();
    }
  }
  return fail("unreachable");
}

// ---------------------------------------------------------------------------
// Type translation.

namespace detail {
constexpr const char* kNuMarker = "\x01nu";
}

inline TargetType cps_type(const DeclTable& table, const Type& a) {
  switch (a.kind()) {
    case Type::Kind::Const:
      if (a.name() == detail::kNuMarker) return TargetType::var("a");
      return TargetType::constant(a.name());
    case Type::Kind::Arrow:
      return TargetType::prod(TargetType::arrow(cps_type(table, a.left()), TargetType::res()),
                              cps_type(table, a.right()));
    case Type::Kind::Top:
      return TargetType::empty();
    case Type::Kind::Prod:
      return TargetType::sum(cps_type(table, a.left()), cps_type(table, a.right()));
    case Type::Kind::Bot:
      return TargetType::unit();
    case Type::Kind::Disj:
      return TargetType::prod(cps_type(table, a.left()), cps_type(table, a.right()));
    case Type::Kind::NuRef: {
      Type body = table.unfold_body(a.name(), Type::constant(detail::kNuMarker));
      return TargetType::ind("a", cps_type(table, body));
    }
  }
  throw std::logic_error("cps_type: unreachable");
}

inline bool contains_nu(const Type& t) {
  switch (t.kind()) {
    case Type::Kind::NuRef:
      return true;
    case Type::Kind::Arrow:
    case Type::Kind::Prod:
    case Type::Kind::Disj:
      return contains_nu(t.left()) || contains_nu(t.right());
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Term translation.  Source term variables and continuation variables merge
// into the single target namespace: x : B becomes a variable of type
// [B] -> R, a : A becomes a variable of type [A].

namespace detail {

struct TransEnv {
  struct Item {
    bool covar;
    std::string src, tgt;
    TargetType tt;
  };
  std::vector<Item> items;
  std::set<std::string> used;

  std::string bind(bool covar, const std::string& src, TargetType tt) {
    std::string tgt = used.count(src) ? fresh_name(src, used) : src;
    used.insert(tgt);
    items.push_back({covar, src, tgt, std::move(tt)});
    return tgt;
  }
  std::string fresh(const std::string& stem) {
    std::string n = fresh_name(stem, used);
    used.insert(n);
    return n;
  }
  const Item* lookup(bool covar, const std::string& src) const {
    for (auto it = items.rbegin(); it != items.rend(); ++it)
      if (it->covar == covar && it->src == src) return &*it;
    return nullptr;
  }
};

inline TTerm cps_rec(const DeclTable& table, const Env& env, TransEnv tenv, const Term& m) {
  using K = Term::Kind;
  auto ty_of = [&](const Term& t) { return infer(env, t); };
  auto tr_ty = [&](const Type& a) {
    if (contains_nu(a)) throw OracleUnsupported("coinductive type in translated term");
    return cps_type(table, a);
  };
  switch (m.kind()) {
    case K::Const: {
      const Type* a = table.constant(m.name());
      if (!a) throw TypeError("unbound", "unknown constant: " + m.name(), m.span());
      return TTerm::constv(m.name(), TargetType::arrow(tr_ty(*a), TargetType::res()));
    }
    case K::Var: {
      const TransEnv::Item* it = tenv.lookup(false, m.name());
      if (!it) throw TypeError("unbound", "unbound variable: " + m.name(), m.span());
      return TTerm::var(it->tgt);
    }
    case K::Lam: {
      // \k:[B -> A]. (\x:[B] -> R. [M] (pi2 k)) (pi1 k)
      Type b = m.ty();
      Type a = infer(env.with_var(m.name(), b), m.child_a());
      TargetType tb = tr_ty(b), ta = tr_ty(a);
      TargetType tk = TargetType::prod(TargetType::arrow(tb, TargetType::res()), ta);
      TransEnv inner = tenv;
      std::string k = inner.fresh("k");
      std::string x = inner.bind(false, m.name(), TargetType::arrow(tb, TargetType::res()));
      TTerm body = cps_rec(table, env.with_var(m.name(), b), inner, m.child_a());
      (void)ta;
      return TTerm::lam(
          k, tk,
          TTerm::app(TTerm::lam(x, TargetType::arrow(tb, TargetType::res()),
                                TTerm::app(body, TTerm::proj(2, TTerm::var(k)))),
                     TTerm::proj(1, TTerm::var(k))));
    }
    case K::App: {
      // \k:[A]. [M] <[N], k>
      Type f = ty_of(m.child_a());
      TargetType ta = tr_ty(f.right());
      TransEnv inner = tenv;
      std::string k = inner.fresh("k");
      TTerm tm = cps_rec(table, env, inner, m.child_a());
      TTerm tn = cps_rec(table, env, inner, m.child_b());
      return TTerm::lam(k, ta, TTerm::app(tm, TTerm::pair(tn, TTerm::var(k))));
    }
    case K::Unit: {
      TransEnv inner = tenv;
      std::string k = inner.fresh("k");
      return TTerm::lam(k, TargetType::empty(),
                        TTerm::absurd(TargetType::res(), TTerm::var(k)));
    }
    case K::Pair: {
      // \k:[A1] + [A2]. case(k; k1:[A1]. [M1] k1; k2:[A2]. [M2] k2)
      TargetType t1 = tr_ty(ty_of(m.child_a())), t2 = tr_ty(ty_of(m.child_b()));
      TransEnv inner = tenv;
      std::string k = inner.fresh("k");
      std::string k1 = inner.fresh("k1");
      std::string k2 = inner.fresh("k2");
      TTerm t_a = cps_rec(table, env, inner, m.child_a());
      TTerm t_b = cps_rec(table, env, inner, m.child_b());
      return TTerm::lam(k, TargetType::sum(t1, t2),
                        TTerm::case_of(TTerm::var(k), k1, t1,
                                       TTerm::app(t_a, TTerm::var(k1)), k2, t2,
                                       TTerm::app(t_b, TTerm::var(k2))));
    }
    case K::Proj: {
      // \k:[Aj]. [M] (inj[[A1] + [A2]] k)
      Type p = ty_of(m.child_a());
      TargetType s = tr_ty(p);  // Sum
      TargetType tj = m.idx() == 1 ? s.left() : s.right();
      TransEnv inner = tenv;
      std::string k = inner.fresh("k");
      TTerm tm = cps_rec(table, env, inner, m.child_a());
      return TTerm::lam(k, tj, TTerm::app(tm, TTerm::inj(m.idx(), s, TTerm::var(k))));
    }
    case K::Mu: {
      // \a:[A]. [M] unit
      TargetType ta = tr_ty(m.ty());
      TransEnv inner = tenv;
      std::string a = inner.bind(true, m.name(), ta);
      TTerm body =
          cps_rec(table, env.with_covar(m.name(), m.ty()), inner, m.child_a());
      return TTerm::lam(a, ta, TTerm::app(body, TTerm::unitv()));
    }
    case K::Named: {
      // \u:Unit. [M] a
      const TransEnv::Item* it = tenv.lookup(true, m.name());
      if (!it)
        throw TypeError("unbound", "unbound continuation variable: " + m.name(), m.span());
      TransEnv inner = tenv;
      std::string u = inner.fresh("u");
      TTerm tm = cps_rec(table, env, inner, m.child_a());
      return TTerm::lam(u, TargetType::unit(), TTerm::app(tm, TTerm::var(it->tgt)));
    }
    case K::MuPair: {
      // \p:[A1] * [A2]. (\a1:[A1]. \a2:[A2]. [M] unit) (pi1 p) (pi2 p)
      TargetType t1 = tr_ty(m.ty()), t2 = tr_ty(m.ty2());
      TransEnv inner = tenv;
      std::string p = inner.fresh("p");
      std::string a1 = inner.bind(true, m.name(), t1);
      std::string a2 = inner.bind(true, m.name2(), t2);
      TTerm body = cps_rec(
          table, env.with_covar(m.name(), m.ty()).with_covar(m.name2(), m.ty2()), inner,
          m.child_a());
      return TTerm::lam(
          p, TargetType::prod(t1, t2),
          TTerm::app(TTerm::app(TTerm::lam(a1, t1,
                                           TTerm::lam(a2, t2,
                                                      TTerm::app(body, TTerm::unitv()))),
                                TTerm::proj(1, TTerm::var(p))),
                     TTerm::proj(2, TTerm::var(p))));
    }
    case K::NamedPair: {
      // \u:Unit. [M] <a1, a2>
      const TransEnv::Item* i1 = tenv.lookup(true, m.name());
      const TransEnv::Item* i2 = tenv.lookup(true, m.name2());
      if (!i1)
        throw TypeError("unbound", "unbound continuation variable: " + m.name(), m.span());
      if (!i2)
        throw TypeError("unbound", "unbound continuation variable: " + m.name2(), m.span());
      TransEnv inner = tenv;
      std::string u = inner.fresh("u");
      TTerm tm = cps_rec(table, env, inner, m.child_a());
      return TTerm::lam(u, TargetType::unit(),
                        TTerm::app(tm, TTerm::pair(TTerm::var(i1->tgt), TTerm::var(i2->tgt))));
    }
    case K::Destr:
    case K::Unfold:
      throw OracleUnsupported("coinductive constructs are not translated");
    case K::Hole:
      throw std::logic_error("cps: hole in term");
    default:
      throw std::logic_error("cps: term still contains shorthand forms");
  }
}

}  // namespace detail

struct CpsResult {
  TTerm term;
  TargetType type;  // the [A] -> R type of `term`
  TEnv tenv;        // free target variables with their types
};

// Translate a source term (already elaborated) under the given environment.
inline CpsResult cps_term(const DeclTable& table, const Env& env, const Term& m) {
  Type a = infer(env, m);
  if (contains_nu(a)) throw OracleUnsupported("coinductive type in translated term");
  detail::TransEnv tenv;
  TEnv out;
  for (auto& [x, b] : env.vars) {
    if (contains_nu(b)) throw OracleUnsupported("coinductive type in environment");
    TargetType tt = TargetType::arrow(cps_type(table, b), TargetType::res());
    std::string tgt = tenv.bind(false, x, tt);
    out.emplace_back(tgt, tt);
  }
  for (auto& [cv, b] : env.covars) {
    if (contains_nu(b)) throw OracleUnsupported("coinductive type in environment");
    TargetType tt = cps_type(table, b);
    std::string tgt = tenv.bind(true, cv, tt);
    out.emplace_back(tgt, tt);
  }
  TTerm t = detail::cps_rec(table, env, tenv, m);
  return CpsResult{t, TargetType::arrow(cps_type(table, a), TargetType::res()), out};
}

// ---------------------------------------------------------------------------
// Target normalization.

namespace detail {

// Beta steps, commuting conversions and absurdity absorption, to fixpoint.
// The environment is threaded only to type case branches over an absurd
// scrutinee.
inline TTerm norm_a(const TEnv& env, const TTerm& t) {
  using K = TTerm::Kind;
  auto with = [](const TEnv& e, const std::string& x, const TargetType& tt) {
    TEnv e2 = e;
    e2.emplace_back(x, tt);
    return e2;
  };
  switch (t.kind()) {
    case K::Var:
    case K::ConstV:
    case K::UnitV:
    case K::Hole:
      return t;
    case K::Lam:
      return TTerm::lam(t.name(), t.tt(), norm_a(with(env, t.name(), t.tt()), t.child_a()));
    case K::Pair:
      return TTerm::pair(norm_a(env, t.child_a()), norm_a(env, t.child_b()));
    case K::Inj:
      return TTerm::inj(t.idx(), t.tt(), norm_a(env, t.child_a()));
    case K::App: {
      TTerm f = norm_a(env, t.child_a());
      TTerm a = norm_a(env, t.child_b());
      if (f.kind() == K::Lam) return norm_a(env, t_subst(f.child_a(), f.name(), a));
      if (f.kind() == K::Case) {
        std::string x1 = f.name(), x2 = f.name2();
        TTerm b1 = f.child_b(), b2 = f.child_c();
        std::set<std::string> afv = t_free_vars(a);
        if (afv.count(x1)) {
          std::set<std::string> avoid = afv;
          for (auto& v : t_free_vars(b1)) avoid.insert(v);
          std::string y = fresh_name(x1, avoid);
          b1 = t_subst(b1, x1, TTerm::var(y));
          x1 = y;
        }
        if (afv.count(x2)) {
          std::set<std::string> avoid = afv;
          for (auto& v : t_free_vars(b2)) avoid.insert(v);
          std::string y = fresh_name(x2, avoid);
          b2 = t_subst(b2, x2, TTerm::var(y));
          x2 = y;
        }
        TTerm pushed = TTerm::case_of(f.child_a(), x1, f.tt(), TTerm::app(b1, a), x2, f.tt2(),
                                      TTerm::app(b2, a));
        return norm_a(env, pushed);
      }
      if (f.kind() == K::Absurd) {
        TargetType ft = f.tt();
        assert(ft.kind() == TargetType::Kind::Arrow);
        return TTerm::absurd(ft.right(), f.child_a());
      }
      return TTerm::app(f, a);
    }
    case K::Proj: {
      TTerm p = norm_a(env, t.child_a());
      if (p.kind() == K::Pair) return t.idx() == 1 ? p.child_a() : p.child_b();
      if (p.kind() == K::Case) {
        TTerm pushed = TTerm::case_of(p.child_a(), p.name(), p.tt(),
                                      TTerm::proj(t.idx(), p.child_b()), p.name2(), p.tt2(),
                                      TTerm::proj(t.idx(), p.child_c()));
        return norm_a(env, pushed);
      }
      if (p.kind() == K::Absurd) {
        TargetType pt = p.tt();
        assert(pt.kind() == TargetType::Kind::Prod);
        return TTerm::absurd(t.idx() == 1 ? pt.left() : pt.right(), p.child_a());
      }
      return TTerm::proj(t.idx(), p);
    }
    case K::Absurd: {
      TTerm p = norm_a(env, t.child_a());
      if (p.kind() == K::Absurd) return TTerm::absurd(t.tt(), p.child_a());
      if (p.kind() == K::Case) {
        TTerm pushed = TTerm::case_of(p.child_a(), p.name(), p.tt(),
                                      TTerm::absurd(t.tt(), p.child_b()), p.name2(), p.tt2(),
                                      TTerm::absurd(t.tt(), p.child_c()));
        return norm_a(env, pushed);
      }
      return TTerm::absurd(t.tt(), p);
    }
    case K::Case: {
      TTerm s = norm_a(env, t.child_a());
      if (s.kind() == K::Inj) {
        const TTerm& branch = s.idx() == 1 ? t.child_b() : t.child_c();
        const std::string& x = s.idx() == 1 ? t.name() : t.name2();
        return norm_a(env, t_subst(branch, x, s.child_a()));
      }
      if (s.kind() == K::Case) {
        std::string x1 = s.name(), x2 = s.name2();
        TTerm u1 = s.child_b(), u2 = s.child_c();
        std::set<std::string> vfv = t_free_vars(t.child_b());
        for (auto& v : t_free_vars(t.child_c())) vfv.insert(v);
        if (vfv.count(x1)) {
          std::set<std::string> avoid = vfv;
          for (auto& v : t_free_vars(u1)) avoid.insert(v);
          std::string y = fresh_name(x1, avoid);
          u1 = t_subst(u1, x1, TTerm::var(y));
          x1 = y;
        }
        if (vfv.count(x2)) {
          std::set<std::string> avoid = vfv;
          for (auto& v : t_free_vars(u2)) avoid.insert(v);
          std::string y = fresh_name(x2, avoid);
          u2 = t_subst(u2, x2, TTerm::var(y));
          x2 = y;
        }
        TTerm pushed = TTerm::case_of(
            s.child_a(), x1, s.tt(),
            TTerm::case_of(u1, t.name(), t.tt(), t.child_b(), t.name2(), t.tt2(), t.child_c()),
            x2, s.tt2(),
            TTerm::case_of(u2, t.name(), t.tt(), t.child_b(), t.name2(), t.tt2(), t.child_c()));
        return norm_a(env, pushed);
      }
      if (s.kind() == K::Absurd) {
        TargetType c = infer_t(with(env, t.name(), t.tt()), t.child_b());
        return TTerm::absurd(c, s.child_a());
      }
      return TTerm::case_of(s, t.name(), t.tt(),
                            norm_a(with(env, t.name(), t.tt()), t.child_b()), t.name2(),
                            t.tt2(), norm_a(with(env, t.name2(), t.tt2()), t.child_c()));
    }
  }
  return t;
}

// Replace every Unit-typed subterm with the unit value.
inline TTerm unit_collapse(const TEnv& env, const TTerm& t) {
  using K = TTerm::Kind;
  if (t.kind() != K::UnitV) {
    TargetType tt = infer_t(env, t);
    if (tt.kind() == TargetType::Kind::Unit) return TTerm::unitv();
  }
  auto with = [](const TEnv& e, const std::string& x, const TargetType& tt) {
    TEnv e2 = e;
    e2.emplace_back(x, tt);
    return e2;
  };
  switch (t.kind()) {
    case K::Var:
    case K::ConstV:
    case K::UnitV:
    case K::Hole:
      return t;
    case K::Lam:
      return TTerm::lam(t.name(), t.tt(),
                        unit_collapse(with(env, t.name(), t.tt()), t.child_a()));
    case K::App:
      return TTerm::app(unit_collapse(env, t.child_a()), unit_collapse(env, t.child_b()));
    case K::Pair:
      return TTerm::pair(unit_collapse(env, t.child_a()), unit_collapse(env, t.child_b()));
    case K::Proj:
      return TTerm::proj(t.idx(), unit_collapse(env, t.child_a()));
    case K::Inj:
      return TTerm::inj(t.idx(), t.tt(), unit_collapse(env, t.child_a()));
    case K::Absurd:
      return TTerm::absurd(t.tt(), unit_collapse(env, t.child_a()));
    case K::Case:
      return TTerm::case_of(unit_collapse(env, t.child_a()), t.name(), t.tt(),
                            unit_collapse(with(env, t.name(), t.tt()), t.child_b()), t.name2(),
                            t.tt2(),
                            unit_collapse(with(env, t.name2(), t.tt2()), t.child_c()));
  }
  return t;
}

// Shortest projection path from a type to Empty (through products only),
// first components preferred.  Empty path means the type itself is Empty.
inline std::optional<std::vector<int>> empty_path(const TargetType& t) {
  std::deque<std::pair<TargetType, std::vector<int>>> q;
  q.emplace_back(t, std::vector<int>{});
  while (!q.empty()) {
    auto [ty, path] = q.front();
    q.pop_front();
    if (ty.kind() == TargetType::Kind::Empty) return path;
    if (ty.kind() == TargetType::Kind::Prod) {
      auto p1 = path;
      p1.push_back(1);
      q.emplace_back(ty.left(), std::move(p1));
      auto p2 = path;
      p2.push_back(2);
      q.emplace_back(ty.right(), std::move(p2));
    }
  }
  return std::nullopt;
}

// In any scope where a variable reaches Empty by projections, the whole
// position is vacuous: canonicalize to the designated absurdity (or to the
// canonical Empty-typed chain itself).  Outermost qualifying position wins;
// among witnesses the earliest-bound variable, then the shortest path.
inline TTerm empty_collapse(const TEnv& env, const TTerm& t) {
  using K = TTerm::Kind;
  auto witness = [&](const TEnv& e) -> std::optional<TTerm> {
    for (auto& [x, tt] : e) {
      if (auto path = empty_path(tt)) {
        TTerm w = TTerm::var(x);
        for (int j : *path) w = TTerm::proj(j, w);
        return w;
      }
    }
    return std::nullopt;
  };
  std::function<TTerm(const TEnv&, const TTerm&)> go = [&](const TEnv& e,
                                                           const TTerm& s) -> TTerm {
    if (auto w = witness(e)) {
      TargetType tt = infer_t(e, s);
      if (tt.kind() != TargetType::Kind::Unit) {
        TTerm canon = tt.kind() == TargetType::Kind::Empty ? *w : TTerm::absurd(tt, *w);
        return t_alpha_eq(s, canon) ? s : canon;
      }
    }
    auto with = [](const TEnv& e0, const std::string& x, const TargetType& tt) {
      TEnv e2 = e0;
      e2.emplace_back(x, tt);
      return e2;
    };
    switch (s.kind()) {
      case K::Var:
      case K::ConstV:
      case K::UnitV:
      case K::Hole:
        return s;
      case K::Lam:
        return TTerm::lam(s.name(), s.tt(), go(with(e, s.name(), s.tt()), s.child_a()));
      case K::App:
        return TTerm::app(go(e, s.child_a()), go(e, s.child_b()));
      case K::Pair:
        return TTerm::pair(go(e, s.child_a()), go(e, s.child_b()));
      case K::Proj:
        return TTerm::proj(s.idx(), go(e, s.child_a()));
      case K::Inj:
        return TTerm::inj(s.idx(), s.tt(), go(e, s.child_a()));
      case K::Absurd:
        return TTerm::absurd(s.tt(), go(e, s.child_a()));
      case K::Case:
        return TTerm::case_of(go(e, s.child_a()), s.name(), s.tt(),
                              go(with(e, s.name(), s.tt()), s.child_b()), s.name2(), s.tt2(),
                              go(with(e, s.name2(), s.tt2()), s.child_c()));
    }
    return s;
  };
  return go(env, t);
}

// Type-directed eta-long expansion for functions and products.  Neutral
// spines are rebuilt with expanded arguments; absurdities stay atomic.
inline TTerm eta_long(const TEnv& env, const TTerm& t, const TargetType& ty);

inline std::pair<TTerm, TargetType> rebuild_neutral(const TEnv& env, const TTerm& t) {
  using K = TTerm::Kind;
  switch (t.kind()) {
    case K::Var:
      return {t, infer_t(env, t)};
    case K::ConstV:
      return {t, t.tt()};
    case K::App: {
      auto [f, ft] = rebuild_neutral(env, t.child_a());
      assert(ft.kind() == TargetType::Kind::Arrow);
      TTerm a = eta_long(env, t.child_b(), ft.left());
      return {TTerm::app(f, a), ft.right()};
    }
    case K::Proj: {
      auto [p, pt] = rebuild_neutral(env, t.child_a());
      assert(pt.kind() == TargetType::Kind::Prod);
      return {TTerm::proj(t.idx(), p), t.idx() == 1 ? pt.left() : pt.right()};
    }
    case K::Absurd:
      return {t, t.tt()};
    default:
      return {t, infer_t(env, t)};
  }
}

inline TTerm eta_long(const TEnv& env, const TTerm& t, const TargetType& ty) {
  using K = TTerm::Kind;
  if (ty.kind() == TargetType::Kind::Unit) return TTerm::unitv();
  auto with = [](const TEnv& e, const std::string& x, const TargetType& tt) {
    TEnv e2 = e;
    e2.emplace_back(x, tt);
    return e2;
  };
  switch (t.kind()) {
    case K::Lam: {
      assert(ty.kind() == TargetType::Kind::Arrow);
      return TTerm::lam(t.name(), t.tt(),
                        eta_long(with(env, t.name(), t.tt()), t.child_a(), ty.right()));
    }
    case K::Pair: {
      assert(ty.kind() == TargetType::Kind::Prod);
      return TTerm::pair(eta_long(env, t.child_a(), ty.left()),
                         eta_long(env, t.child_b(), ty.right()));
    }
    case K::Inj: {
      const TargetType& s = t.tt();
      return TTerm::inj(t.idx(), s,
                        eta_long(env, t.child_a(), t.idx() == 1 ? s.left() : s.right()));
    }
    case K::UnitV:
      return t;
    case K::Absurd:
      return t;
    case K::Case: {
      auto [scrut, st] = rebuild_neutral(env, t.child_a());
      (void)st;
      return TTerm::case_of(scrut, t.name(), t.tt(),
                            eta_long(with(env, t.name(), t.tt()), t.child_b(), ty), t.name2(),
                            t.tt2(), eta_long(with(env, t.name2(), t.tt2()), t.child_c(), ty));
    }
    default: {  // neutral
      auto [n, nt] = rebuild_neutral(env, t);
      (void)nt;
      if (ty.kind() == TargetType::Kind::Arrow) {
        std::set<std::string> avoid = t_free_vars(n);
        for (auto& [x, _] : env) avoid.insert(x);
        std::string x = fresh_name("e", avoid);
        TEnv e2 = with(env, x, ty.left());
        TTerm arg = eta_long(e2, TTerm::var(x), ty.left());
        return TTerm::lam(x, ty.left(), eta_long(e2, TTerm::app(n, arg), ty.right()));
      }
      if (ty.kind() == TargetType::Kind::Prod) {
        return TTerm::pair(eta_long(env, TTerm::proj(1, n), ty.left()),
                           eta_long(env, TTerm::proj(2, n), ty.right()));
      }
      return n;
    }
  }
}

inline int case_count(const TTerm& t) {
  using K = TTerm::Kind;
  switch (t.kind()) {
    case K::Var:
    case K::ConstV:
    case K::UnitV:
    case K::Hole:
      return 0;
    case K::Lam:
    case K::Proj:
    case K::Inj:
    case K::Absurd:
      return case_count(t.child_a());
    case K::App:
    case K::Pair:
      return case_count(t.child_a()) + case_count(t.child_b());
    case K::Case:
      return 1 + case_count(t.child_a()) + case_count(t.child_b()) + case_count(t.child_c());
  }
  return 0;
}

inline bool t_has_hole(const TTerm& t) {
  using K = TTerm::Kind;
  switch (t.kind()) {
    case K::Hole:
      return true;
    case K::Var:
    case K::ConstV:
    case K::UnitV:
      return false;
    case K::Lam:
    case K::Proj:
    case K::Inj:
    case K::Absurd:
      return t_has_hole(t.child_a());
    case K::App:
    case K::Pair:
      return t_has_hole(t.child_a()) || t_has_hole(t.child_b());
    case K::Case:
      return t_has_hole(t.child_a()) || t_has_hole(t.child_b()) || t_has_hole(t.child_c());
  }
  return false;
}

// Replace subterms alpha-equal to `pat` with a hole.
inline TTerm abstract_pattern(const TTerm& t, const TTerm& pat) {
  using K = TTerm::Kind;
  if (t_alpha_eq(t, pat)) return TTerm::hole();
  switch (t.kind()) {
    case K::Var:
    case K::ConstV:
    case K::UnitV:
    case K::Hole:
      return t;
    case K::Lam:
      return TTerm::lam(t.name(), t.tt(), abstract_pattern(t.child_a(), pat));
    case K::App:
      return TTerm::app(abstract_pattern(t.child_a(), pat), abstract_pattern(t.child_b(), pat));
    case K::Pair:
      return TTerm::pair(abstract_pattern(t.child_a(), pat),
                         abstract_pattern(t.child_b(), pat));
    case K::Proj:
      return TTerm::proj(t.idx(), abstract_pattern(t.child_a(), pat));
    case K::Inj:
      return TTerm::inj(t.idx(), t.tt(), abstract_pattern(t.child_a(), pat));
    case K::Absurd:
      return TTerm::absurd(t.tt(), abstract_pattern(t.child_a(), pat));
    case K::Case:
      return TTerm::case_of(abstract_pattern(t.child_a(), pat), t.name(), t.tt(),
                            abstract_pattern(t.child_b(), pat), t.name2(), t.tt2(),
                            abstract_pattern(t.child_c(), pat));
  }
  return t;
}

// Fill every hole with `s`, renaming binders that would capture its free
// variables.
inline TTerm plug_holes(const TTerm& c, const TTerm& s) {
  std::set<std::string> sfv = t_free_vars(s);
  std::function<TTerm(const TTerm&)> go = [&](const TTerm& t) -> TTerm {
    using K = TTerm::Kind;
    if (!t_has_hole(t)) return t;
    switch (t.kind()) {
      case K::Hole:
        return s;
      case K::Lam: {
        std::string x = t.name();
        TTerm body = t.child_a();
        if (sfv.count(x)) {
          std::set<std::string> avoid = sfv;
          for (auto& v : t_free_vars(body)) avoid.insert(v);
          std::string y = fresh_name(x, avoid);
          body = t_subst(body, x, TTerm::var(y));
          x = y;
        }
        return TTerm::lam(x, t.tt(), go(body));
      }
      case K::App:
        return TTerm::app(go(t.child_a()), go(t.child_b()));
      case K::Pair:
        return TTerm::pair(go(t.child_a()), go(t.child_b()));
      case K::Proj:
        return TTerm::proj(t.idx(), go(t.child_a()));
      case K::Inj:
        return TTerm::inj(t.idx(), t.tt(), go(t.child_a()));
      case K::Absurd:
        return TTerm::absurd(t.tt(), go(t.child_a()));
      case K::Case: {
        TTerm scrut = go(t.child_a());
        std::string x1 = t.name(), x2 = t.name2();
        TTerm b1 = t.child_b(), b2 = t.child_c();
        if (sfv.count(x1) && t_has_hole(b1)) {
          std::set<std::string> avoid = sfv;
          for (auto& v : t_free_vars(b1)) avoid.insert(v);
          std::string y = fresh_name(x1, avoid);
          b1 = t_subst(b1, x1, TTerm::var(y));
          x1 = y;
        }
        if (sfv.count(x2) && t_has_hole(b2)) {
          std::set<std::string> avoid = sfv;
          for (auto& v : t_free_vars(b2)) avoid.insert(v);
          std::string y = fresh_name(x2, avoid);
          b2 = t_subst(b2, x2, TTerm::var(y));
          x2 = y;
        }
        return TTerm::case_of(scrut, x1, t.tt(), go(b1), x2, t.tt2(), go(b2));
      }
      default:
        return t;
    }
  };
  return go(c);
}

// One innermost-leftmost generalized case-eta contraction, if any.
// case(s; k1. C[p1]; k2. C[p2]) -> C[s], where p_j is the eta-long image of
// the j-th injection of k_j and C mentions neither k.
inline std::optional<TTerm> try_case_eta(const TTerm& t) {
  using K = TTerm::Kind;
  auto rebuild1 = [&](const TTerm& inner, auto make) -> std::optional<TTerm> {
    if (auto r = try_case_eta(inner)) return make(*r);
    return std::nullopt;
  };
  switch (t.kind()) {
    case K::Var:
    case K::ConstV:
    case K::UnitV:
    case K::Hole:
      return std::nullopt;
    case K::Lam:
      return rebuild1(t.child_a(),
                      [&](const TTerm& r) { return TTerm::lam(t.name(), t.tt(), r); });
    case K::Proj:
      return rebuild1(t.child_a(), [&](const TTerm& r) { return TTerm::proj(t.idx(), r); });
    case K::Inj:
      return rebuild1(t.child_a(),
                      [&](const TTerm& r) { return TTerm::inj(t.idx(), t.tt(), r); });
    case K::Absurd:
      return rebuild1(t.child_a(), [&](const TTerm& r) { return TTerm::absurd(t.tt(), r); });
    case K::App: {
      if (auto r = try_case_eta(t.child_a())) return TTerm::app(*r, t.child_b());
      if (auto r = try_case_eta(t.child_b())) return TTerm::app(t.child_a(), *r);
      return std::nullopt;
    }
    case K::Pair: {
      if (auto r = try_case_eta(t.child_a())) return TTerm::pair(*r, t.child_b());
      if (auto r = try_case_eta(t.child_b())) return TTerm::pair(t.child_a(), *r);
      return std::nullopt;
    }
    case K::Case: {
      if (auto r = try_case_eta(t.child_a()))
        return TTerm::case_of(*r, t.name(), t.tt(), t.child_b(), t.name2(), t.tt2(),
                              t.child_c());
      if (auto r = try_case_eta(t.child_b()))
        return TTerm::case_of(t.child_a(), t.name(), t.tt(), *r, t.name2(), t.tt2(),
                              t.child_c());
      if (auto r = try_case_eta(t.child_c()))
        return TTerm::case_of(t.child_a(), t.name(), t.tt(), t.child_b(), t.name2(), t.tt2(),
                              *r);
      // children are eta-free; try this node
      TargetType s = TargetType::sum(t.tt(), t.tt2());
      TEnv scratch;
      scratch.emplace_back(t.name(), t.tt());
      TTerm p1 = eta_long(scratch, TTerm::inj(1, s, TTerm::var(t.name())), s);
      scratch.clear();
      scratch.emplace_back(t.name2(), t.tt2());
      TTerm p2 = eta_long(scratch, TTerm::inj(2, s, TTerm::var(t.name2())), s);
      TTerm c1 = abstract_pattern(t.child_b(), p1);
      TTerm c2 = abstract_pattern(t.child_c(), p2);
      if (t_free_vars(c1).count(t.name())) return std::nullopt;
      if (t_free_vars(c2).count(t.name2())) return std::nullopt;
      if (!t_alpha_eq(c1, c2)) return std::nullopt;
      TTerm res = plug_holes(c1, t.child_a());
      if (case_count(res) >= 1 + case_count(t.child_a()) + case_count(t.child_b()) +
                                 case_count(t.child_c()))
        return std::nullopt;  // would not shrink; keep as is
      return res;
    }
  }
  return std::nullopt;
}

inline TTerm stabilize(const TEnv& env, TTerm t) {
  for (;;) {
    TTerm t0 = t;
    t = norm_a(env, t);
    t = unit_collapse(env, t);
    t = empty_collapse(env, t);
    if (t_alpha_eq(t, t0)) break;
  }
  TargetType ty = infer_t(env, t);
  t = eta_long(env, t, ty);
  t = empty_collapse(env, t);
  return t;
}

}  // namespace detail

inline TTerm target_normalize(const TEnv& env, TTerm t) {
  t = detail::stabilize(env, t);
  for (int guard = 0; guard < 256; ++guard) {
    auto r = detail::try_case_eta(t);
    if (!r) break;
    t = detail::stabilize(env, *r);
  }
  return t;
}

// ---------------------------------------------------------------------------
// The comparison oracle: translate both sides under one environment,
// normalize, compare.  Two-valued by design.

inline bool cps_equal(const DeclTable& table, const Env& env, const Term& m1, const Term& m2) {
  detail::TransEnv tenv;
  TEnv targ;
  for (auto& [x, b] : env.vars) {
    if (contains_nu(b)) throw OracleUnsupported("coinductive type in environment");
    TargetType tt = TargetType::arrow(cps_type(table, b), TargetType::res());
    std::string tgt = tenv.bind(false, x, tt);
    targ.emplace_back(tgt, tt);
  }
  for (auto& [cv, b] : env.covars) {
    if (contains_nu(b)) throw OracleUnsupported("coinductive type in environment");
    TargetType tt = cps_type(table, b);
    std::string tgt = tenv.bind(true, cv, tt);
    targ.emplace_back(tgt, tt);
  }
  TTerm t1 = detail::cps_rec(table, env, tenv, m1);
  TTerm t2 = detail::cps_rec(table, env, tenv, m2);
  TTerm n1 = target_normalize(targ, t1);
  TTerm n2 = target_normalize(targ, t2);
  return t_alpha_eq(n1, n2);
}

// Shape evidence from the translation: F applied to a fresh source variable,
// once normalized, immediately hands a value to that variable's continuation.
inline bool cps_focal_hint(const DeclTable& table, const Term& f) {
  Env env;
  env.decls = &table;
  Type ft = infer(env, f);
  if (ft.kind() != Type::Kind::Arrow) return false;
  if (contains_nu(ft)) return false;
  Env env2 = env.with_var("x", ft.left());
  detail::TransEnv tenv;
  TEnv targ;
  TargetType xt = TargetType::arrow(cps_type(table, ft.left()), TargetType::res());
  std::string xt_name = tenv.bind(false, "x", xt);
  targ.emplace_back(xt_name, xt);
  TTerm t;
  try {
    t = detail::cps_rec(table, env2, tenv, Term::app(f, Term::var("x")));
  } catch (const OracleUnsupported&) {
    return false;
  }
  TTerm n = target_normalize(targ, t);
  if (n.kind() != TTerm::Kind::Lam) return false;
  TTerm body = n.child_a();
  if (body.kind() != TTerm::Kind::App) return false;
  if (body.child_a().kind() != TTerm::Kind::Var || body.child_a().name() != xt_name)
    return false;
  return t_free_vars(body.child_b()).count(xt_name) == 0;
}

}  // namespace mucalc
