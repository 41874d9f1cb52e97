#pragma once

// Core syntax of the calculus: types, terms, free-variable sets,
// alpha-equivalence, capture-avoiding substitution and the structural
// substitution [a* := C] that the control rules are built on.
//
// Terms and types are immutable; handles share subtrees freely. Every
// operation here is a pure function, so everything is safe to use from
// several threads at once.

#include <cassert>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mucalc {

struct SrcSpan {
  int line = 0;
  int col = 0;
  bool known() const { return line > 0; }
};

// ---------------------------------------------------------------------------
// Types
//   A ::= P | A -> B | Top | A * B | Bot | A \/ B | nu N
// Negation ~A abbreviates A -> Bot, and A (+) B abbreviates ~~A \/ ~~B;
// both are expanded at construction time, so the representation is sugar-free.

class Type {
public:
  enum class Kind { Const, Arrow, Top, Prod, Bot, Disj, NuRef };

private:
  struct Node {
    Kind kind;
    std::string name;                  // Const, NuRef
    std::shared_ptr<const Node> a, b;  // Arrow, Prod, Disj
  };
  std::shared_ptr<const Node> p_;
  explicit Type(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

  static Type make(Kind k, std::string name, Type a, Type b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->a = a.p_;
    n->b = b.p_;
    return Type(std::move(n));
  }

public:
  Type() = default;  // null handle; only valid as a placeholder
  bool valid() const { return p_ != nullptr; }

  static Type constant(std::string n) { return make(Kind::Const, std::move(n), Type(), Type()); }
  static Type nu(std::string n) { return make(Kind::NuRef, std::move(n), Type(), Type()); }
  static Type top() { return make(Kind::Top, {}, Type(), Type()); }
  static Type bot() { return make(Kind::Bot, {}, Type(), Type()); }
  static Type arrow(Type a, Type b) { return make(Kind::Arrow, {}, std::move(a), std::move(b)); }
  static Type prod(Type a, Type b) { return make(Kind::Prod, {}, std::move(a), std::move(b)); }
  static Type disj(Type a, Type b) { return make(Kind::Disj, {}, std::move(a), std::move(b)); }
  static Type neg(Type a) { return arrow(std::move(a), bot()); }
  static Type oplus(Type a, Type b) { return disj(neg(neg(std::move(a))), neg(neg(std::move(b)))); }

  Kind kind() const { return p_->kind; }
  const std::string& name() const { return p_->name; }
  Type left() const { return Type(p_->a); }
  Type right() const { return Type(p_->b); }

  bool is_neg() const { return kind() == Kind::Arrow && right().kind() == Kind::Bot; }

  friend bool operator==(const Type& x, const Type& y) {
    if (x.p_ == y.p_) return true;
    if (!x.p_ || !y.p_) return false;
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case Kind::Const:
      case Kind::NuRef:
        return x.name() == y.name();
      case Kind::Top:
      case Kind::Bot:
        return true;
      default:
        return x.left() == y.left() && x.right() == y.right();
    }
  }
  friend bool operator!=(const Type& x, const Type& y) { return !(x == y); }
};

// ---------------------------------------------------------------------------
// Terms
//
// Core constructors mirror the typing rules; the Kinds after Hole are sugar
// produced by the parser and removed by elaborate().  Hole only appears
// inside ControlContext values, never in a real term.

class Term {
public:
  enum class Kind {
    Const,
    Var,
    Lam,
    App,
    Unit,
    Pair,
    Proj,
    Mu,
    Named,
    MuPair,
    NamedPair,
    Destr,
    Unfold,
    Hole,
    // sugar:
    Inj,
    Case,
    Focus,
    Unfocus,
    NotF,
    HeadS,
    TailS,
    Numeral
  };

private:
  struct Node {
    Kind kind;
    std::string name;   // Var/Const name; binder or channel; nu name for Destr/Unfold/HeadS/TailS
    std::string name2;  // second binder/channel of MuPair/NamedPair
    Type ty, ty2;       // binder annotations; Inj stores both oplus components
    std::shared_ptr<const Node> a, b;
    int idx = 0;  // Proj/Inj index (1 or 2), Numeral value
    SrcSpan span;
  };
  std::shared_ptr<const Node> p_;
  explicit Term(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

  static Term make(Kind k, std::string name, std::string name2, Type ty, Type ty2, Term a, Term b,
                   int idx) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->name2 = std::move(name2);
    n->ty = std::move(ty);
    n->ty2 = std::move(ty2);
    n->a = a.p_;
    n->b = b.p_;
    n->idx = idx;
    return Term(std::move(n));
  }

public:
  Term() = default;
  bool valid() const { return p_ != nullptr; }

  static Term constant(std::string n) { return make(Kind::Const, std::move(n), {}, {}, {}, {}, {}, 0); }
  static Term var(std::string n) { return make(Kind::Var, std::move(n), {}, {}, {}, {}, {}, 0); }
  static Term lam(std::string x, Type ty, Term body) {
    return make(Kind::Lam, std::move(x), {}, std::move(ty), {}, std::move(body), {}, 0);
  }
  static Term app(Term f, Term arg) { return make(Kind::App, {}, {}, {}, {}, std::move(f), std::move(arg), 0); }
  static Term unit() { return make(Kind::Unit, {}, {}, {}, {}, {}, {}, 0); }
  static Term pair(Term a, Term b) { return make(Kind::Pair, {}, {}, {}, {}, std::move(a), std::move(b), 0); }
  static Term proj(int j, Term m) {
    assert(j == 1 || j == 2);
    return make(Kind::Proj, {}, {}, {}, {}, std::move(m), {}, j);
  }
  static Term mu(std::string a, Type ty, Term body) {
    return make(Kind::Mu, std::move(a), {}, std::move(ty), {}, std::move(body), {}, 0);
  }
  static Term named(std::string a, Term m) {
    return make(Kind::Named, std::move(a), {}, {}, {}, std::move(m), {}, 0);
  }
  static Term mu_pair(std::string a1, Type t1, std::string a2, Type t2, Term body) {
    return make(Kind::MuPair, std::move(a1), std::move(a2), std::move(t1), std::move(t2),
                std::move(body), {}, 0);
  }
  static Term named_pair(std::string a1, std::string a2, Term m) {
    return make(Kind::NamedPair, std::move(a1), std::move(a2), {}, {}, std::move(m), {}, 0);
  }
  static Term destr(std::string nu, Term m) {
    return make(Kind::Destr, std::move(nu), {}, {}, {}, std::move(m), {}, 0);
  }
  static Term unfold(std::string nu, Term coalg) {
    return make(Kind::Unfold, std::move(nu), {}, {}, {}, std::move(coalg), {}, 0);
  }
  static Term hole() { return make(Kind::Hole, {}, {}, {}, {}, {}, {}, 0); }

  static Term inj(int j, Type b1, Type b2, Term m) {
    assert(j == 1 || j == 2);
    return make(Kind::Inj, {}, {}, std::move(b1), std::move(b2), std::move(m), {}, j);
  }
  static Term case_of(Term f1, Term f2) {
    return make(Kind::Case, {}, {}, {}, {}, std::move(f1), std::move(f2), 0);
  }
  static Term focus(Term f) { return make(Kind::Focus, {}, {}, {}, {}, std::move(f), {}, 0); }
  static Term unfocus(Term f) { return make(Kind::Unfocus, {}, {}, {}, {}, std::move(f), {}, 0); }
  static Term not_fn(Term f) { return make(Kind::NotF, {}, {}, {}, {}, std::move(f), {}, 0); }
  static Term head_s(std::string nu) { return make(Kind::HeadS, std::move(nu), {}, {}, {}, {}, {}, 0); }
  static Term tail_s(std::string nu) { return make(Kind::TailS, std::move(nu), {}, {}, {}, {}, {}, 0); }
  static Term numeral(int n) { return make(Kind::Numeral, {}, {}, {}, {}, {}, {}, n); }

  Kind kind() const { return p_->kind; }
  const std::string& name() const { return p_->name; }
  const std::string& name2() const { return p_->name2; }
  const Type& ty() const { return p_->ty; }
  const Type& ty2() const { return p_->ty2; }
  Term child_a() const { return Term(p_->a); }
  Term child_b() const { return Term(p_->b); }
  int idx() const { return p_->idx; }
  const SrcSpan& span() const { return p_->span; }

  Term with_span(SrcSpan s) const {
    auto n = std::make_shared<Node>(*p_);
    n->span = s;
    return Term(std::move(n));
  }

  bool same_node(const Term& o) const { return p_ == o.p_; }
};

// ---------------------------------------------------------------------------
// Free variables.  Term variables and control variables live in separate
// namespaces; Lam binds the former, Mu/MuPair the latter.

namespace detail {

inline void free_vars_rec(const Term& t, std::set<std::string>& bound, std::set<std::string>& out) {
  if (!t.valid()) return;
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case Term::Kind::Lam: {
      bool fresh = bound.insert(t.name()).second;
      free_vars_rec(t.child_a(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    default:
      free_vars_rec(t.child_a(), bound, out);
      free_vars_rec(t.child_b(), bound, out);
      return;
  }
}

inline void free_covars_rec(const Term& t, std::set<std::string>& bound,
                            std::set<std::string>& out) {
  if (!t.valid()) return;
  auto note = [&](const std::string& a) {
    if (!bound.count(a)) out.insert(a);
  };
  switch (t.kind()) {
    case Term::Kind::Named:
      note(t.name());
      free_covars_rec(t.child_a(), bound, out);
      return;
    case Term::Kind::NamedPair:
      note(t.name());
      note(t.name2());
      free_covars_rec(t.child_a(), bound, out);
      return;
    case Term::Kind::Mu: {
      bool fresh = bound.insert(t.name()).second;
      free_covars_rec(t.child_a(), bound, out);
      if (fresh) bound.erase(t.name());
      return;
    }
    case Term::Kind::MuPair: {
      bool f1 = bound.insert(t.name()).second;
      bool f2 = bound.insert(t.name2()).second;
      free_covars_rec(t.child_a(), bound, out);
      if (f2) bound.erase(t.name2());
      if (f1) bound.erase(t.name());
      return;
    }
    default:
      free_covars_rec(t.child_a(), bound, out);
      free_covars_rec(t.child_b(), bound, out);
      return;
  }
}

}  // namespace detail

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  detail::free_vars_rec(t, bound, out);
  return out;
}

inline std::set<std::string> free_covars(const Term& t) {
  std::set<std::string> bound, out;
  detail::free_covars_rec(t, bound, out);
  return out;
}

inline bool has_hole(const Term& t) {
  if (!t.valid()) return false;
  if (t.kind() == Term::Kind::Hole) return true;
  return has_hole(t.child_a()) || has_hole(t.child_b());
}

inline int hole_count(const Term& t) {
  if (!t.valid()) return 0;
  if (t.kind() == Term::Kind::Hole) return 1;
  return hole_count(t.child_a()) + hole_count(t.child_b());
}

// Deterministic fresh names: strip a trailing digit run from the stem, then
// try stem0, stem1, ... and return the first name not in `avoid`.
inline std::string fresh_name(const std::string& stem, const std::set<std::string>& avoid) {
  std::string base = stem.empty() ? std::string("x") : stem;
  size_t end = base.size();
  while (end > 0 && base[end - 1] >= '0' && base[end - 1] <= '9') --end;
  if (end == 0) end = base.size();  // all digits: keep as-is
  base = base.substr(0, end);
  for (int i = 0;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// Alpha-equivalence.  Binders are compared positionally; annotations must
// match structurally.  Sugar nodes compare by shape, so the relation is also
// usable on parsed, not-yet-elaborated terms.

namespace detail {

struct AlphaEnv {
  std::vector<std::pair<std::string, std::string>> tv, cv;  // left name -> right name

  bool var_eq(const std::string& l, const std::string& r) const {
    for (auto it = tv.rbegin(); it != tv.rend(); ++it) {
      if (it->first == l || it->second == r) return it->first == l && it->second == r;
    }
    return l == r;  // both free
  }
  bool covar_eq(const std::string& l, const std::string& r) const {
    for (auto it = cv.rbegin(); it != cv.rend(); ++it) {
      if (it->first == l || it->second == r) return it->first == l && it->second == r;
    }
    return l == r;
  }
};

inline bool alpha_rec(const Term& x, const Term& y, AlphaEnv& env) {
  if (!x.valid() || !y.valid()) return x.valid() == y.valid();
  if (x.kind() != y.kind()) return false;
  using K = Term::Kind;
  switch (x.kind()) {
    case K::Const:
      return x.name() == y.name();
    case K::Var:
      return env.var_eq(x.name(), y.name());
    case K::Unit:
    case K::Hole:
      return true;
    case K::Numeral:
      return x.idx() == y.idx();
    case K::Lam: {
      if (x.ty() != y.ty()) return false;
      env.tv.emplace_back(x.name(), y.name());
      bool ok = alpha_rec(x.child_a(), y.child_a(), env);
      env.tv.pop_back();
      return ok;
    }
    case K::Mu: {
      if (x.ty() != y.ty()) return false;
      env.cv.emplace_back(x.name(), y.name());
      bool ok = alpha_rec(x.child_a(), y.child_a(), env);
      env.cv.pop_back();
      return ok;
    }
    case K::MuPair: {
      if (x.ty() != y.ty() || x.ty2() != y.ty2()) return false;
      env.cv.emplace_back(x.name(), y.name());
      env.cv.emplace_back(x.name2(), y.name2());
      bool ok = alpha_rec(x.child_a(), y.child_a(), env);
      env.cv.pop_back();
      env.cv.pop_back();
      return ok;
    }
    case K::Named:
      return env.covar_eq(x.name(), y.name()) && alpha_rec(x.child_a(), y.child_a(), env);
    case K::NamedPair:
      return env.covar_eq(x.name(), y.name()) && env.covar_eq(x.name2(), y.name2()) &&
             alpha_rec(x.child_a(), y.child_a(), env);
    case K::Proj:
    case K::Inj:
      if (x.idx() != y.idx()) return false;
      if (x.kind() == K::Inj && (x.ty() != y.ty() || x.ty2() != y.ty2())) return false;
      return alpha_rec(x.child_a(), y.child_a(), env);
    case K::Destr:
    case K::Unfold:
    case K::HeadS:
    case K::TailS:
      return x.name() == y.name() && alpha_rec(x.child_a(), y.child_a(), env);
    default:
      return alpha_rec(x.child_a(), y.child_a(), env) && alpha_rec(x.child_b(), y.child_b(), env);
  }
}

}  // namespace detail

inline bool alpha_eq(const Term& x, const Term& y) {
  detail::AlphaEnv env;
  return detail::alpha_rec(x, y, env);
}

// Canonical key: prefix encoding with de Bruijn levels for bound names.
// Injective on alpha-classes, used for visited sets and joins.
namespace detail {

inline void type_key(const Type& t, std::string& out) {
  if (!t.valid()) {
    out += '?';
    return;
  }
  switch (t.kind()) {
    case Type::Kind::Const: out += 'c'; out += t.name(); out += ';'; return;
    case Type::Kind::NuRef: out += 'n'; out += t.name(); out += ';'; return;
    case Type::Kind::Top: out += 'T'; return;
    case Type::Kind::Bot: out += 'B'; return;
    case Type::Kind::Arrow: out += '>'; type_key(t.left(), out); type_key(t.right(), out); return;
    case Type::Kind::Prod: out += '*'; type_key(t.left(), out); type_key(t.right(), out); return;
    case Type::Kind::Disj: out += '|'; type_key(t.left(), out); type_key(t.right(), out); return;
  }
}

struct KeyEnv {
  std::vector<std::string> tv, cv;
  void var_key(const std::string& n, std::string& out) const {
    for (size_t i = tv.size(); i-- > 0;) {
      if (tv[i] == n) {
        out += '#';
        out += std::to_string(tv.size() - 1 - i);
        return;
      }
    }
    out += '!';
    out += n;
    out += ';';
  }
  void covar_key(const std::string& n, std::string& out) const {
    for (size_t i = cv.size(); i-- > 0;) {
      if (cv[i] == n) {
        out += '@';
        out += std::to_string(cv.size() - 1 - i);
        return;
      }
    }
    out += '$';
    out += n;
    out += ';';
  }
};

inline void term_key_rec(const Term& t, KeyEnv& env, std::string& out) {
  if (!t.valid()) {
    out += '0';
    return;
  }
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Const: out += 'C'; out += t.name(); out += ';'; return;
    case K::Var: out += 'V'; env.var_key(t.name(), out); return;
    case K::Unit: out += 'U'; return;
    case K::Hole: out += 'H'; return;
    case K::Numeral: out += 'N'; out += std::to_string(t.idx()); out += ';'; return;
    case K::Lam:
      out += 'L';
      type_key(t.ty(), out);
      env.tv.push_back(t.name());
      term_key_rec(t.child_a(), env, out);
      env.tv.pop_back();
      return;
    case K::App:
      out += 'A';
      term_key_rec(t.child_a(), env, out);
      term_key_rec(t.child_b(), env, out);
      return;
    case K::Pair:
      out += 'P';
      term_key_rec(t.child_a(), env, out);
      term_key_rec(t.child_b(), env, out);
      return;
    case K::Proj:
      out += 'p';
      out += char('0' + t.idx());
      term_key_rec(t.child_a(), env, out);
      return;
    case K::Mu:
      out += 'M';
      type_key(t.ty(), out);
      env.cv.push_back(t.name());
      term_key_rec(t.child_a(), env, out);
      env.cv.pop_back();
      return;
    case K::Named:
      out += 'n';
      env.covar_key(t.name(), out);
      term_key_rec(t.child_a(), env, out);
      return;
    case K::MuPair:
      out += 'W';
      type_key(t.ty(), out);
      type_key(t.ty2(), out);
      env.cv.push_back(t.name());
      env.cv.push_back(t.name2());
      term_key_rec(t.child_a(), env, out);
      env.cv.pop_back();
      env.cv.pop_back();
      return;
    case K::NamedPair:
      out += 'w';
      env.covar_key(t.name(), out);
      env.covar_key(t.name2(), out);
      term_key_rec(t.child_a(), env, out);
      return;
    case K::Destr:
      out += 'D';
      out += t.name();
      out += ';';
      term_key_rec(t.child_a(), env, out);
      return;
    case K::Unfold:
      out += 'F';
      out += t.name();
      out += ';';
      term_key_rec(t.child_a(), env, out);
      return;
    case K::Inj:
      out += 'I';
      out += char('0' + t.idx());
      type_key(t.ty(), out);
      type_key(t.ty2(), out);
      term_key_rec(t.child_a(), env, out);
      return;
    case K::Case:
      out += 'K';
      term_key_rec(t.child_a(), env, out);
      term_key_rec(t.child_b(), env, out);
      return;
    case K::Focus:
      out += 'f';
      term_key_rec(t.child_a(), env, out);
      return;
    case K::Unfocus:
      out += 'u';
      term_key_rec(t.child_a(), env, out);
      return;
    case K::NotF:
      out += '~';
      term_key_rec(t.child_a(), env, out);
      return;
    case K::HeadS:
      out += 'h';
      out += t.name();
      out += ';';
      return;
    case K::TailS:
      out += 't';
      out += t.name();
      out += ';';
      return;
  }
}

}  // namespace detail

inline std::string alpha_key(const Term& t) {
  detail::KeyEnv env;
  std::string out;
  detail::term_key_rec(t, env, out);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution

namespace detail {

struct TermSubst {
  const std::string& x;
  const Term& repl;
  std::set<std::string> repl_fv;
  std::set<std::string> repl_fcv;

  Term go(const Term& t) {
    if (!t.valid()) return t;
    using K = Term::Kind;
    switch (t.kind()) {
      case K::Var:
        return t.name() == x ? repl : t;
      case K::Const:
      case K::Unit:
      case K::Hole:
      case K::Numeral:
      case K::HeadS:
      case K::TailS:
        return t;
      case K::Lam: {
        if (t.name() == x) return t;
        std::string y = t.name();
        Term body = t.child_a();
        if (repl_fv.count(y)) {
          std::set<std::string> avoid = repl_fv;
          for (auto& v : free_vars(body)) avoid.insert(v);
          avoid.insert(x);
          std::string y2 = fresh_name(y, avoid);
          TermSubst rename{y, Term::var(y2), {y2}, {}};
          body = rename.go(body);
          y = y2;
        }
        return Term::lam(y, t.ty(), go(body));
      }
      case K::Mu: {
        std::string a = t.name();
        Term body = t.child_a();
        if (repl_fcv.count(a)) {
          std::set<std::string> avoid = repl_fcv;
          for (auto& v : free_covars(body)) avoid.insert(v);
          std::string a2 = fresh_name(a, avoid);
          body = rename_covar_in(body, a, a2);
          a = a2;
        }
        return Term::mu(a, t.ty(), go(body));
      }
      case K::MuPair: {
        std::string a1 = t.name(), a2 = t.name2();
        Term body = t.child_a();
        std::set<std::string> avoid = repl_fcv;
        for (auto& v : free_covars(body)) avoid.insert(v);
        avoid.insert(a1);
        avoid.insert(a2);
        if (repl_fcv.count(a1)) {
          std::string n1 = fresh_name(a1, avoid);
          avoid.insert(n1);
          body = rename_covar_in(body, a1, n1);
          a1 = n1;
        }
        if (repl_fcv.count(a2)) {
          std::string n2 = fresh_name(a2, avoid);
          body = rename_covar_in(body, a2, n2);
          a2 = n2;
        }
        return Term::mu_pair(a1, t.ty(), a2, t.ty2(), go(body));
      }
      case K::App:
        return Term::app(go(t.child_a()), go(t.child_b()));
      case K::Pair:
        return Term::pair(go(t.child_a()), go(t.child_b()));
      case K::Proj:
        return Term::proj(t.idx(), go(t.child_a()));
      case K::Named:
        return Term::named(t.name(), go(t.child_a()));
      case K::NamedPair:
        return Term::named_pair(t.name(), t.name2(), go(t.child_a()));
      case K::Destr:
        return Term::destr(t.name(), go(t.child_a()));
      case K::Unfold:
        return Term::unfold(t.name(), go(t.child_a()));
      case K::Inj:
        return Term::inj(t.idx(), t.ty(), t.ty2(), go(t.child_a()));
      case K::Case:
        return Term::case_of(go(t.child_a()), go(t.child_b()));
      case K::Focus:
        return Term::focus(go(t.child_a()));
      case K::Unfocus:
        return Term::unfocus(go(t.child_a()));
      case K::NotF:
        return Term::not_fn(go(t.child_a()));
    }
    return t;
  }

  static Term rename_covar_in(const Term& t, const std::string& from, const std::string& to);
};

struct CovarRename {
  const std::string& from;
  const std::string& to;

  Term go(const Term& t) {
    if (!t.valid()) return t;
    using K = Term::Kind;
    switch (t.kind()) {
      case K::Named: {
        std::string a = t.name() == from ? to : t.name();
        return Term::named(a, go(t.child_a()));
      }
      case K::NamedPair: {
        std::string a1 = t.name() == from ? to : t.name();
        std::string a2 = t.name2() == from ? to : t.name2();
        return Term::named_pair(a1, a2, go(t.child_a()));
      }
      case K::Mu: {
        if (t.name() == from) return t;  // shadowed
        std::string b = t.name();
        Term body = t.child_a();
        if (b == to) {  // would capture: rename binder first
          std::set<std::string> avoid = free_covars(body);
          avoid.insert(to);
          avoid.insert(from);
          std::string b2 = fresh_name(b, avoid);
          CovarRename r{b, b2};
          body = r.go(body);
          b = b2;
        }
        return Term::mu(b, t.ty(), go(body));
      }
      case K::MuPair: {
        if (t.name() == from || t.name2() == from) return t;
        std::string b1 = t.name(), b2 = t.name2();
        Term body = t.child_a();
        std::set<std::string> avoid = free_covars(body);
        avoid.insert(to);
        avoid.insert(from);
        avoid.insert(b1);
        avoid.insert(b2);
        if (b1 == to) {
          std::string n = fresh_name(b1, avoid);
          avoid.insert(n);
          CovarRename r{b1, n};
          body = r.go(body);
          b1 = n;
        }
        if (b2 == to) {
          std::string n = fresh_name(b2, avoid);
          CovarRename r{b2, n};
          body = r.go(body);
          b2 = n;
        }
        return Term::mu_pair(b1, t.ty(), b2, t.ty2(), go(body));
      }
      case K::Lam:
        return Term::lam(t.name(), t.ty(), go(t.child_a()));
      case K::App:
        return Term::app(go(t.child_a()), go(t.child_b()));
      case K::Pair:
        return Term::pair(go(t.child_a()), go(t.child_b()));
      case K::Proj:
        return Term::proj(t.idx(), go(t.child_a()));
      case K::Destr:
        return Term::destr(t.name(), go(t.child_a()));
      case K::Unfold:
        return Term::unfold(t.name(), go(t.child_a()));
      case K::Inj:
        return Term::inj(t.idx(), t.ty(), t.ty2(), go(t.child_a()));
      case K::Case:
        return Term::case_of(go(t.child_a()), go(t.child_b()));
      case K::Focus:
        return Term::focus(go(t.child_a()));
      case K::Unfocus:
        return Term::unfocus(go(t.child_a()));
      case K::NotF:
        return Term::not_fn(go(t.child_a()));
      default:
        return t;
    }
  }
};

inline Term TermSubst::rename_covar_in(const Term& t, const std::string& from,
                                       const std::string& to) {
  CovarRename r{from, to};
  return r.go(t);
}

}  // namespace detail

// M[x := N], capture-avoiding in both namespaces (a lambda binder is renamed
// away from N's free term variables, a mu binder from N's free control
// variables).
inline Term subst_term(const Term& m, const std::string& x, const Term& n) {
  detail::TermSubst s{x, n, free_vars(n), free_covars(n)};
  return s.go(m);
}

// M[a := b] on control variables.
inline Term rename_covar(const Term& m, const std::string& a, const std::string& b) {
  detail::CovarRename r{a, b};
  return r.go(m);
}

// ---------------------------------------------------------------------------
// Structural substitution [a* := C]
//
// C is a term with exactly one hole; hole_ty is the type of the values the
// context consumes (the type of channel a).  The recursion replaces
//   a M          by  C[ M' ]
//   [a1,a2] M    by  C[ mu a:hole_ty. [a1,a2] M' ]   when a is a1 or a2
// with M' the recursive image of M.  The mu rebinds a on purpose: the pair
// still addresses channel a at that position, now rerouted through C.

struct ControlContext {
  Term term;  // contains exactly one Hole
  Type hole_ty;
};

namespace detail {

inline Term plug(const Term& ctx, const Term& filling) {
  if (!ctx.valid()) return ctx;
  if (ctx.kind() == Term::Kind::Hole) return filling;
  using K = Term::Kind;
  switch (ctx.kind()) {
    case K::Lam:
      return Term::lam(ctx.name(), ctx.ty(), plug(ctx.child_a(), filling));
    case K::App:
      return Term::app(plug(ctx.child_a(), filling), plug(ctx.child_b(), filling));
    case K::Pair:
      return Term::pair(plug(ctx.child_a(), filling), plug(ctx.child_b(), filling));
    case K::Proj:
      return Term::proj(ctx.idx(), plug(ctx.child_a(), filling));
    case K::Mu:
      return Term::mu(ctx.name(), ctx.ty(), plug(ctx.child_a(), filling));
    case K::Named:
      return Term::named(ctx.name(), plug(ctx.child_a(), filling));
    case K::MuPair:
      return Term::mu_pair(ctx.name(), ctx.ty(), ctx.name2(), ctx.ty2(),
                           plug(ctx.child_a(), filling));
    case K::NamedPair:
      return Term::named_pair(ctx.name(), ctx.name2(), plug(ctx.child_a(), filling));
    case K::Destr:
      return Term::destr(ctx.name(), plug(ctx.child_a(), filling));
    case K::Unfold:
      return Term::unfold(ctx.name(), plug(ctx.child_a(), filling));
    case K::Inj:
      return Term::inj(ctx.idx(), ctx.ty(), ctx.ty2(), plug(ctx.child_a(), filling));
    case K::Case:
      return Term::case_of(plug(ctx.child_a(), filling), plug(ctx.child_b(), filling));
    case K::Focus:
      return Term::focus(plug(ctx.child_a(), filling));
    case K::Unfocus:
      return Term::unfocus(plug(ctx.child_a(), filling));
    case K::NotF:
      return Term::not_fn(plug(ctx.child_a(), filling));
    default:
      return ctx;
  }
}

struct StructSubst {
  const std::string& a;
  const ControlContext& ctx;
  std::set<std::string> ctx_fv;
  std::set<std::string> ctx_fcv;

  Term go(const Term& t) {
    if (!t.valid()) return t;
    using K = Term::Kind;
    switch (t.kind()) {
      case K::Named:
        if (t.name() == a) return plug(ctx.term, go(t.child_a()));
        return Term::named(t.name(), go(t.child_a()));
      case K::NamedPair:
        if (t.name() == a || t.name2() == a) {
          Term inner = Term::named_pair(t.name(), t.name2(), go(t.child_a()));
          return plug(ctx.term, Term::mu(a, ctx.hole_ty, inner));
        }
        return Term::named_pair(t.name(), t.name2(), go(t.child_a()));
      case K::Mu: {
        if (t.name() == a) return t;  // shadowed
        std::string b = t.name();
        Term body = t.child_a();
        if (ctx_fcv.count(b)) {
          std::set<std::string> avoid = ctx_fcv;
          for (auto& v : free_covars(body)) avoid.insert(v);
          avoid.insert(a);
          std::string b2 = fresh_name(b, avoid);
          body = rename_covar(body, b, b2);
          b = b2;
        }
        return Term::mu(b, t.ty(), go(body));
      }
      case K::MuPair: {
        if (t.name() == a || t.name2() == a) return t;
        std::string b1 = t.name(), b2 = t.name2();
        Term body = t.child_a();
        std::set<std::string> avoid = ctx_fcv;
        for (auto& v : free_covars(body)) avoid.insert(v);
        avoid.insert(a);
        avoid.insert(b1);
        avoid.insert(b2);
        if (ctx_fcv.count(b1)) {
          std::string n = fresh_name(b1, avoid);
          avoid.insert(n);
          body = rename_covar(body, b1, n);
          b1 = n;
        }
        if (ctx_fcv.count(b2)) {
          std::string n = fresh_name(b2, avoid);
          body = rename_covar(body, b2, n);
          b2 = n;
        }
        return Term::mu_pair(b1, t.ty(), b2, t.ty2(), go(body));
      }
      case K::Lam: {
        std::string y = t.name();
        Term body = t.child_a();
        if (ctx_fv.count(y)) {
          std::set<std::string> avoid = ctx_fv;
          for (auto& v : free_vars(body)) avoid.insert(v);
          std::string y2 = fresh_name(y, avoid);
          body = subst_term(body, y, Term::var(y2));
          y = y2;
        }
        return Term::lam(y, t.ty(), go(body));
      }
      case K::App:
        return Term::app(go(t.child_a()), go(t.child_b()));
      case K::Pair:
        return Term::pair(go(t.child_a()), go(t.child_b()));
      case K::Proj:
        return Term::proj(t.idx(), go(t.child_a()));
      case K::Destr:
        return Term::destr(t.name(), go(t.child_a()));
      case K::Unfold:
        return Term::unfold(t.name(), go(t.child_a()));
      case K::Inj:
        return Term::inj(t.idx(), t.ty(), t.ty2(), go(t.child_a()));
      case K::Case:
        return Term::case_of(go(t.child_a()), go(t.child_b()));
      case K::Focus:
        return Term::focus(go(t.child_a()));
      case K::Unfocus:
        return Term::unfocus(go(t.child_a()));
      case K::NotF:
        return Term::not_fn(go(t.child_a()));
      default:
        return t;
    }
  }
};

}  // namespace detail

inline Term struct_subst(const Term& m, const std::string& a, const ControlContext& ctx) {
  assert(hole_count(ctx.term) == 1);
  // A bare renaming context b(hole) degenerates to plain renaming; keeping
  // that case exact means the result is alpha-equal to rename_covar.
  if (ctx.term.kind() == Term::Kind::Named &&
      ctx.term.child_a().kind() == Term::Kind::Hole) {
    return rename_covar(m, a, ctx.term.name());
  }
  std::set<std::string> fcv = free_covars(ctx.term);
  assert(!fcv.count(a) && "struct_subst: a must not occur free in C; rename the binder first");
  detail::StructSubst s{a, ctx, free_vars(ctx.term), std::move(fcv)};
  return s.go(m);
}

}  // namespace mucalc
