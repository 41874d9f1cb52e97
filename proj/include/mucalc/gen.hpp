#pragma once

// Enumeration and random sampling of well-typed terms, used to instantiate
// rewrite axioms and to probe functions for focality.  Generation is
// deterministic for a fixed seed.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mucalc/typecheck.hpp"

namespace mucalc {

// A small default signature shared by the property tests.
inline void default_signature(DeclTable& table) {
  auto add = [&](const char* n, Type t) {
    if (!table.constant(n) && !table.def(n) && !table.alias(n) && !table.codata(n))
      table.declare_const(n, std::move(t));
  };
  Type p = Type::constant("P"), q = Type::constant("Q");
  add("p0", p);
  add("f1", Type::arrow(p, p));
  add("g1", Type::arrow(Type::top(), p));
  add("q0", q);
  add("h1", Type::arrow(p, q));
}

class Generator {
public:
  Generator(const Env& env, uint64_t seed) : env_(env), rng_(seed) {
    collect(Type::top());
    collect(Type::bot());
    for (auto& [_, t] : env.vars) collect(t);
    for (auto& [_, t] : env.covars) collect(t);
    if (env.decls)
      for (auto& [_, t] : env.decls->constants()) collect(t);
  }

  // All well-typed terms of the given type up to a node budget (then capped).
  std::vector<Term> enumerate(const Type& ty, int budget = 7, size_t cap = 2000) {
    std::vector<Type> local = universe_;
    collect_into(ty, local);
    memo_.clear();
    std::vector<Term> out;
    std::set<std::string> seen;
    for (int size = 1; size <= budget && out.size() < cap; ++size) {
      for (const Term& t : enum_memo(env_, ty, size, local)) {
        if (out.size() >= cap) break;
        if (seen.insert(alpha_key(t)).second) out.push_back(t);
      }
    }
    memo_.clear();
    return out;
  }

  std::optional<Term> random_term(const Type& ty, int budget = 7, int tries = 64) {
    std::vector<Type> local = universe_;
    collect_into(ty, local);
    for (int i = 0; i < tries; ++i)
      if (auto t = rand_rec(env_, ty, budget, local)) return t;
    return std::nullopt;
  }

  // Enumerated terms first, then random ones until `want` distinct terms are
  // found (or generation stops making progress).
  std::vector<Term> sample(const Type& ty, size_t want, int budget = 7,
                           size_t enum_cap = 2000) {
    size_t base = std::max<size_t>(want / 2, 1);
    std::vector<Term> out = enumerate(ty, budget, std::min(enum_cap, base));
    std::set<std::string> seen;
    for (auto& t : out) seen.insert(alpha_key(t));
    int stall = 0;
    while (out.size() < want && stall < 200) {
      auto t = random_term(ty, budget + 3);
      if (t && seen.insert(alpha_key(*t)).second) {
        out.push_back(*t);
        stall = 0;
      } else {
        ++stall;
      }
    }
    return out;
  }

private:
  Env env_;
  std::vector<Type> universe_;
  std::mt19937_64 rng_;
  std::map<std::string, std::vector<Term>> memo_;
  static constexpr size_t kEntryCap = 512;

  static void collect_into(const Type& t, std::vector<Type>& acc) {
    if (std::find(acc.begin(), acc.end(), t) == acc.end()) acc.push_back(t);
    switch (t.kind()) {
      case Type::Kind::Arrow:
      case Type::Kind::Prod:
      case Type::Kind::Disj:
        collect_into(t.left(), acc);
        collect_into(t.right(), acc);
        break;
      default:
        break;
    }
  }
  void collect(const Type& t) { collect_into(t, universe_); }

  static std::string pick_var(const Env& env, const char* stem) {
    std::set<std::string> used;
    for (auto& [n, _] : env.vars) used.insert(n);
    for (auto& [n, _] : env.covars) used.insert(n);
    return fresh_name(stem, used);
  }

  // ---- exhaustive enumeration by exact node count ------------------------
  //
  // Memoised on (type, size, context); function positions of applications are
  // drawn only from types present in the universe, which keeps the key space
  // finite (the universe is closed under subexpressions).

  static std::string env_key(const Env& env) {
    std::string k;
    for (auto& [n, t] : env.vars) {
      k += n;
      k += ':';
      k += print_type(t);
      k += ';';
    }
    k += '|';
    for (auto& [n, t] : env.covars) {
      k += n;
      k += ':';
      k += print_type(t);
      k += ';';
    }
    return k;
  }

  const std::vector<Term>& enum_memo(const Env& env, const Type& ty, int size,
                                     const std::vector<Type>& uni) {
    std::string key = print_type(ty);
    key += '#';
    key += std::to_string(size);
    key += '#';
    key += env_key(env);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Term> out;
    build_size(env, ty, size, uni, out);
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  void build_size(const Env& env, const Type& ty, int size,
                  const std::vector<Type>& uni, std::vector<Term>& out) {
    if (size <= 0) return;
    if (size == 1) {
      for (auto& [n, t] : env.vars)
        if (t == ty) out.push_back(Term::var(n));
      if (env.decls)
        for (auto& [n, t] : env.decls->constants())
          if (t == ty) out.push_back(Term::constant(n));
      if (ty.kind() == Type::Kind::Top) out.push_back(Term::unit());
      return;
    }
    auto full = [&] { return out.size() >= kEntryCap; };
    // one-child productions, child size - 1
    if (ty.kind() == Type::Kind::Arrow && ty.left().kind() != Type::Kind::Disj) {
      std::string x = pick_var(env, "x");
      for (const Term& b :
           enum_memo(env.with_var(x, ty.left()), ty.right(), size - 1, uni)) {
        if (full()) return;
        out.push_back(Term::lam(x, ty.left(), b));
      }
    }
    {
      std::string a = pick_var(env, "a");
      for (const Term& b :
           enum_memo(env.with_covar(a, ty), Type::bot(), size - 1, uni)) {
        if (full()) return;
        out.push_back(Term::mu(a, ty, b));
      }
    }
    if (ty.kind() == Type::Kind::Bot) {
      for (auto& [a, t] : env.covars)
        for (const Term& m : enum_memo(env, t, size - 1, uni)) {
          if (full()) return;
          out.push_back(Term::named(a, m));
        }
      for (auto& [a1, t1] : env.covars)
        for (auto& [a2, t2] : env.covars)
          for (const Term& m :
               enum_memo(env, Type::disj(t1, t2), size - 1, uni)) {
            if (full()) return;
            out.push_back(Term::named_pair(a1, a2, m));
          }
    }
    if (ty.kind() == Type::Kind::Disj) {
      std::string a1 = pick_var(env, "a");
      Env e1 = env.with_covar(a1, ty.left());
      std::string a2 = pick_var(e1, "a");
      for (const Term& b :
           enum_memo(e1.with_covar(a2, ty.right()), Type::bot(), size - 1, uni)) {
        if (full()) return;
        out.push_back(Term::mu_pair(a1, ty.left(), a2, ty.right(), b));
      }
    }
    for (const Type& p : uni) {
      if (p.kind() != Type::Kind::Prod) continue;
      for (int j = 1; j <= 2; ++j)
        if ((j == 1 ? p.left() : p.right()) == ty)
          for (const Term& m : enum_memo(env, p, size - 1, uni)) {
            if (full()) return;
            out.push_back(Term::proj(j, m));
          }
    }
    // two-child productions
    if (ty.kind() == Type::Kind::Prod) {
      for (int ls = 1; ls <= size - 2; ++ls) {
        const auto& lefts = enum_memo(env, ty.left(), ls, uni);
        if (lefts.empty()) continue;
        const auto& rights = enum_memo(env, ty.right(), size - 1 - ls, uni);
        for (const Term& l : lefts)
          for (const Term& r : rights) {
            if (full()) return;
            out.push_back(Term::pair(l, r));
          }
      }
    }
    for (const Type& fty : uni) {
      if (fty.kind() != Type::Kind::Arrow || !(fty.right() == ty)) continue;
      for (int fs = 1; fs <= size - 2; ++fs) {
        const auto& heads = enum_memo(env, fty, fs, uni);
        if (heads.empty()) continue;
        const auto& args = enum_memo(env, fty.left(), size - 1 - fs, uni);
        for (const Term& f : heads)
          for (const Term& n : args) {
            if (full()) return;
            out.push_back(Term::app(f, n));
          }
      }
    }
  }

  // ---- random generation -------------------------------------------------

  std::optional<Term> rand_rec(const Env& env, const Type& ty, int budget,
                               const std::vector<Type>& uni) {
    if (budget <= 0) return std::nullopt;
    // leaf choices
    std::vector<Term> leaves;
    for (auto& [n, t] : env.vars)
      if (t == ty) leaves.push_back(Term::var(n));
    if (env.decls)
      for (auto& [n, t] : env.decls->constants())
        if (t == ty) leaves.push_back(Term::constant(n));
    if (ty.kind() == Type::Kind::Top) leaves.push_back(Term::unit());
    // production tags
    std::vector<int> prods;
    if (budget >= 2) {
      if (ty.kind() == Type::Kind::Arrow && ty.left().kind() != Type::Kind::Disj)
        prods.push_back(0);  // lam
      prods.push_back(1);    // mu
      if (ty.kind() == Type::Kind::Bot && !env.covars.empty()) {
        prods.push_back(2);  // named
        prods.push_back(5);  // named pair
      }
      if (ty.kind() == Type::Kind::Disj) prods.push_back(6);  // mu pair
      if (ty.kind() == Type::Kind::Prod && budget >= 3) prods.push_back(3);  // pair
      if (budget >= 3) prods.push_back(4);  // app
      prods.push_back(7);                   // proj
    }
    // prefer structure over leaves when budget is rich
    bool try_leaf_first = !leaves.empty() && (prods.empty() || (rng_() % 3 == 0));
    if (try_leaf_first) return leaves[rng_() % leaves.size()];
    // one random production per node: failures stay cheap instead of
    // cascading into an exhaustive search of an (often empty) space
    if (prods.size() > 1) {
      std::swap(prods[0], prods[rng_() % prods.size()]);
      prods.resize(1);
    }
    for (int p : prods) {
      switch (p) {
        case 0: {
          std::string x = pick_var(env, "x");
          if (auto b = rand_rec(env.with_var(x, ty.left()), ty.right(), budget - 1, uni))
            return Term::lam(x, ty.left(), *b);
          break;
        }
        case 1: {
          std::string a = pick_var(env, "a");
          if (auto b = rand_rec(env.with_covar(a, ty), Type::bot(), budget - 1, uni))
            return Term::mu(a, ty, *b);
          break;
        }
        case 2: {
          auto& [a, t] = env.covars[rng_() % env.covars.size()];
          if (auto m = rand_rec(env, t, budget - 1, uni)) return Term::named(a, *m);
          break;
        }
        case 5: {
          auto& [a1, t1] = env.covars[rng_() % env.covars.size()];
          auto& [a2, t2] = env.covars[rng_() % env.covars.size()];
          if (auto m = rand_rec(env, Type::disj(t1, t2), budget - 1, uni))
            return Term::named_pair(a1, a2, *m);
          break;
        }
        case 6: {
          std::string a1 = pick_var(env, "a");
          Env e1 = env.with_covar(a1, ty.left());
          std::string a2 = pick_var(e1, "a");
          if (auto b = rand_rec(e1.with_covar(a2, ty.right()), Type::bot(), budget - 1, uni))
            return Term::mu_pair(a1, ty.left(), a2, ty.right(), *b);
          break;
        }
        case 3: {
          if (auto l = rand_rec(env, ty.left(), (budget - 1) / 2 + 1, uni))
            if (auto r = rand_rec(env, ty.right(), budget - 1 - 1, uni))
              return Term::pair(*l, *r);
          break;
        }
        case 4: {
          std::vector<const Type*> arrows;
          for (const Type& u : uni)
            if (u.kind() == Type::Kind::Arrow && u.right() == ty)
              arrows.push_back(&u);
          if (arrows.empty()) break;
          const Type& fty = *arrows[rng_() % arrows.size()];
          if (auto f = rand_rec(env, fty, budget - 2, uni))
            if (auto n = rand_rec(env, fty.left(), budget - 2, uni))
              return Term::app(*f, *n);
          break;
        }
        case 7: {
          std::vector<Type> prods_uni;
          for (const Type& pt : uni)
            if (pt.kind() == Type::Kind::Prod && (pt.left() == ty || pt.right() == ty))
              prods_uni.push_back(pt);
          if (prods_uni.empty()) break;
          const Type& pt = prods_uni[rng_() % prods_uni.size()];
          int j = pt.left() == ty ? 1 : 2;
          if (pt.left() == ty && pt.right() == ty) j = 1 + static_cast<int>(rng_() % 2);
          if (auto m = rand_rec(env, pt, budget - 1, uni)) return Term::proj(j, *m);
          break;
        }
      }
    }
    if (!leaves.empty()) return leaves[rng_() % leaves.size()];
    return std::nullopt;
  }
};

}  // namespace mucalc
