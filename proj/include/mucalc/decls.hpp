#pragma once

// Declaration table: type aliases, coinductive types, constant signatures,
// and transparent definitions.  Top-level names share one namespace and may
// not shadow each other.

#include <map>
#include <stdexcept>
#include <string>

#include "mucalc/functor.hpp"
#include "mucalc/syntax.hpp"

namespace mucalc {

struct DeclError : std::runtime_error {
  explicit DeclError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CodataSig {
  std::string name;
  FunctorExpr body;
};

class DeclTable {
  std::map<std::string, Type> aliases_;
  std::map<std::string, CodataSig> codata_;
  std::map<std::string, Type> consts_;

public:
  struct Def {
    Type ty;
    Term body;  // may still contain sugar; inlined at parse time
  };

private:
  std::map<std::string, Def> defs_;

  void claim(const std::string& name) const {
    if (aliases_.count(name) || codata_.count(name) || consts_.count(name) || defs_.count(name))
      throw DeclError("duplicate top-level name: " + name);
  }

public:
  void declare_alias(const std::string& name, Type t) {
    claim(name);
    aliases_.emplace(name, std::move(t));
  }

  void declare_codata(const std::string& name, FunctorExpr body) {
    claim(name);
    if (!body.is_full())
      throw DeclError("coinductive body for " + name +
                      ": the type variable may sit under a disjunction only behind a double "
                      "negation");
    codata_.emplace(name, CodataSig{name, std::move(body)});
  }

  void declare_const(const std::string& name, Type t) {
    claim(name);
    consts_.emplace(name, std::move(t));
  }

  void declare_def(const std::string& name, Type t, Term body) {
    claim(name);
    defs_.emplace(name, Def{std::move(t), std::move(body)});
  }

  const Type* alias(const std::string& name) const {
    auto it = aliases_.find(name);
    return it == aliases_.end() ? nullptr : &it->second;
  }
  const CodataSig* codata(const std::string& name) const {
    auto it = codata_.find(name);
    return it == codata_.end() ? nullptr : &it->second;
  }
  const Type* constant(const std::string& name) const {
    auto it = consts_.find(name);
    return it == consts_.end() ? nullptr : &it->second;
  }
  const Def* def(const std::string& name) const {
    auto it = defs_.find(name);
    return it == defs_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, Type>& constants() const { return consts_; }
  const std::map<std::string, CodataSig>& codata_all() const { return codata_; }

  // G_N[A/alpha] — the one-step unfolding of a declared nu-type.
  Type unfold_body(const std::string& nu_name, const Type& at) const {
    const CodataSig* sig = codata(nu_name);
    if (!sig) throw DeclError("unknown coinductive type: " + nu_name);
    return sig->body.instantiate(at);
  }
};

}  // namespace mucalc
