#pragma once

// Minimal-parenthesis printers for types and terms.  Output re-parses to an
// alpha-equal term under the same declaration table.

#include <string>

#include "mucalc/syntax.hpp"

namespace mucalc {

namespace detail {

// Type precedence: -> (1) < \/ (2) < * (3) < ~ (4) < atom (5), arrows and
// the infix connectives associate to the right.
inline void print_type_rec(const Type& t, int min_prec, std::string& out) {
  if (!t.valid()) {
    out += "?";
    return;
  }
  auto paren = [&](int prec, auto&& body) {
    if (prec < min_prec) {
      out += '(';
      body();
      out += ')';
    } else {
      body();
    }
  };
  switch (t.kind()) {
    case Type::Kind::Const:
    case Type::Kind::NuRef:
      out += t.name();
      return;
    case Type::Kind::Top:
      out += "Top";
      return;
    case Type::Kind::Bot:
      out += "Bot";
      return;
    case Type::Kind::Arrow:
      if (t.is_neg()) {
        paren(4, [&] {
          out += '~';
          print_type_rec(t.left(), 4, out);
        });
      } else {
        paren(1, [&] {
          print_type_rec(t.left(), 2, out);
          out += " -> ";
          print_type_rec(t.right(), 1, out);
        });
      }
      return;
    case Type::Kind::Disj:
      paren(2, [&] {
        print_type_rec(t.left(), 3, out);
        out += " \\/ ";
        print_type_rec(t.right(), 2, out);
      });
      return;
    case Type::Kind::Prod:
      paren(3, [&] {
        print_type_rec(t.left(), 4, out);
        out += " * ";
        print_type_rec(t.right(), 3, out);
      });
      return;
  }
}

// Term precedence: binder forms (0) reach right as far as possible; juxta-
// position and the prefix operators sit at application level (10); the rest
// are atoms (11).
inline void print_term_rec(const Term& t, int min_prec, std::string& out) {
  if (!t.valid()) {
    out += "?";
    return;
  }
  auto paren = [&](int prec, auto&& body) {
    if (prec < min_prec) {
      out += '(';
      body();
      out += ')';
    } else {
      body();
    }
  };
  auto ty = [&](const Type& tp) { print_type_rec(tp, 0, out); };
  using K = Term::Kind;
  switch (t.kind()) {
    case K::Const:
    case K::Var:
      out += t.name();
      return;
    case K::Unit:
      out += "unit";
      return;
    case K::Hole:
      out += "_";
      return;
    case K::Numeral:
      out += '#';
      out += std::to_string(t.idx());
      return;
    case K::Lam:
      paren(0, [&] {
        out += '\\';
        out += t.name();
        out += ':';
        ty(t.ty());
        out += ". ";
        print_term_rec(t.child_a(), 0, out);
      });
      return;
    case K::Mu:
      paren(0, [&] {
        out += "mu ";
        out += t.name();
        out += ':';
        ty(t.ty());
        out += ". ";
        print_term_rec(t.child_a(), 0, out);
      });
      return;
    case K::MuPair:
      paren(0, [&] {
        out += "mu(";
        out += t.name();
        out += ':';
        ty(t.ty());
        out += ", ";
        out += t.name2();
        out += ':';
        ty(t.ty2());
        out += "). ";
        print_term_rec(t.child_a(), 0, out);
      });
      return;
    case K::Named:
      paren(0, [&] {
        out += '[';
        out += t.name();
        out += "] ";
        print_term_rec(t.child_a(), 0, out);
      });
      return;
    case K::NamedPair:
      paren(0, [&] {
        out += '[';
        out += t.name();
        out += ", ";
        out += t.name2();
        out += "] ";
        print_term_rec(t.child_a(), 0, out);
      });
      return;
    case K::App:
      paren(10, [&] {
        print_term_rec(t.child_a(), 10, out);
        out += ' ';
        print_term_rec(t.child_b(), 11, out);
      });
      return;
    case K::Proj:
      paren(10, [&] {
        out += t.idx() == 1 ? "pi1 " : "pi2 ";
        print_term_rec(t.child_a(), 11, out);
      });
      return;
    case K::Destr:
      paren(10, [&] {
        out += "out{";
        out += t.name();
        out += "} ";
        print_term_rec(t.child_a(), 11, out);
      });
      return;
    case K::Inj:
      paren(10, [&] {
        out += t.idx() == 1 ? "inj1[" : "inj2[";
        ty(t.ty());
        out += " (+) ";
        ty(t.ty2());
        out += "] ";
        print_term_rec(t.child_a(), 11, out);
      });
      return;
    case K::Pair:
      out += '<';
      print_term_rec(t.child_a(), 0, out);
      out += ", ";
      print_term_rec(t.child_b(), 0, out);
      out += '>';
      return;
    case K::Unfold:
      out += "unfold{";
      out += t.name();
      out += "}(";
      print_term_rec(t.child_a(), 0, out);
      out += ')';
      return;
    case K::Case:
      out += "case(";
      print_term_rec(t.child_a(), 0, out);
      out += ", ";
      print_term_rec(t.child_b(), 0, out);
      out += ')';
      return;
    case K::Focus:
      out += "focus(";
      print_term_rec(t.child_a(), 0, out);
      out += ')';
      return;
    case K::Unfocus:
      out += "unfocus(";
      print_term_rec(t.child_a(), 0, out);
      out += ')';
      return;
    case K::NotF:
      out += "not(";
      print_term_rec(t.child_a(), 0, out);
      out += ')';
      return;
    case K::HeadS:
      out += "head{";
      out += t.name();
      out += '}';
      return;
    case K::TailS:
      out += "tail{";
      out += t.name();
      out += '}';
      return;
  }
}

}  // namespace detail

inline std::string print_type(const Type& t) {
  std::string out;
  detail::print_type_rec(t, 0, out);
  return out;
}

inline std::string print_term(const Term& t) {
  std::string out;
  detail::print_term_rec(t, 0, out);
  return out;
}

}  // namespace mucalc
