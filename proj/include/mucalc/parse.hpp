#pragma once

// Concrete syntax.
//
// Types:  P | A -> B | Top | Bot | A * B | A \/ B | ~A | A (+) B | nu N
//   precedence  ~  >  *  >  \/  >  (+)  >  ->   (all right-associative);
//   (+) desugars to double negations at parse time.
// Terms:  \x:A. M | M N | unit | <M, N> | pi1 M | pi2 M | mu a:A. M | [a] M
//         | mu(a1:A1, a2:A2). M | [a1, a2] M | inj1[B1 (+) B2] M | case(F1, F2)
//         | focus(F) | unfocus(F) | not(F) | out{N} M | unfold{N}(M)
//         | head{N} | tail{N} | #n | _ | (M)
//   binder forms extend as far right as possible; application is left-
//   associative juxtaposition; pi1/pi2/out/inj take one atom.
// Scripts: `;`-terminated declarations and assertions, `--` line comments.

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mucalc/decls.hpp"
#include "mucalc/functor.hpp"
#include "mucalc/syntax.hpp"

namespace mucalc {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " (line " + std::to_string(l) + ", col " + std::to_string(c) +
                           ")"),
        line(l),
        col(c) {}
};

namespace detail {

struct Token {
  enum class K { Ident, Num, Sym, End };
  K k;
  std::string s;
  int line, col;
  size_t off = 0;  // byte offset into the source, for error/report slices
};

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '_' || c == '\'';
}

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto peek = [&](size_t off = 0) -> char {
    return i + off < src.size() ? src[i + off] : '\0';
  };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && peek(1) == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line, tc = col;
    size_t to = i;
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Token::K::Ident, src.substr(i, j - i), tl, tc, to});
      advance(j - i);
      continue;
    }
    if (c >= '0' && c <= '9') {
      size_t j = i;
      while (j < src.size() && src[j] >= '0' && src[j] <= '9') ++j;
      out.push_back({Token::K::Num, src.substr(i, j - i), tl, tc, to});
      advance(j - i);
      continue;
    }
    auto sym = [&](const std::string& s) {
      out.push_back({Token::K::Sym, s, tl, tc, to});
      advance(s.size());
    };
    if (c == '(' && peek(1) == '+' && peek(2) == ')') {
      sym("(+)");
      continue;
    }
    if (c == '-' && peek(1) == '>') {
      sym("->");
      continue;
    }
    if (c == '=' && peek(1) == '=') {
      sym("==");
      continue;
    }
    if (c == '\\' && peek(1) == '/') {
      sym("\\/");
      continue;
    }
    static const std::string singles = "\\.:,;()[]{}<>*~=_#";
    if (singles.find(c) != std::string::npos) {
      sym(std::string(1, c));
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Token::K::End, "", line, col, src.size()});
  return out;
}

}  // namespace detail

// A parsed script statement.  Declarations have already been applied to the
// table by the time parse_script returns; assertions carry their (sugared)
// terms for later elaboration and dispatch.
struct Statement {
  enum class Kind {
    TypeAlias,
    Codata,
    ConstSig,
    Def,
    AssertEquiv,
    AssertDistinct,
    AssertCheck,
    AssertFocal,
    AssertNonfocal,
    AssertOracle
  };
  Kind kind;
  std::string name;  // declarations
  Type ty;           // const/def/alias/check
  FunctorExpr fbody; // codata
  Term lhs, rhs;     // assertion payload / def body
  SrcSpan span;
  std::string text;  // one-line rendering for reports
};

namespace detail {

inline bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {
      "mu",    "unit",   "case",   "focus",  "unfocus", "not",   "out",
      "unfold", "head",  "tail",   "inj1",   "inj2",    "pi1",   "pi2",
      "nu",    "Top",    "Bot",    "type",   "codata",  "const", "def",
      "assert", "equiv", "distinct", "check", "focal",  "nonfocal", "oracle"};
  return kw.count(s) > 0;
}

class Parser {
public:
  Parser(const std::vector<Token>& ts, DeclTable& table, const std::string* src = nullptr)
      : ts_(ts), table_(table), src_(src) {}

  // Set when parsing a codata body: this identifier becomes the hole.
  std::string hole_var;

  const Token& cur() const { return ts_[i_]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }
  bool at_sym(const std::string& s) const { return cur().k == Token::K::Sym && cur().s == s; }
  bool at_ident(const std::string& s) const {
    return cur().k == Token::K::Ident && cur().s == s;
  }
  void bump() { ++i_; }
  void expect_sym(const std::string& s) {
    if (!at_sym(s)) fail("expected '" + s + "'");
    bump();
  }
  std::string expect_ident() {
    if (cur().k != Token::K::Ident) fail("expected identifier");
    if (is_keyword(cur().s)) fail("keyword '" + cur().s + "' cannot be used as a name");
    std::string s = cur().s;
    bump();
    return s;
  }
  bool at_end() const { return cur().k == Token::K::End; }

  // ---- types ------------------------------------------------------------

  Type type_atom() {
    if (at_ident("Top")) {
      bump();
      return Type::top();
    }
    if (at_ident("Bot")) {
      bump();
      return Type::bot();
    }
    if (at_ident("nu")) {
      bump();
      std::string n = expect_ident();
      if (!table_.codata(n)) fail("unknown coinductive type: " + n);
      return Type::nu(n);
    }
    if (at_sym("(")) {
      bump();
      Type t = type_expr(0);
      expect_sym(")");
      return t;
    }
    if (cur().k == Token::K::Ident && !is_keyword(cur().s)) {
      std::string n = cur().s;
      bump();
      if (!hole_var.empty() && n == hole_var) return Type::constant(hole_marker());
      if (const Type* a = table_.alias(n)) return *a;
      if (table_.codata(n)) return Type::nu(n);
      return Type::constant(n);
    }
    fail("expected a type");
  }

  Type type_expr(int minbp) {
    Type lhs;
    if (at_sym("~")) {
      bump();
      lhs = Type::neg(type_expr(5));
    } else {
      lhs = type_atom();
    }
    for (;;) {
      int bp;
      if (at_sym("*"))
        bp = 4;
      else if (at_sym("\\/"))
        bp = 3;
      else if (at_sym("(+)"))
        bp = 2;
      else if (at_sym("->"))
        bp = 1;
      else
        break;
      if (bp < minbp) break;
      std::string op = cur().s;
      bump();
      Type rhs = type_expr(bp);  // right-assoc
      if (op == "*")
        lhs = Type::prod(lhs, rhs);
      else if (op == "\\/")
        lhs = Type::disj(lhs, rhs);
      else if (op == "(+)")
        lhs = Type::oplus(lhs, rhs);
      else
        lhs = Type::arrow(lhs, rhs);
    }
    return lhs;
  }

  static const char* hole_marker() { return "'hole"; }

  // ---- terms ------------------------------------------------------------

  SrcSpan here() const { return SrcSpan{cur().line, cur().col}; }

  Term term() {
    SrcSpan sp = here();
    if (at_sym("\\")) {
      bump();
      std::string x = expect_ident();
      expect_sym(":");
      Type t = type_expr(0);
      expect_sym(".");
      tvars_.push_back(x);
      Term body = term();
      tvars_.pop_back();
      return Term::lam(x, t, body).with_span(sp);
    }
    if (at_ident("mu")) {
      bump();
      if (at_sym("(")) {
        bump();
        std::string a1 = expect_ident();
        expect_sym(":");
        Type t1 = type_expr(0);
        expect_sym(",");
        std::string a2 = expect_ident();
        expect_sym(":");
        Type t2 = type_expr(0);
        expect_sym(")");
        expect_sym(".");
        if (a1 == a2) fail("mu-pair binders must be distinct");
        cvars_.push_back(a1);
        cvars_.push_back(a2);
        Term body = term();
        cvars_.pop_back();
        cvars_.pop_back();
        return Term::mu_pair(a1, t1, a2, t2, body).with_span(sp);
      }
      std::string a = expect_ident();
      expect_sym(":");
      Type t = type_expr(0);
      expect_sym(".");
      cvars_.push_back(a);
      Term body = term();
      cvars_.pop_back();
      return Term::mu(a, t, body).with_span(sp);
    }
    if (at_sym("[")) {
      bump();
      std::string a1 = expect_ident();
      if (at_sym(",")) {
        bump();
        std::string a2 = expect_ident();
        expect_sym("]");
        Term body = term();
        return Term::named_pair(a1, a2, body).with_span(sp);
      }
      expect_sym("]");
      Term body = term();
      return Term::named(a1, body).with_span(sp);
    }
    return app_chain();
  }

  bool starts_atom() const {
    if (cur().k == Token::K::Sym)
      return cur().s == "(" || cur().s == "<" || cur().s == "_" || cur().s == "#";
    if (cur().k != Token::K::Ident) return false;
    const std::string& s = cur().s;
    if (s == "unit" || s == "case" || s == "focus" || s == "unfocus" || s == "not" ||
        s == "unfold" || s == "head" || s == "tail")
      return true;
    return !is_keyword(s);
  }

  bool starts_prefix() const {
    return cur().k == Token::K::Ident &&
           (cur().s == "pi1" || cur().s == "pi2" || cur().s == "out" || cur().s == "inj1" ||
            cur().s == "inj2");
  }

  Term app_chain() {
    Term head = starts_prefix() ? prefix_op() : atom();
    while (starts_atom()) head = Term::app(head, atom());
    return head;
  }

  Term prefix_op() {
    SrcSpan sp = here();
    std::string op = cur().s;
    bump();
    if (op == "pi1" || op == "pi2") return Term::proj(op == "pi1" ? 1 : 2, atom()).with_span(sp);
    if (op == "out") {
      expect_sym("{");
      std::string n = expect_ident();
      if (!table_.codata(n)) fail("unknown coinductive type: " + n);
      expect_sym("}");
      return Term::destr(n, atom()).with_span(sp);
    }
    // inj1 / inj2
    expect_sym("[");
    SrcSpan tsp = here();
    Type t = type_expr(0);
    expect_sym("]");
    Type b1, b2;
    if (!split_oplus(t, b1, b2))
      throw ParseError("injection annotation must be a (+) type", tsp.line, tsp.col);
    return Term::inj(op == "inj1" ? 1 : 2, b1, b2, atom()).with_span(sp);
  }

  static bool split_oplus(const Type& t, Type& b1, Type& b2) {
    if (t.kind() != Type::Kind::Disj) return false;
    auto strip2 = [](const Type& s, Type& out) {
      if (!s.is_neg() || !s.left().is_neg()) return false;
      out = s.left().left();
      return true;
    };
    return strip2(t.left(), b1) && strip2(t.right(), b2);
  }

  Term atom() {
    SrcSpan sp = here();
    if (at_sym("(")) {
      bump();
      Term t = term();
      expect_sym(")");
      return t;
    }
    if (at_sym("<")) {
      bump();
      Term a = term();
      expect_sym(",");
      Term b = term();
      expect_sym(">");
      return Term::pair(a, b).with_span(sp);
    }
    if (at_sym("_")) {
      bump();
      return Term::hole().with_span(sp);
    }
    if (at_sym("#")) {
      bump();
      if (cur().k != Token::K::Num) fail("expected a number after '#'");
      int n = std::stoi(cur().s);
      bump();
      return Term::numeral(n).with_span(sp);
    }
    if (at_ident("unit")) {
      bump();
      return Term::unit().with_span(sp);
    }
    if (at_ident("case") || at_ident("focus") || at_ident("unfocus") || at_ident("not")) {
      std::string op = cur().s;
      bump();
      expect_sym("(");
      Term a = term();
      if (op == "case") {
        expect_sym(",");
        Term b = term();
        expect_sym(")");
        return Term::case_of(a, b).with_span(sp);
      }
      expect_sym(")");
      if (op == "focus") return Term::focus(a).with_span(sp);
      if (op == "unfocus") return Term::unfocus(a).with_span(sp);
      return Term::not_fn(a).with_span(sp);
    }
    if (at_ident("unfold")) {
      bump();
      expect_sym("{");
      std::string n = expect_ident();
      if (!table_.codata(n)) fail("unknown coinductive type: " + n);
      expect_sym("}");
      expect_sym("(");
      Term a = term();
      expect_sym(")");
      return Term::unfold(n, a).with_span(sp);
    }
    if (at_ident("head") || at_ident("tail")) {
      bool is_head = cur().s == "head";
      bump();
      expect_sym("{");
      std::string n = expect_ident();
      if (!table_.codata(n)) fail("unknown coinductive type: " + n);
      expect_sym("}");
      return (is_head ? Term::head_s(n) : Term::tail_s(n)).with_span(sp);
    }
    if (cur().k == Token::K::Ident && !is_keyword(cur().s)) {
      std::string n = cur().s;
      bump();
      for (auto it = tvars_.rbegin(); it != tvars_.rend(); ++it)
        if (*it == n) return Term::var(n).with_span(sp);
      if (const DeclTable::Def* d = table_.def(n)) return d->body;  // transparent
      if (table_.constant(n)) return Term::constant(n).with_span(sp);
      return Term::var(n).with_span(sp);
    }
    fail("expected a term");
  }

  // ---- scripts ----------------------------------------------------------

  std::vector<Statement> script() {
    std::vector<Statement> out;
    while (!at_end()) {
      out.push_back(statement());
    }
    return out;
  }

  Statement statement() {
    size_t start = i_;
    Statement st = statement_inner();
    if (src_) {
      std::string raw = slice(start, i_);
      if (!raw.empty()) st.text = raw;
    }
    return st;
  }

  Statement statement_inner() {
    Statement st;
    st.span = here();
    if (at_ident("type")) {
      bump();
      st.kind = Statement::Kind::TypeAlias;
      st.name = expect_ident();
      expect_sym("=");
      st.ty = type_expr(0);
      expect_sym(";");
      table_.declare_alias(st.name, st.ty);
      st.text = "type " + st.name;
      return st;
    }
    if (at_ident("codata")) {
      bump();
      st.kind = Statement::Kind::Codata;
      st.name = expect_ident();
      expect_sym("=");
      if (!at_ident("nu")) fail("expected 'nu' in codata declaration");
      bump();
      std::string var = expect_ident();
      expect_sym(".");
      hole_var = var;
      SrcSpan bsp = here();
      Type body = type_expr(0);
      hole_var.clear();
      expect_sym(";");
      st.fbody = to_functor(body, bsp);
      try {
        table_.declare_codata(st.name, st.fbody);
      } catch (const DeclError& e) {
        throw ParseError(e.what(), bsp.line, bsp.col);
      }
      st.text = "codata " + st.name;
      return st;
    }
    if (at_ident("const")) {
      bump();
      st.kind = Statement::Kind::ConstSig;
      st.name = expect_ident();
      expect_sym(":");
      st.ty = type_expr(0);
      expect_sym(";");
      table_.declare_const(st.name, st.ty);
      st.text = "const " + st.name;
      return st;
    }
    if (at_ident("def")) {
      bump();
      st.kind = Statement::Kind::Def;
      st.name = expect_ident();
      expect_sym(":");
      st.ty = type_expr(0);
      expect_sym("=");
      st.lhs = term();
      expect_sym(";");
      table_.declare_def(st.name, st.ty, st.lhs);
      st.text = "def " + st.name;
      return st;
    }
    if (at_ident("assert")) {
      bump();
      if (at_ident("equiv") || at_ident("distinct") || at_ident("oracle")) {
        std::string k = cur().s;
        bump();
        st.kind = k == "equiv" ? Statement::Kind::AssertEquiv
                 : k == "distinct" ? Statement::Kind::AssertDistinct
                                   : Statement::Kind::AssertOracle;
        st.lhs = term();
        expect_sym("==");
        st.rhs = term();
        expect_sym(";");
        st.text = "assert " + k;
        return st;
      }
      if (at_ident("check")) {
        bump();
        st.kind = Statement::Kind::AssertCheck;
        st.lhs = term();
        expect_sym(":");
        st.ty = type_expr(0);
        expect_sym(";");
        st.text = "assert check";
        return st;
      }
      if (at_ident("focal") || at_ident("nonfocal")) {
        bool pos = cur().s == "focal";
        bump();
        st.kind = pos ? Statement::Kind::AssertFocal : Statement::Kind::AssertNonfocal;
        st.lhs = term();
        expect_sym(";");
        st.text = pos ? "assert focal" : "assert nonfocal";
        return st;
      }
      fail("unknown assertion kind");
    }
    fail("expected a declaration or assertion");
  }

  FunctorExpr to_functor(const Type& t, SrcSpan sp) {
    std::string hole = hole_marker();
    std::function<bool(const Type&)> has = [&](const Type& s) -> bool {
      switch (s.kind()) {
        case Type::Kind::Const: return s.name() == hole;
        case Type::Kind::Arrow:
        case Type::Kind::Prod:
        case Type::Kind::Disj: return has(s.left()) || has(s.right());
        default: return false;
      }
    };
    std::function<FunctorExpr(const Type&)> go = [&](const Type& s) -> FunctorExpr {
      if (!has(s)) return FunctorExpr::const_t(s);
      if (s.kind() == Type::Kind::Const && s.name() == hole) return FunctorExpr::hole();
      if (s.kind() == Type::Kind::Prod) return FunctorExpr::prod(go(s.left()), go(s.right()));
      if (s.kind() == Type::Kind::Disj) return FunctorExpr::disj(go(s.left()), go(s.right()));
      if (s.is_neg() && s.left().is_neg()) return FunctorExpr::double_neg(go(s.left().left()));
      throw ParseError(
          "the recursion variable may appear only under products, disjunctions and double "
          "negations",
          sp.line, sp.col);
    };
    return go(t);
  }

private:
  const std::vector<Token>& ts_;
  size_t i_ = 0;
  DeclTable& table_;
  const std::string* src_ = nullptr;
  std::vector<std::string> tvars_, cvars_;

  // Raw source between two token indices, whitespace collapsed, without the
  // trailing semicolon.  Used so reports echo statements as written.
  std::string slice(size_t from_tok, size_t to_tok) const {
    if (!src_ || from_tok >= to_tok) return {};
    size_t lo = ts_[from_tok].off;
    size_t hi = ts_[to_tok - 1].off + ts_[to_tok - 1].s.size();
    if (hi > src_->size()) hi = src_->size();
    std::string out;
    bool in_ws = false;
    for (size_t k = lo; k < hi; ++k) {
      char c = (*src_)[k];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        in_ws = true;
        continue;
      }
      if (in_ws && !out.empty()) out.push_back(' ');
      in_ws = false;
      out.push_back(c);
    }
    while (!out.empty() && (out.back() == ';' || out.back() == ' ')) out.pop_back();
    return out;
  }
};

}  // namespace detail

inline Type parse_type(const std::string& text, const DeclTable& table) {
  auto toks = detail::lex(text);
  detail::Parser p(toks, const_cast<DeclTable&>(table));
  Type t = p.type_expr(0);
  if (!p.at_end()) p.fail("trailing input after type");
  return t;
}

inline Term parse_term(const std::string& text, const DeclTable& table) {
  auto toks = detail::lex(text);
  detail::Parser p(toks, const_cast<DeclTable&>(table));
  Term t = p.term();
  if (!p.at_end()) p.fail("trailing input after term");
  return t;
}

inline std::vector<Statement> parse_script(const std::string& source, DeclTable& table) {
  auto toks = detail::lex(source);
  detail::Parser p(toks, table, &source);
  return p.script();
}

}  // namespace mucalc
