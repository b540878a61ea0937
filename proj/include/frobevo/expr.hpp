// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frobevo/errors.hpp"
#include "frobevo/rational.hpp"

namespace frobevo {

enum class BinaryOp { Add, Sub, Mul, Div };

inline char op_char(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    default: return '/';
  }
}

/// How division nodes evaluate.
///   Rational — exact quotients throughout.
///   FloorDiv — every '/' takes the floor of the exact quotient (toward minus
///   infinity), matching C integer division for the non-negative operands
///   arising here. Explicit floor nodes floor in both modes.
enum class EvalMode { Rational, FloorDiv };

// Immutable single-variable arithmetic expression tree. Nodes are shared
// const subtrees, so copies are cheap and evaluation is safe to run
// concurrently. Division denominators are restricted to constant subtrees
// (no variable below them); the parser enforces this.
class Expr {
 public:
  enum class Kind { Var, Const, Binary, FloorDiv };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind;
    Rational value;       // Const
    BinaryOp op;          // Binary
    NodePtr left, right;  // Binary / FloorDiv
  };

  Expr() : root_(make_node({Kind::Const, Rational(0), BinaryOp::Add, nullptr, nullptr})) {}

  static Expr var() { return Expr(make_node({Kind::Var, {}, BinaryOp::Add, nullptr, nullptr})); }
  static Expr constant(Rational v) {
    return Expr(make_node({Kind::Const, v, BinaryOp::Add, nullptr, nullptr}));
  }
  static Expr binary(BinaryOp op, Expr l, Expr r) {
    return Expr(make_node({Kind::Binary, {}, op, l.root_, r.root_}));
  }
  static Expr floor_div(Expr l, Expr r) {
    return Expr(make_node({Kind::FloorDiv, {}, BinaryOp::Div, l.root_, r.root_}));
  }

  const Node& root() const { return *root_; }

  bool contains_var() const { return contains_var(*root_); }

  /// Exact evaluation at integer x. Throws DivisionByZero when a denominator
  /// evaluates to zero and Overflow when 64-bit rationals no longer fit.
  Rational evaluate(int64_t x, EvalMode mode) const { return eval(*root_, x, mode); }

  /// Copy with every plain division replaced by a floor division.
  Expr floorized() const { return Expr(floorize(root_)); }

  /// True when some division's (constant) denominator evaluates to zero;
  /// detectable without choosing an x because denominators are variable-free.
  bool has_static_division_by_zero() const { return zero_denominator(*root_); }

  /// Canonical serialization: explicit parentheses around every binary node,
  /// "floor(a / b)" for floor divisions. Re-parses to a structurally
  /// identical tree.
  std::string to_string(std::string_view var_name = "x") const {
    std::string out;
    print(*root_, var_name, out);
    return out;
  }

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b) { return equal(*a.root_, *b.root_); }

  // -- parsing ---------------------------------------------------------------

  /// Parses a token sequence (a phenotype) into a tree. Standard precedence:
  /// parentheses, then * and /, then + and -, all left-associative.
  /// When var_name is empty, the first identifier binds the variable name.
  static Expr parse_tokens(std::span<const std::string> tokens, std::string* var_name = nullptr) {
    TokenParser p{tokens, 0, var_name && !var_name->empty() ? *var_name : std::string()};
    Expr e = p.parse_sum();
    if (p.pos != tokens.size()) throw ParseError("unexpected trailing token '" + tokens[p.pos] + "'");
    if (var_name) *var_name = p.var.empty() ? "x" : p.var;
    return e;
  }

  /// Parses expression text: numbers become exact rationals, "floor(a / b)"
  /// becomes a floor-division node.
  static Expr parse(std::string_view text, std::string* var_name = nullptr) {
    std::vector<std::string> tokens = lex(text);
    return parse_tokens(tokens, var_name);
  }

 private:
  explicit Expr(NodePtr r) : root_(std::move(r)) {}

  static NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

  static bool contains_var(const Node& n) {
    switch (n.kind) {
      case Kind::Var: return true;
      case Kind::Const: return false;
      default: return contains_var(*n.left) || contains_var(*n.right);
    }
  }

  static Rational eval(const Node& n, int64_t x, EvalMode mode) {
    switch (n.kind) {
      case Kind::Var: return Rational(x);
      case Kind::Const: return n.value;
      case Kind::FloorDiv: {
        Rational num = eval(*n.left, x, mode);
        Rational den = eval(*n.right, x, mode);
        if (den.is_zero()) throw DivisionByZero("division by zero");
        return Rational((num / den).floor());
      }
      default: {
        Rational l = eval(*n.left, x, mode);
        Rational r = eval(*n.right, x, mode);
        switch (n.op) {
          case BinaryOp::Add: return l + r;
          case BinaryOp::Sub: return l - r;
          case BinaryOp::Mul: return l * r;
          default:
            if (r.is_zero()) throw DivisionByZero("division by zero");
            if (mode == EvalMode::FloorDiv) return Rational((l / r).floor());
            return l / r;
        }
      }
    }
  }

  static NodePtr floorize(const NodePtr& n) {
    if (n->kind == Kind::Var || n->kind == Kind::Const) return n;
    NodePtr l = floorize(n->left);
    NodePtr r = floorize(n->right);
    if (n->kind == Kind::Binary && n->op == BinaryOp::Div)
      return make_node({Kind::FloorDiv, {}, BinaryOp::Div, l, r});
    if (l == n->left && r == n->right) return n;
    if (n->kind == Kind::FloorDiv) return make_node({Kind::FloorDiv, {}, BinaryOp::Div, l, r});
    return make_node({Kind::Binary, {}, n->op, l, r});
  }

  static std::optional<Rational> constant_value(const Node& n) {
    switch (n.kind) {
      case Kind::Var: return std::nullopt;
      case Kind::Const: return n.value;
      default: {
        auto l = constant_value(*n.left);
        auto r = constant_value(*n.right);
        if (!l || !r) return std::nullopt;
        try {
          if (n.kind == Kind::FloorDiv) return Rational((*l / *r).floor());
          switch (n.op) {
            case BinaryOp::Add: return *l + *r;
            case BinaryOp::Sub: return *l - *r;
            case BinaryOp::Mul: return *l * *r;
            default: return *l / *r;
          }
        } catch (const Error&) {
          return std::nullopt;  // nested zero division or overflow
        }
      }
    }
  }

  static bool zero_denominator(const Node& n) {
    switch (n.kind) {
      case Kind::Var:
      case Kind::Const: return false;
      default: {
        if (n.kind == Kind::FloorDiv || n.op == BinaryOp::Div) {
          auto den = constant_value(*n.right);
          if (den && den->is_zero()) return true;
          if (!den && !contains_var(*n.right)) return true;  // constant subtree that itself divides by zero
        }
        return zero_denominator(*n.left) || zero_denominator(*n.right);
      }
    }
  }

  static bool equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Var: return true;
      case Kind::Const: return a.value == b.value;
      case Kind::Binary:
        if (a.op != b.op) return false;
        [[fallthrough]];
      default: return equal(*a.left, *b.left) && equal(*a.right, *b.right);
    }
  }

  static void print(const Node& n, std::string_view var, std::string& out) {
    switch (n.kind) {
      case Kind::Var:
        out += var;
        return;
      case Kind::Const:
        out += format_constant(n.value);
        return;
      case Kind::FloorDiv:
        out += "floor(";
        print(*n.left, var, out);
        out += " / ";
        print(*n.right, var, out);
        out += ')';
        return;
      default:
        out += '(';
        print(*n.left, var, out);
        out += ' ';
        out += op_char(n.op);
        out += ' ';
        print(*n.right, var, out);
        out += ')';
        return;
    }
  }

  // Integers print bare; other rationals print as exact decimals when the
  // denominator is 2^a 5^b, otherwise "p/q" (no literal syntax round-trips
  // those, but none of the shipped grammars or formulas produce them).
  static std::string format_constant(const Rational& v) {
    if (v.is_integer()) return std::to_string(v.num());
    int64_t den = v.den();
    int twos = 0, fives = 0;
    while (den % 2 == 0) {
      den /= 2;
      ++twos;
    }
    while (den % 5 == 0) {
      den /= 5;
      ++fives;
    }
    if (den != 1) return v.to_string();
    int digits = twos > fives ? twos : fives;
    __int128 scaled = v.num();
    for (int i = twos; i < digits; ++i) scaled *= 2;
    for (int i = fives; i < digits; ++i) scaled *= 5;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string frac;
    for (int i = 0; i < digits; ++i) {
      frac += static_cast<char>('0' + static_cast<int>(scaled % 10));
      scaled /= 10;
    }
    std::string whole;
    if (scaled == 0) whole = "0";
    while (scaled > 0) {
      whole += static_cast<char>('0' + static_cast<int>(scaled % 10));
      scaled /= 10;
    }
    std::string out = neg ? "-" : "";
    for (auto it = whole.rbegin(); it != whole.rend(); ++it) out += *it;
    out += '.';
    for (auto it = frac.rbegin(); it != frac.rend(); ++it) out += *it;
    return out;
  }

  // -- recursive-descent token parser ----------------------------------------

  struct TokenParser {
    std::span<const std::string> tokens;
    size_t pos = 0;
    std::string var;  // bound variable name; empty until first identifier

    const std::string* peek() const { return pos < tokens.size() ? &tokens[pos] : nullptr; }

    Expr parse_sum() {
      Expr lhs = parse_term();
      while (const std::string* t = peek()) {
        if (*t != "+" && *t != "-") break;
        BinaryOp op = *t == "+" ? BinaryOp::Add : BinaryOp::Sub;
        ++pos;
        lhs = Expr::binary(op, lhs, parse_term());
      }
      return lhs;
    }

    Expr parse_term() {
      Expr lhs = parse_factor();
      while (const std::string* t = peek()) {
        if (*t != "*" && *t != "/") break;
        BinaryOp op = *t == "*" ? BinaryOp::Mul : BinaryOp::Div;
        ++pos;
        Expr rhs = parse_factor();
        if (op == BinaryOp::Div && rhs.contains_var())
          throw ParseError("division denominator must be a constant expression");
        lhs = Expr::binary(op, lhs, rhs);
      }
      return lhs;
    }

    Expr parse_factor() {
      const std::string* t = peek();
      if (!t) throw ParseError("unexpected end of expression");
      if (*t == "(") {
        ++pos;
        Expr inner = parse_sum();
        expect(")");
        return inner;
      }
      if (*t == "floor") {
        ++pos;
        expect("(");
        Expr inner = parse_sum();
        expect(")");
        const Node& n = inner.root();
        if (n.kind != Kind::Binary || n.op != BinaryOp::Div)
          throw ParseError("floor(...) argument must be a division a / b");
        return Expr(make_node({Kind::FloorDiv, {}, BinaryOp::Div, n.left, n.right}));
      }
      char c = (*t)[0];
      if ((c >= '0' && c <= '9') || c == '.') {
        Expr e = Expr::constant(Rational::from_decimal(*t));
        ++pos;
        return e;
      }
      if (is_identifier(*t)) {
        if (var.empty())
          var = *t;
        else if (var != *t)
          throw ParseError("expression uses more than one variable: '" + var + "' and '" + *t + "'");
        ++pos;
        return Expr::var();
      }
      throw ParseError("unexpected token '" + *t + "'");
    }

    void expect(std::string_view want) {
      const std::string* t = peek();
      if (!t || *t != want)
        throw ParseError("expected '" + std::string(want) + "'" + (t ? ", got '" + *t + "'" : " before end of expression"));
      ++pos;
    }

    static bool is_identifier(std::string_view s) {
      if (s.empty()) return false;
      for (char ch : s)
        if (!(ch == '_' || (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9')))
          return false;
      char c = s[0];
      return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    }
  };

  static std::vector<std::string> lex(std::string_view text) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
        continue;
      }
      if (c == '(' || c == ')' || c == '+' || c == '-' || c == '*' || c == '/') {
        tokens.emplace_back(1, c);
        ++i;
        continue;
      }
      if ((c >= '0' && c <= '9') || c == '.') {
        size_t j = i;
        while (j < text.size() && ((text[j] >= '0' && text[j] <= '9') || text[j] == '.')) ++j;
        tokens.emplace_back(text.substr(i, j - i));
        i = j;
        continue;
      }
      if (TokenParser::is_identifier(text.substr(i, 1))) {
        size_t j = i;
        while (j < text.size() && TokenParser::is_identifier(text.substr(i, j - i + 1))) ++j;
        tokens.emplace_back(text.substr(i, j - i));
        i = j;
        continue;
      }
      throw ParseError(std::string("unexpected character '") + c + "' in expression");
    }
    if (tokens.empty()) throw ParseError("empty expression");
    return tokens;
  }

  NodePtr root_;
};

/// Free-function spellings for the common pipeline verbs.
inline Expr parse_phenotype(std::span<const std::string> tokens) { return Expr::parse_tokens(tokens); }
inline Rational evaluate(const Expr& e, int64_t x, EvalMode mode) { return e.evaluate(x, mode); }
inline Expr floorize(const Expr& e) { return e.floorized(); }

}  // namespace frobevo
