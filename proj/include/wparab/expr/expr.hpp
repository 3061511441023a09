#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wparab/error.hpp"
#include "wparab/expr/dual.hpp"

namespace wparab {

enum class Op { constant, variable, neg, add, sub, mul, div, pow, call };
enum class Fn { sin, cos, sinh, cosh, tanh, exp, log, sqrt, abs };

struct Node;
using Ast = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::constant;
  double value = 0.0;  // constant
  int var = -1;        // variable index into the declared list
  Fn fn = Fn::sin;     // call
  Ast a, b;
};

namespace ast {

inline Ast constant(double v) { return std::make_shared<Node>(Node{Op::constant, v, -1, Fn::sin, {}, {}}); }
inline Ast variable(int i) { return std::make_shared<Node>(Node{Op::variable, 0.0, i, Fn::sin, {}, {}}); }
inline Ast unary(Op op, Ast a) { return std::make_shared<Node>(Node{op, 0.0, -1, Fn::sin, std::move(a), {}}); }
inline Ast binary(Op op, Ast a, Ast b) {
  return std::make_shared<Node>(Node{op, 0.0, -1, Fn::sin, std::move(a), std::move(b)});
}
inline Ast neg(Ast a) { return unary(Op::neg, std::move(a)); }
inline Ast add(Ast a, Ast b) { return binary(Op::add, std::move(a), std::move(b)); }
inline Ast sub(Ast a, Ast b) { return binary(Op::sub, std::move(a), std::move(b)); }
inline Ast mul(Ast a, Ast b) { return binary(Op::mul, std::move(a), std::move(b)); }
inline Ast div(Ast a, Ast b) { return binary(Op::div, std::move(a), std::move(b)); }
inline Ast pow(Ast a, Ast b) { return binary(Op::pow, std::move(a), std::move(b)); }
inline Ast call(Fn fn, Ast a) { return std::make_shared<Node>(Node{Op::call, 0.0, -1, fn, std::move(a), {}}); }

inline bool equal(const Ast& x, const Ast& y) {
  if (!x || !y) return !x && !y;
  if (x->op != y->op) return false;
  switch (x->op) {
    case Op::constant: return x->value == y->value;
    case Op::variable: return x->var == y->var;
    case Op::call: return x->fn == y->fn && equal(x->a, y->a);
    default: return equal(x->a, y->a) && equal(x->b, y->b);
  }
}

inline bool has_variables(const Ast& x) {
  if (!x) return false;
  if (x->op == Op::variable) return true;
  return has_variables(x->a) || has_variables(x->b);
}

inline const char* fn_name(Fn fn) {
  static const char* names[] = {"sin", "cos", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "abs"};
  return names[static_cast<int>(fn)];
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Fully parenthesized rendering; parses back to an equal tree.
inline std::string print(const Ast& x, std::span<const std::string> vars) {
  switch (x->op) {
    case Op::constant: return format_number(x->value);
    case Op::variable: return vars[x->var];
    case Op::neg: return "(-" + print(x->a, vars) + ")";
    case Op::call: return std::string(fn_name(x->fn)) + "(" + print(x->a, vars) + ")";
    default: break;
  }
  const char* sym = x->op == Op::add ? "+" : x->op == Op::sub ? "-" : x->op == Op::mul ? "*" : x->op == Op::div ? "/" : "^";
  return "(" + print(x->a, vars) + sym + print(x->b, vars) + ")";
}

}  // namespace ast

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> vars) : s_(src), vars_(vars) {}

  Ast run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Ast e = expr();
    skip();
    if (pos_ < s_.size()) {
      if (s_[pos_] == ')') throw ParseError("unbalanced parenthesis ')'", pos_);
      throw ParseError(std::string("unexpected token '") + s_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  std::string_view s_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> open_;

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  Ast expr() {
    Ast lhs = term();
    while (true) {
      if (peek('+')) { ++pos_; lhs = ast::add(lhs, term()); }
      else if (peek('-')) { ++pos_; lhs = ast::sub(lhs, term()); }
      else return lhs;
    }
  }

  // A leading minus scopes over the whole product: -a/b reads as -(a/b).
  Ast term() {
    if (peek('-')) {
      ++pos_;
      return ast::neg(term());
    }
    Ast lhs = factor();
    while (true) {
      if (peek('*')) { ++pos_; lhs = ast::mul(lhs, factor()); }
      else if (peek('/')) { ++pos_; lhs = ast::div(lhs, factor()); }
      else return lhs;
    }
  }

  Ast factor() {
    if (peek('-')) {
      ++pos_;
      return ast::neg(factor());
    }
    return power();
  }

  Ast power() {
    Ast base = primary();
    while (peek('^')) {
      ++pos_;
      skip();
      std::size_t at = pos_;
      Ast e = exponent();
      if (ast::has_variables(e)) throw ParseError("non-constant exponent", at);
      base = ast::pow(base, e);
    }
    return base;
  }

  Ast exponent() {
    if (peek('-')) {
      ++pos_;
      return ast::neg(exponent());
    }
    return primary();
  }

  Ast primary() {
    skip();
    if (pos_ >= s_.size()) {
      if (!open_.empty()) throw ParseError("unbalanced parenthesis '('", open_.back());
      throw ParseError("unexpected end of input", pos_);
    }
    char c = s_[pos_];
    if (c == '(') {
      open_.push_back(pos_);
      ++pos_;
      Ast e = expr();
      close();
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == ')') throw ParseError("unbalanced parenthesis ')'", pos_);
    throw ParseError(std::string("unknown token '") + c + "'", pos_);
  }

  void close() {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != ')') {
      if (pos_ < s_.size()) throw ParseError(std::string("unexpected token '") + s_[pos_] + "'", pos_);
      throw ParseError("unbalanced parenthesis '('", open_.back());
    }
    ++pos_;
    open_.pop_back();
  }

  Ast number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) throw ParseError("malformed number", start);
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '('))
      throw ParseError("missing operator (implicit multiplication is not allowed)", pos_);
    return ast::constant(v);
  }

  Ast identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string name(s_.substr(start, pos_ - start));
    if (peek('(')) {
      static const char* names[] = {"sin", "cos", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "abs"};
      for (int k = 0; k < 9; ++k) {
        if (name == names[k]) {
          open_.push_back(pos_);
          ++pos_;
          Ast arg = expr();
          close();
          return ast::call(static_cast<Fn>(k), arg);
        }
      }
      throw ParseError("unknown function '" + name + "'", start);
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return ast::variable(static_cast<int>(i));
    if (name == "pi") return ast::constant(std::numbers::pi);
    throw ParseError("undeclared variable '" + name + "'", start);
  }
};

}  // namespace detail

inline Ast parse(std::string_view source, std::span<const std::string> variables) {
  return detail::Parser(source, variables).run();
}

// A parsed expression bundled with its variable list. Immutable and shareable.
class Expression {
 public:
  Expression() = default;
  Expression(std::string source, std::vector<std::string> variables)
      : source_(std::move(source)), vars_(std::move(variables)) {
    root_ = parse(source_, vars_);
  }

  const std::string& source() const { return source_; }
  const std::vector<std::string>& variables() const { return vars_; }
  const Ast& root() const { return root_; }
  std::size_t arity() const { return vars_.size(); }
  std::string pretty() const { return ast::print(root_, vars_); }

  template <class T>
  T eval(std::span<const T> x) const {
    if (x.size() != vars_.size()) throw InvalidArgument("expression arity mismatch");
    return eval_node<T>(root_, x);
  }

  double operator()(std::span<const double> x) const { return eval<double>(x); }
  double operator()(double t) const { return eval<double>(std::span<const double>(&t, 1)); }

 private:
  std::string source_;
  std::vector<std::string> vars_;
  Ast root_;

  [[noreturn]] void domain(const char* what, const Ast& node) const {
    throw DomainError(std::string(what) + " in " + ast::print(node, vars_));
  }

  template <class T>
  T eval_node(const Ast& n, std::span<const T> x) const {
    using std::sin; using std::cos; using std::sinh; using std::cosh; using std::tanh;
    using std::exp; using std::log; using std::sqrt; using std::abs; using std::pow;
    switch (n->op) {
      case Op::constant: return T(n->value);
      case Op::variable: return x[n->var];
      case Op::neg: return -eval_node<T>(n->a, x);
      case Op::add: return eval_node<T>(n->a, x) + eval_node<T>(n->b, x);
      case Op::sub: return eval_node<T>(n->a, x) - eval_node<T>(n->b, x);
      case Op::mul: return eval_node<T>(n->a, x) * eval_node<T>(n->b, x);
      case Op::div: {
        T den = eval_node<T>(n->b, x);
        if (primal(den) == 0.0) domain("division by zero", n);
        return eval_node<T>(n->a, x) / den;
      }
      case Op::pow: {
        T base = eval_node<T>(n->a, x);
        double c = eval_node<double>(n->b, std::span<const double>());
        double b = primal(base);
        if (b < 0.0 && c != std::floor(c)) domain("negative base with non-integer exponent", n);
        if (b == 0.0 && c < 0.0) domain("zero base with negative exponent", n);
        return pow(base, c);
      }
      case Op::call: {
        T a = eval_node<T>(n->a, x);
        double p = primal(a);
        switch (n->fn) {
          case Fn::sin: return sin(a);
          case Fn::cos: return cos(a);
          case Fn::sinh: return sinh(a);
          case Fn::cosh: return cosh(a);
          case Fn::tanh: return tanh(a);
          case Fn::exp: return exp(a);
          case Fn::log:
            if (!(p > 0.0)) domain("log of non-positive argument", n);
            return log(a);
          case Fn::sqrt:
            if (p < 0.0) domain("sqrt of negative argument", n);
            return sqrt(a);
          case Fn::abs: return abs(a);
        }
      }
    }
    throw EvaluationError("corrupt expression tree", 0.0);
  }
};

// Value and directional derivative of `e` at `point` along `direction`.
inline D1 eval_dual(const Expression& e, std::span<const double> point, std::span<const double> direction) {
  if (point.size() != e.arity() || direction.size() != e.arity()) throw InvalidArgument("assignment does not cover the variables");
  std::vector<D1> x(point.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = D1(point[i], direction[i]);
  return e.eval<D1>(std::span<const D1>(x));
}

}  // namespace wparab
