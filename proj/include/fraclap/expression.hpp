#pragma once

// Small expression language in one variable r for warping functions:
//   numbers, r, + - * / ^ (constant exponent), unary minus, parentheses,
//   sinh cosh exp sin cos sqrt log.
// Derivatives are formed symbolically.

#include <cctype>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "fraclap/errors.hpp"

namespace fraclap {

class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sinh, Cosh, Exp, Sin, Cos, Sqrt, Log };

  static Expr constant(double v) { return Expr(std::make_shared<Node>(Node{Op::Const, v, nullptr, nullptr})); }
  static Expr var() { return Expr(std::make_shared<Node>(Node{Op::Var, 0.0, nullptr, nullptr})); }

  double operator()(double r) const { return eval_(*node_, r); }

  Expr derivative() const { return diff_(node_); }

  std::string str() const { return str_(*node_); }

  bool is_const(double* value = nullptr) const {
    if (node_->op != Op::Const) return false;
    if (value) *value = node_->value;
    return true;
  }

  friend Expr operator+(const Expr& a, const Expr& b) {
    double x, y;
    if (a.is_const(&x) && x == 0.0) return b;
    if (b.is_const(&y) && y == 0.0) return a;
    if (a.is_const(&x) && b.is_const(&y)) return constant(x + y);
    return binary_(Op::Add, a, b);
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    double x, y;
    if (b.is_const(&y) && y == 0.0) return a;
    if (a.is_const(&x) && b.is_const(&y)) return constant(x - y);
    if (a.is_const(&x) && x == 0.0) return -b;
    return binary_(Op::Sub, a, b);
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    double x, y;
    if ((a.is_const(&x) && x == 0.0) || (b.is_const(&y) && y == 0.0)) return constant(0.0);
    if (a.is_const(&x) && x == 1.0) return b;
    if (b.is_const(&y) && y == 1.0) return a;
    if (a.is_const(&x) && b.is_const(&y)) return constant(x * y);
    return binary_(Op::Mul, a, b);
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    double x, y;
    if (a.is_const(&x) && x == 0.0) return constant(0.0);
    if (b.is_const(&y) && y == 1.0) return a;
    if (a.is_const(&x) && b.is_const(&y)) return constant(x / y);
    return binary_(Op::Div, a, b);
  }
  Expr operator-() const {
    double x;
    if (is_const(&x)) return constant(-x);
    return unary(Op::Neg, *this);
  }
  Expr pow(double p) const {
    double x;
    if (p == 0.0) return constant(1.0);
    if (p == 1.0) return *this;
    if (is_const(&x)) return constant(std::pow(x, p));
    return binary_(Op::Pow, *this, constant(p));
  }
  static Expr unary(Op op, const Expr& a) { return Expr(std::make_shared<Node>(Node{op, 0.0, a.node_, nullptr})); }

 private:
  struct Node {
    Op op;
    double value;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Expr(NodePtr n) : node_(std::move(n)) {}

  static Expr binary_(Op op, const Expr& a, const Expr& b) {
    return Expr(std::make_shared<Node>(Node{op, 0.0, a.node_, b.node_}));
  }

  static double eval_(const Node& n, double r) {
    switch (n.op) {
      case Op::Const: return n.value;
      case Op::Var: return r;
      case Op::Add: return eval_(*n.a, r) + eval_(*n.b, r);
      case Op::Sub: return eval_(*n.a, r) - eval_(*n.b, r);
      case Op::Mul: return eval_(*n.a, r) * eval_(*n.b, r);
      case Op::Div: return eval_(*n.a, r) / eval_(*n.b, r);
      case Op::Pow: {
        const double base = eval_(*n.a, r);
        const double p = n.b->value;
        // Integer powers of negative bases are fine; profiles are also probed at -r.
        if (p == std::round(p)) return std::pow(base, static_cast<int>(p));
        return std::pow(base, p);
      }
      case Op::Neg: return -eval_(*n.a, r);
      case Op::Sinh: return std::sinh(eval_(*n.a, r));
      case Op::Cosh: return std::cosh(eval_(*n.a, r));
      case Op::Exp: return std::exp(eval_(*n.a, r));
      case Op::Sin: return std::sin(eval_(*n.a, r));
      case Op::Cos: return std::cos(eval_(*n.a, r));
      case Op::Sqrt: return std::sqrt(eval_(*n.a, r));
      case Op::Log: return std::log(eval_(*n.a, r));
    }
    return 0.0;
  }

  static Expr diff_(const NodePtr& p) {
    const Node& n = *p;
    const Expr a = n.a ? Expr(n.a) : constant(0.0);
    const Expr b = n.b ? Expr(n.b) : constant(0.0);
    const Expr da = n.a ? diff_(n.a) : constant(0.0);
    switch (n.op) {
      case Op::Const: return constant(0.0);
      case Op::Var: return constant(1.0);
      case Op::Add: return da + diff_(n.b);
      case Op::Sub: return da - diff_(n.b);
      case Op::Mul: return da * b + a * diff_(n.b);
      case Op::Div: return (da * b - a * diff_(n.b)) / b.pow(2.0);
      case Op::Pow: {
        const double q = n.b->value;
        return constant(q) * a.pow(q - 1.0) * da;
      }
      case Op::Neg: return -da;
      case Op::Sinh: return unary(Op::Cosh, a) * da;
      case Op::Cosh: return unary(Op::Sinh, a) * da;
      case Op::Exp: return unary(Op::Exp, a) * da;
      case Op::Sin: return unary(Op::Cos, a) * da;
      case Op::Cos: return -(unary(Op::Sin, a) * da);
      case Op::Sqrt: return da / (constant(2.0) * unary(Op::Sqrt, a));
      case Op::Log: return da / a;
    }
    return constant(0.0);
  }

  static std::string str_(const Node& n) {
    std::ostringstream os;
    auto fn = [&](const char* name) { os << name << "(" << str_(*n.a) << ")"; };
    switch (n.op) {
      case Op::Const: os << n.value; break;
      case Op::Var: os << "r"; break;
      case Op::Add: os << "(" << str_(*n.a) << " + " << str_(*n.b) << ")"; break;
      case Op::Sub: os << "(" << str_(*n.a) << " - " << str_(*n.b) << ")"; break;
      case Op::Mul: os << str_(*n.a) << "*" << str_(*n.b); break;
      case Op::Div: os << str_(*n.a) << "/(" << str_(*n.b) << ")"; break;
      case Op::Pow: os << "(" << str_(*n.a) << ")^" << n.b->value; break;
      case Op::Neg: os << "-(" << str_(*n.a) << ")"; break;
      case Op::Sinh: fn("sinh"); break;
      case Op::Cosh: fn("cosh"); break;
      case Op::Exp: fn("exp"); break;
      case Op::Sin: fn("sin"); break;
      case Op::Cos: fn("cos"); break;
      case Op::Sqrt: fn("sqrt"); break;
      case Op::Log: fn("log"); break;
    }
    return os.str();
  }

  NodePtr node_;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string text) : s_(std::move(text)) {}

  Expr parse() {
    Expr e = sum_();
    skip_();
    if (pos_ != s_.size()) fail_("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  Expr sum_() {
    Expr e = product_();
    for (;;) {
      skip_();
      if (eat_('+')) {
        e = e + product_();
      } else if (eat_('-')) {
        e = e - product_();
      } else {
        return e;
      }
    }
  }
  Expr product_() {
    Expr e = unary_();
    for (;;) {
      skip_();
      if (eat_('*')) {
        e = e * unary_();
      } else if (eat_('/')) {
        e = e / unary_();
      } else {
        return e;
      }
    }
  }
  Expr unary_() {
    skip_();
    if (eat_('-')) return -unary_();
    if (eat_('+')) return unary_();
    return power_();
  }
  Expr power_() {
    Expr base = primary_();
    skip_();
    if (eat_('^')) {
      skip_();
      bool neg = eat_('-');
      Expr ex = primary_();
      double p = 0.0;
      if (!ex.is_const(&p)) fail_("exponent must be a number");
      return base.pow(neg ? -p : p);
    }
    return base;
  }
  Expr primary_() {
    skip_();
    if (pos_ >= s_.size()) fail_("unexpected end of expression");
    const char c = s_[pos_];
    if (eat_('(')) {
      Expr e = sum_();
      skip_();
      if (!eat_(')')) fail_("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail_("bad number");
      }
      pos_ += used;
      return Expr::constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "r") return Expr::var();
      if (id == "pi") return Expr::constant(3.14159265358979323846);
      Expr::Op op;
      if (id == "sinh") op = Expr::Op::Sinh;
      else if (id == "cosh") op = Expr::Op::Cosh;
      else if (id == "exp") op = Expr::Op::Exp;
      else if (id == "sin") op = Expr::Op::Sin;
      else if (id == "cos") op = Expr::Op::Cos;
      else if (id == "sqrt") op = Expr::Op::Sqrt;
      else if (id == "log") op = Expr::Op::Log;
      else fail_("unknown identifier '" + id + "'");
      skip_();
      if (!eat_('(')) fail_("expected '(' after " + id);
      Expr arg = sum_();
      skip_();
      if (!eat_(')')) fail_("missing ')'");
      return Expr::unary(op, arg);
    }
    fail_("unexpected '" + std::string(1, c) + "'");
    return Expr::constant(0.0);
  }

  void skip_() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat_(char c) {
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail_(const std::string& msg) const {
    throw ParseError("expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expression(const std::string& text) { return detail::ExprParser(text).parse(); }

}  // namespace fraclap
