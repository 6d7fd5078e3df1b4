#include "ccurves/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <variant>

namespace ccurves {

struct Expr::Node
{
  struct Literal
  {
    double value;
  };
  struct Variable
  {
    std::string name;
    std::size_t index;
  };
  struct Constant
  {
    std::string name;
    double value;
  };
  struct Negate
  {
    std::shared_ptr<const Node> arg;
  };
  struct Binary
  {
    BinOp op;
    std::shared_ptr<const Node> lhs, rhs;
  };
  struct Call
  {
    Func fn;
    std::shared_ptr<const Node> arg;
  };

  std::variant<Literal, Variable, Constant, Negate, Binary, Call> data;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using N       = Expr::Node;

template <class T>
NodePtr make(T t)
{
  return std::make_shared<const N>(N{std::move(t)});
}

const char * func_name(Func f)
{
  switch (f) {
  case Func::Exp: return "exp";
  case Func::Ln: return "ln";
  case Func::Sin: return "sin";
  case Func::Cos: return "cos";
  case Func::Sqrt: return "sqrt";
  }
  return "?";
}

bool lookup_func(std::string_view name, Func & out)
{
  static constexpr std::pair<std::string_view, Func> table[] = {
    {"exp", Func::Exp}, {"ln", Func::Ln}, {"sin", Func::Sin}, {"cos", Func::Cos}, {"sqrt", Func::Sqrt}};
  for (const auto & [n, f] : table) {
    if (n == name) {
      out = f;
      return true;
    }
  }
  return false;
}

bool lookup_constant(std::string_view name, double & out)
{
  if (name == "pi") {
    out = std::numbers::pi;
    return true;
  }
  if (name == "e") {
    out = std::numbers::e;
    return true;
  }
  return false;
}

std::string format_double(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

UnknownIdentifier::UnknownIdentifier(std::size_t position, std::string name)
    : ParseError(position, "unknown identifier '" + name + "' at position " + std::to_string(position)),
      name_(std::move(name))
{}

class ExprParser
{
public:
  ExprParser(std::string_view text, std::span<const std::string> vars) : text_(text), vars_(vars) {}

  Expr run()
  {
    auto n = expr();
    skip_ws();
    if (pos_ != text_.size()) { fail("unexpected character '" + std::string(1, text_[pos_]) + "'"); }
    return Expr(n);
  }

private:
  std::string_view text_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string & msg) const
  {
    throw ParseError(pos_, "syntax error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws()
  {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) { ++pos_; }
  }

  bool accept(char c)
  {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr()
  {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(N::Binary{BinOp::Add, lhs, term()});
      } else if (accept('-')) {
        lhs = make(N::Binary{BinOp::Sub, lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term()
  {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(N::Binary{BinOp::Mul, lhs, unary()});
      } else if (accept('/')) {
        lhs = make(N::Binary{BinOp::Div, lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary()
  {
    if (accept('-')) { return make(N::Negate{unary()}); }
    return power();
  }

  NodePtr power()
  {
    auto base = primary();
    if (accept('^')) { return make(N::Binary{BinOp::Pow, base, unary()}); }
    return base;
  }

  NodePtr primary()
  {
    skip_ws();
    if (pos_ >= text_.size()) { fail("unexpected end of input"); }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      if (!accept(')')) { fail("expected ')'"); }
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') { return number(); }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') { return identifier(); }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number()
  {
    const std::size_t start = pos_;
    auto digits             = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t nd = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      nd += digits();
    }
    if (nd == 0) { fail("malformed number"); }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) { ++pos_; }
      if (digits() == 0) { pos_ = save; }
    }
    if (pos_ < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '(')) {
      fail("implicit multiplication is not supported");
    }
    const std::string tok(text_.substr(start, pos_ - start));
    return make(N::Literal{std::strtod(tok.c_str(), nullptr)});
  }

  NodePtr identifier()
  {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));

    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it != vars_.end()) {
      return make(N::Variable{name, static_cast<std::size_t>(it - vars_.begin())});
    }
    Func fn;
    if (lookup_func(name, fn)) {
      if (!accept('(')) { fail("expected '(' after " + name); }
      auto arg = expr();
      if (!accept(')')) { fail("expected ')'"); }
      return make(N::Call{fn, arg});
    }
    double value;
    if (lookup_constant(name, value)) { return make(N::Constant{name, value}); }
    throw UnknownIdentifier(start, name);
  }
};

namespace {

double apply(Func f, double x)
{
  switch (f) {
  case Func::Exp: return std::exp(x);
  case Func::Ln:
    if (!(x > 0.0)) { throw EvalError("ln of non-positive argument " + format_double(x)); }
    return std::log(x);
  case Func::Sin: return std::sin(x);
  case Func::Cos: return std::cos(x);
  case Func::Sqrt:
    if (x < 0.0) { throw EvalError("sqrt of negative argument " + format_double(x)); }
    return std::sqrt(x);
  }
  return 0.0;
}

template <class Lookup>
double eval_node(const N & n, const Lookup & var)
{
  return std::visit(
    [&](const auto & d) -> double {
      using T = std::decay_t<decltype(d)>;
      if constexpr (std::is_same_v<T, N::Literal>) {
        return d.value;
      } else if constexpr (std::is_same_v<T, N::Variable>) {
        return var(d);
      } else if constexpr (std::is_same_v<T, N::Constant>) {
        return d.value;
      } else if constexpr (std::is_same_v<T, N::Negate>) {
        return -eval_node(*d.arg, var);
      } else if constexpr (std::is_same_v<T, N::Call>) {
        return apply(d.fn, eval_node(*d.arg, var));
      } else {
        const double a = eval_node(*d.lhs, var);
        const double b = eval_node(*d.rhs, var);
        switch (d.op) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div:
          if (b == 0.0) { throw EvalError("division by zero"); }
          return a / b;
        case BinOp::Pow: {
          const double r = std::pow(a, b);
          if (std::isnan(r)) {
            throw EvalError("power " + format_double(a) + "^" + format_double(b) + " is undefined");
          }
          return r;
        }
        }
        return 0.0;
      }
    },
    n.data);
}

bool equal(const N & a, const N & b)
{
  if (a.data.index() != b.data.index()) { return false; }
  return std::visit(
    [&](const auto & x) -> bool {
      using T       = std::decay_t<decltype(x)>;
      const auto & y = std::get<T>(b.data);
      if constexpr (std::is_same_v<T, N::Literal>) {
        return x.value == y.value;
      } else if constexpr (std::is_same_v<T, N::Variable>) {
        return x.name == y.name && x.index == y.index;
      } else if constexpr (std::is_same_v<T, N::Constant>) {
        return x.name == y.name;
      } else if constexpr (std::is_same_v<T, N::Negate>) {
        return equal(*x.arg, *y.arg);
      } else if constexpr (std::is_same_v<T, N::Call>) {
        return x.fn == y.fn && equal(*x.arg, *y.arg);
      } else {
        return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
      }
    },
    a.data);
}

NodePtr bind_node(const NodePtr & n, const std::string & name, double value)
{
  return std::visit(
    [&](const auto & d) -> NodePtr {
      using T = std::decay_t<decltype(d)>;
      if constexpr (std::is_same_v<T, N::Variable>) {
        return d.name == name ? make(N::Literal{value}) : n;
      } else if constexpr (std::is_same_v<T, N::Negate>) {
        return make(N::Negate{bind_node(d.arg, name, value)});
      } else if constexpr (std::is_same_v<T, N::Call>) {
        return make(N::Call{d.fn, bind_node(d.arg, name, value)});
      } else if constexpr (std::is_same_v<T, N::Binary>) {
        return make(N::Binary{d.op, bind_node(d.lhs, name, value), bind_node(d.rhs, name, value)});
      } else {
        return n;
      }
    },
    n->data);
}

void collect(const N & n, std::set<std::string> & out)
{
  std::visit(
    [&](const auto & d) {
      using T = std::decay_t<decltype(d)>;
      if constexpr (std::is_same_v<T, N::Variable>) {
        out.insert(d.name);
      } else if constexpr (std::is_same_v<T, N::Negate> || std::is_same_v<T, N::Call>) {
        collect(*d.arg, out);
      } else if constexpr (std::is_same_v<T, N::Binary>) {
        collect(*d.lhs, out);
        collect(*d.rhs, out);
      }
    },
    n.data);
}

// Precedence levels used by the printer.
constexpr int kAdd = 1, kMul = 2, kUnary = 3, kPow = 4, kAtom = 5;

int precedence(const N & n)
{
  if (const auto * b = std::get_if<N::Binary>(&n.data)) {
    switch (b->op) {
    case BinOp::Add:
    case BinOp::Sub: return kAdd;
    case BinOp::Mul:
    case BinOp::Div: return kMul;
    case BinOp::Pow: return kPow;
    }
  }
  if (std::holds_alternative<N::Negate>(n.data)) { return kUnary; }
  return kAtom;
}

std::string render(const N & n);

std::string wrap(const N & n, bool paren)
{
  return paren ? "(" + render(n) + ")" : render(n);
}

std::string render(const N & n)
{
  return std::visit(
    [&](const auto & d) -> std::string {
      using T = std::decay_t<decltype(d)>;
      if constexpr (std::is_same_v<T, N::Literal>) {
        return std::signbit(d.value) ? "(" + format_double(d.value) + ")" : format_double(d.value);
      } else if constexpr (std::is_same_v<T, N::Variable> || std::is_same_v<T, N::Constant>) {
        return d.name;
      } else if constexpr (std::is_same_v<T, N::Negate>) {
        return "-" + wrap(*d.arg, precedence(*d.arg) < kUnary);
      } else if constexpr (std::is_same_v<T, N::Call>) {
        return std::string(func_name(d.fn)) + "(" + render(*d.arg) + ")";
      } else {
        const int p = precedence(n);
        if (d.op == BinOp::Pow) {
          return wrap(*d.lhs, precedence(*d.lhs) <= kPow) + "^" + wrap(*d.rhs, precedence(*d.rhs) < kPow);
        }
        const char * sym = d.op == BinOp::Add ? " + " : d.op == BinOp::Sub ? " - " : d.op == BinOp::Mul ? "*" : "/";
        return wrap(*d.lhs, precedence(*d.lhs) < p) + sym + wrap(*d.rhs, precedence(*d.rhs) <= p);
      }
    },
    n.data);
}

}  // namespace

Expr::Expr() : root_(make(N::Literal{0.0})) {}

Expr Expr::literal(double v) { return Expr(make(N::Literal{v})); }

Expr Expr::parse(std::string_view text, std::span<const std::string> vars)
{
  return ExprParser(text, vars).run();
}

double Expr::eval(std::span<const double> values) const
{
  return eval_node(*root_, [&](const N::Variable & v) -> double {
    if (v.index >= values.size()) { throw EvalError("variable '" + v.name + "' is unbound"); }
    return values[v.index];
  });
}

double Expr::eval(const std::map<std::string, double> & env) const
{
  return eval_node(*root_, [&](const N::Variable & v) -> double {
    const auto it = env.find(v.name);
    if (it == env.end()) { throw EvalError("variable '" + v.name + "' is unbound"); }
    return it->second;
  });
}

Expr Expr::bind(const std::string & name, double value) const { return Expr(bind_node(root_, name, value)); }

std::set<std::string> Expr::variables() const
{
  std::set<std::string> out;
  collect(*root_, out);
  return out;
}

std::string Expr::str() const { return render(*root_); }

bool Expr::operator==(const Expr & other) const { return equal(*root_, *other.root_); }

double eval_constant(std::string_view text) { return Expr::parse(text).eval(std::span<const double>{}); }

}  // namespace ccurves
