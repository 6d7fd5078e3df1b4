#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccurves/numerics.hpp"

namespace ccurves {

class ParseError : public Error
{
public:
  ParseError(std::size_t position, const std::string & what) : Error(what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class UnknownIdentifier : public ParseError
{
public:
  UnknownIdentifier(std::size_t position, std::string name);
  const std::string & name() const noexcept { return name_; }

private:
  std::string name_;
};

class EvalError : public Error
{
public:
  using Error::Error;
};

enum class Func { Exp, Ln, Sin, Cos, Sqrt };
enum class BinOp { Add, Sub, Mul, Div, Pow };

/**
 * Immutable arithmetic expression over a fixed list of named variables.
 *
 * Grammar (whitespace-insensitive):
 *
 *     expr    := term (('+' | '-') term)*
 *     term    := unary (('*' | '/') unary)*
 *     unary   := '-' unary | power
 *     power   := primary ('^' unary)?
 *     primary := number | name | func '(' expr ')' | '(' expr ')'
 *
 * `^` is right-associative and binds tighter than unary minus, so `-x^2` is `-(x^2)`.
 * Functions: exp, ln, sin, cos, sqrt. Predefined constants: pi, e (a declared variable
 * with the same name shadows the constant). Implicit multiplication is not accepted.
 */
class Expr
{
public:
  struct Node;

  Expr();  // literal 0
  static Expr literal(double v);
  static Expr parse(std::string_view text, std::span<const std::string> vars = {});

  /// Evaluate with variable values given in declaration order.
  double eval(std::span<const double> values) const;
  double eval(const std::map<std::string, double> & env) const;

  /// Replace every occurrence of variable `name` by a literal.
  Expr bind(const std::string & name, double value) const;

  std::set<std::string> variables() const;
  bool is_constant() const { return variables().empty(); }

  /// Minimal-parenthesis rendering; literals print with 17 significant digits.
  std::string str() const;

  bool operator==(const Expr & other) const;

  const Node & root() const { return *root_; }

private:
  explicit Expr(std::shared_ptr<const Node> n) : root_(std::move(n)) {}
  std::shared_ptr<const Node> root_;

  friend class ExprParser;
  friend struct ExprBuilder;
};

inline Expr parse_expr(std::string_view text, std::span<const std::string> vars = {})
{
  return Expr::parse(text, vars);
}

inline double eval(const Expr & e, const std::map<std::string, double> & env) { return e.eval(env); }

/// Parse a closed expression (constants only) and evaluate it, e.g. "3*pi/4".
double eval_constant(std::string_view text);

}  // namespace ccurves
