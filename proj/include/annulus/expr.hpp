#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "annulus/types.hpp"

/// Expression trees for user-supplied scalar functions of two variables.
///
/// Grammar (lowest to highest precedence):
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?        right associative
///   primary := number | variable | function '(' sum ')' | '(' sum ')'
///
/// Unary minus binds looser than '^', so "-x^2" is -(x^2).
namespace annulus::expr {

enum class TokenKind { Number, Ident, Op, LParen, RParen, Comma };

struct Token {
  TokenKind kind;
  std::string text;
  double value = 0.0;
  std::size_t offset = 0;

  bool operator==(const Token&) const = default;
};

std::vector<Token> tokenize(std::string_view source);

enum class NodeKind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Function { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sign };

const char* function_name(Function f);

struct Node;

/// Immutable, shareable expression handle. Copies share structure.
class Expr {
 public:
  /// The empty handle stands for the constant 0.
  Expr() = default;

  static Expr constant(double value);
  static Expr variable(int index);
  static Expr negate(Expr operand);
  static Expr binary(NodeKind kind, Expr lhs, Expr rhs);
  static Expr call(Function f, Expr argument);

  NodeKind kind() const;
  double value() const;    // Constant only
  int variable() const;    // Variable only
  Function function() const;  // Call only
  const Expr& lhs() const;    // Neg, Call: the operand
  const Expr& rhs() const;

  bool is_constant() const { return kind() == NodeKind::Constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  /// Structural equality (same tree shape, same literals bit-for-bit).
  bool same_as(const Expr& other) const;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;
  int variable = 0;
  Function function = Function::Sin;
  Expr lhs;
  Expr rhs;
};

/// Names bound to variable slots 0 and 1. Field definitions use {"x", "y"};
/// section curves use a single parameter {"s"}.
struct Variables {
  std::vector<std::string> names{"x", "y"};
};

Expr parse(std::string_view source, const Variables& vars = {});

/// Evaluates with IEEE doubles. Throws Error(Domain) on log/sqrt outside their
/// domain, division by zero, or a non-finite result.
double evaluate(const Expr& e, double x, double y = 0.0);

/// Symbolic partial derivative with respect to variable slot `var`.
/// Only literal arithmetic is folded. d|u| uses sign(0) = 0.
Expr differentiate(const Expr& e, int var);

/// Fully parenthesized text that parses back to the same tree.
std::string to_string(const Expr& e, const Variables& vars = {});

}  // namespace annulus::expr
