#include "annulus/expr.hpp"

#include <charconv>
#include <cstring>
#include <optional>
#include <utility>
#include <cmath>
#include <cstdio>

namespace annulus::expr {

namespace {

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::optional<Function> lookup_function(std::string_view name) {
  static constexpr std::pair<std::string_view, Function> table[] = {
      {"sin", Function::Sin},   {"cos", Function::Cos},   {"tan", Function::Tan},
      {"exp", Function::Exp},   {"log", Function::Log},   {"sqrt", Function::Sqrt},
      {"abs", Function::Abs},   {"sign", Function::Sign},
  };
  for (const auto& [n, f] : table) {
    if (n == name) return f;
  }
  return std::nullopt;
}

std::optional<double> fold_binary(NodeKind kind, double a, double b) {
  double r = 0.0;
  switch (kind) {
    case NodeKind::Add: r = a + b; break;
    case NodeKind::Sub: r = a - b; break;
    case NodeKind::Mul: r = a * b; break;
    case NodeKind::Div: r = a / b; break;
    case NodeKind::Pow: r = std::pow(a, b); break;
    default: return std::nullopt;
  }
  if (!std::isfinite(r)) return std::nullopt;
  return r;
}

double apply(Function f, double u) {
  switch (f) {
    case Function::Sin: return std::sin(u);
    case Function::Cos: return std::cos(u);
    case Function::Tan: return std::tan(u);
    case Function::Exp: return std::exp(u);
    case Function::Log:
      if (!(u > 0.0)) throw Error(ErrorKind::Domain, "log of non-positive value");
      return std::log(u);
    case Function::Sqrt:
      if (u < 0.0) throw Error(ErrorKind::Domain, "sqrt of negative value");
      return std::sqrt(u);
    case Function::Abs: return std::abs(u);
    case Function::Sign: return static_cast<double>((u > 0.0) - (u < 0.0));
  }
  return 0.0;
}

class Parser {
 public:
  Parser(std::string_view source, const Variables& vars)
      : source_(source), tokens_(tokenize(source)), vars_(vars) {}

  Expr run() {
    Expr e = sum();
    if (pos_ != tokens_.size()) fail("unexpected token '" + tokens_[pos_].text + "'");
    return e;
  }

 private:
  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }
  std::size_t offset() const { return pos_ < tokens_.size() ? tokens_[pos_].offset : source_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Syntax, "syntax error at offset " + std::to_string(offset()) + ": " + what,
                offset());
  }

  bool accept_op(char op) {
    const Token* t = peek();
    if (t && t->kind == TokenKind::Op && t->text[0] == op) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(TokenKind kind, const char* what) {
    const Token* t = peek();
    if (!t || t->kind != kind) fail(std::string("expected ") + what);
    ++pos_;
  }

  Expr sum() {
    Expr lhs = product();
    for (;;) {
      if (accept_op('+')) {
        lhs = Expr::binary(NodeKind::Add, lhs, product());
      } else if (accept_op('-')) {
        lhs = Expr::binary(NodeKind::Sub, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  Expr product() {
    Expr lhs = unary();
    for (;;) {
      if (accept_op('*')) {
        lhs = Expr::binary(NodeKind::Mul, lhs, unary());
      } else if (accept_op('/')) {
        lhs = Expr::binary(NodeKind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept_op('-')) return Expr::negate(unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept_op('^')) return Expr::binary(NodeKind::Pow, base, unary());
    return base;
  }

  Expr primary() {
    const Token* t = peek();
    if (!t) fail("unexpected end of input");
    switch (t->kind) {
      case TokenKind::Number:
        ++pos_;
        return Expr::constant(t->value);
      case TokenKind::LParen: {
        ++pos_;
        Expr inner = sum();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      case TokenKind::Ident: {
        const Token ident = *t;
        ++pos_;
        const Token* next = peek();
        if (next && next->kind == TokenKind::LParen) {
          auto f = lookup_function(ident.text);
          if (!f) {
            throw Error(ErrorKind::UnknownFunction, "unknown function '" + ident.text + "' at offset " +
                                                        std::to_string(ident.offset),
                        ident.offset);
          }
          ++pos_;
          Expr arg = sum();
          expect(TokenKind::RParen, "')'");
          return Expr::call(*f, arg);
        }
        for (std::size_t i = 0; i < vars_.names.size(); ++i) {
          if (vars_.names[i] == ident.text) return Expr::variable(static_cast<int>(i));
        }
        throw Error(ErrorKind::UnknownVariable,
                    "unknown variable '" + ident.text + "' at offset " + std::to_string(ident.offset),
                    ident.offset);
      }
      default:
        fail("unexpected token '" + t->text + "'");
    }
  }

  std::string_view source_;
  std::vector<Token> tokens_;
  const Variables& vars_;
  std::size_t pos_ = 0;
};

// Differentiation helpers: literal folding plus the 0/1 identities that keep
// derivative trees from growing without bound.
Expr add(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(NodeKind::Add, a, b);
}
Expr sub(const Expr& a, const Expr& b) {
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return Expr::negate(b);
  return Expr::binary(NodeKind::Sub, a, b);
}
Expr mul(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  return Expr::binary(NodeKind::Mul, a, b);
}
Expr div(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0)) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  return Expr::binary(NodeKind::Div, a, b);
}
Expr pow(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  return Expr::binary(NodeKind::Pow, a, b);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (v < 0.0) return "(" + s + ")";
  return s;
}

}  // namespace

const char* function_name(Function f) {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Tan: return "tan";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sqrt: return "sqrt";
    case Function::Abs: return "abs";
    case Function::Sign: return "sign";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < source.size()) {
    const char c = source[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < source.size() && is_digit(source[i + 1]))) {
      std::size_t j = i;
      while (j < source.size() && (is_digit(source[j]) || source[j] == '.')) ++j;
      if (j < source.size() && (source[j] == 'e' || source[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < source.size() && (source[k] == '+' || source[k] == '-')) ++k;
        if (k < source.size() && is_digit(source[k])) {
          while (k < source.size() && is_digit(source[k])) ++k;
          j = k;
        }
      }
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(source.data() + i, source.data() + j, value);
      if (ec != std::errc() || ptr != source.data() + j) {
        throw Error(ErrorKind::Lexical, "malformed number at offset " + std::to_string(i), i);
      }
      out.push_back({TokenKind::Number, std::string(source.substr(i, j - i)), value, i});
      i = j;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < source.size() && (is_ident_start(source[j]) || is_digit(source[j]))) ++j;
      out.push_back({TokenKind::Ident, std::string(source.substr(i, j - i)), 0.0, i});
      i = j;
      continue;
    }
    switch (c) {
      case '+':
      case '-':
      case '*':
      case '/':
      case '^':
        out.push_back({TokenKind::Op, std::string(1, c), 0.0, i});
        break;
      case '(':
        out.push_back({TokenKind::LParen, "(", 0.0, i});
        break;
      case ')':
        out.push_back({TokenKind::RParen, ")", 0.0, i});
        break;
      case ',':
        out.push_back({TokenKind::Comma, ",", 0.0, i});
        break;
      default:
        throw Error(ErrorKind::Lexical,
                    "unexpected character '" + std::string(1, c) + "' at offset " + std::to_string(i), i);
    }
    ++i;
  }
  return out;
}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->variable = index;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  if (operand.is_constant()) return constant(-operand.value());
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Neg;
  n->lhs = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(NodeKind kind, Expr lhs, Expr rhs) {
  if (lhs.is_constant() && rhs.is_constant()) {
    if (auto folded = fold_binary(kind, lhs.value(), rhs.value())) return constant(*folded);
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::call(Function f, Expr argument) {
  if (argument.is_constant()) {
    try {
      const double r = apply(f, argument.value());
      if (std::isfinite(r)) return constant(r);
    } catch (const Error&) {
      // leave unfolded; evaluation reports the domain error
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Call;
  n->function = f;
  n->lhs = std::move(argument);
  return Expr(std::move(n));
}

NodeKind Expr::kind() const { return node_ ? node_->kind : NodeKind::Constant; }
double Expr::value() const { return node_ ? node_->value : 0.0; }
int Expr::variable() const { return node_->variable; }
Function Expr::function() const { return node_->function; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }

bool Expr::same_as(const Expr& other) const {
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case NodeKind::Constant: {
      const double a = value(), b = other.value();
      return std::memcmp(&a, &b, sizeof a) == 0;
    }
    case NodeKind::Variable: return variable() == other.variable();
    case NodeKind::Neg: return lhs().same_as(other.lhs());
    case NodeKind::Call: return function() == other.function() && lhs().same_as(other.lhs());
    default: return lhs().same_as(other.lhs()) && rhs().same_as(other.rhs());
  }
}

Expr parse(std::string_view source, const Variables& vars) { return Parser(source, vars).run(); }

namespace {

double eval_node(const Expr& e, double x, double y) {
  switch (e.kind()) {
    case NodeKind::Constant: return e.value();
    case NodeKind::Variable: return e.variable() == 0 ? x : y;
    case NodeKind::Neg: return -eval_node(e.lhs(), x, y);
    case NodeKind::Add: return eval_node(e.lhs(), x, y) + eval_node(e.rhs(), x, y);
    case NodeKind::Sub: return eval_node(e.lhs(), x, y) - eval_node(e.rhs(), x, y);
    case NodeKind::Mul: return eval_node(e.lhs(), x, y) * eval_node(e.rhs(), x, y);
    case NodeKind::Div: {
      const double num = eval_node(e.lhs(), x, y);
      const double den = eval_node(e.rhs(), x, y);
      if (den == 0.0) throw Error(ErrorKind::Domain, "division by zero");
      return num / den;
    }
    case NodeKind::Pow: {
      const double base = eval_node(e.lhs(), x, y);
      const double ex = eval_node(e.rhs(), x, y);
      if (ex == 2.0) return base * base;
      if (ex == 3.0) return base * base * base;
      return std::pow(base, ex);
    }
    case NodeKind::Call: return apply(e.function(), eval_node(e.lhs(), x, y));
  }
  return 0.0;
}

}  // namespace

double evaluate(const Expr& e, double x, double y) {
  const double r = eval_node(e, x, y);
  if (!std::isfinite(r)) throw Error(ErrorKind::Domain, "non-finite result");
  return r;
}

Expr differentiate(const Expr& e, int var) {
  switch (e.kind()) {
    case NodeKind::Constant: return Expr::constant(0.0);
    case NodeKind::Variable: return Expr::constant(e.variable() == var ? 1.0 : 0.0);
    case NodeKind::Neg: {
      Expr d = differentiate(e.lhs(), var);
      return d.is_constant(0.0) ? d : Expr::negate(d);
    }
    case NodeKind::Add: return add(differentiate(e.lhs(), var), differentiate(e.rhs(), var));
    case NodeKind::Sub: return sub(differentiate(e.lhs(), var), differentiate(e.rhs(), var));
    case NodeKind::Mul: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      return add(mul(differentiate(u, var), v), mul(u, differentiate(v, var)));
    }
    case NodeKind::Div: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      Expr du = differentiate(u, var);
      Expr dv = differentiate(v, var);
      if (dv.is_constant(0.0)) return div(du, v);
      return div(sub(mul(du, v), mul(u, dv)), pow(v, Expr::constant(2.0)));
    }
    case NodeKind::Pow: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      Expr du = differentiate(u, var);
      Expr dv = differentiate(v, var);
      if (dv.is_constant(0.0)) {
        // d(u^c) = c u^(c-1) u'
        Expr c_minus_one = Expr::binary(NodeKind::Sub, v, Expr::constant(1.0));
        return mul(mul(v, pow(u, c_minus_one)), du);
      }
      // d(u^v) = u^v (v' log u + v u'/u)
      Expr log_u = Expr::call(Function::Log, u);
      return mul(e, add(mul(dv, log_u), div(mul(v, du), u)));
    }
    case NodeKind::Call: {
      const Expr& u = e.lhs();
      Expr du = differentiate(u, var);
      if (du.is_constant(0.0)) return du;
      Expr outer;
      switch (e.function()) {
        case Function::Sin: outer = Expr::call(Function::Cos, u); break;
        case Function::Cos: outer = Expr::negate(Expr::call(Function::Sin, u)); break;
        case Function::Tan: {
          Expr c = Expr::call(Function::Cos, u);
          outer = div(Expr::constant(1.0), pow(c, Expr::constant(2.0)));
          break;
        }
        case Function::Exp: outer = e; break;
        case Function::Log: outer = div(Expr::constant(1.0), u); break;
        case Function::Sqrt: outer = div(Expr::constant(0.5), e); break;
        case Function::Abs: outer = Expr::call(Function::Sign, u); break;
        case Function::Sign: return Expr::constant(0.0);
      }
      return mul(outer, du);
    }
  }
  return Expr::constant(0.0);
}

std::string to_string(const Expr& e, const Variables& vars) {
  switch (e.kind()) {
    case NodeKind::Constant: return format_number(e.value());
    case NodeKind::Variable: return vars.names.at(static_cast<std::size_t>(e.variable()));
    case NodeKind::Neg: return "(-" + to_string(e.lhs(), vars) + ")";
    case NodeKind::Call:
      return std::string(function_name(e.function())) + "(" + to_string(e.lhs(), vars) + ")";
    default: break;
  }
  const char* op = "?";
  switch (e.kind()) {
    case NodeKind::Add: op = " + "; break;
    case NodeKind::Sub: op = " - "; break;
    case NodeKind::Mul: op = " * "; break;
    case NodeKind::Div: op = " / "; break;
    case NodeKind::Pow: op = " ^ "; break;
    default: break;
  }
  return "(" + to_string(e.lhs(), vars) + op + to_string(e.rhs(), vars) + ")";
}

}  // namespace annulus::expr
