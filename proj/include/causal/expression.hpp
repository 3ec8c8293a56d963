// Expression language for user-defined defining functions G(x, v).
// Variables are x1..xn and v1..vn; operators + - * / ^ with conventional
// precedence (^ right-associative and tighter than unary minus); functions
// exp, log, sqrt, sin, cos, pow.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "causal/dual2.hpp"
#include "causal/scalar_field.hpp"

namespace causal {

struct ParseError : ValidationError {
  size_t position;  // byte offset into the source
  ParseError(const std::string& msg, size_t pos)
      : ValidationError(msg + " at offset " + std::to_string(pos)), position(pos) {}
};

enum class ExprKind { Literal, VarX, VarV, Add, Sub, Mul, Div, Neg, Pow, Call };
enum class Func { Exp, Log, Sqrt, Sin, Cos, Pow };

struct Expression {
  ExprKind kind;
  double literal = 0.0;
  int var = 0;  // 0-based coordinate index for VarX / VarV
  Func func = Func::Exp;
  std::vector<std::unique_ptr<Expression>> args;  // operands / call arguments

  template <typename T>
  T eval(const std::vector<T>& x, const std::vector<T>& v) const;
};

using ExprPtr = std::unique_ptr<Expression>;

// Parses src for dimension n; throws ParseError with byte offset on bad input.
ExprPtr parse_expression(const std::string& src, int n);

std::string pretty_print(const Expression& e);

// Wraps a parsed expression (plus optional domain inequalities, each the
// left-hand side of "expr > 0") as a ScalarField.
ScalarField expression_field(std::shared_ptr<const Expression> expr, int n,
                             std::vector<std::shared_ptr<const Expression>> domain = {});

template <typename T>
T Expression::eval(const std::vector<T>& x, const std::vector<T>& v) const {
  switch (kind) {
    case ExprKind::Literal:
      // x[0] * 0 keeps the scalar's ring/shape while zeroing it.
      return x[0] * 0.0 + literal;
    case ExprKind::VarX:
      return x[static_cast<size_t>(var)];
    case ExprKind::VarV:
      return v[static_cast<size_t>(var)];
    case ExprKind::Add:
      return args[0]->eval(x, v) + args[1]->eval(x, v);
    case ExprKind::Sub:
      return args[0]->eval(x, v) - args[1]->eval(x, v);
    case ExprKind::Mul:
      return args[0]->eval(x, v) * args[1]->eval(x, v);
    case ExprKind::Div:
      return args[0]->eval(x, v) / args[1]->eval(x, v);
    case ExprKind::Neg:
      return -args[0]->eval(x, v);
    case ExprKind::Pow:
      if (args[1]->kind == ExprKind::Literal) return pow(args[0]->eval(x, v), args[1]->literal);
      if (args[1]->kind == ExprKind::Neg && args[1]->args[0]->kind == ExprKind::Literal)
        return pow(args[0]->eval(x, v), -args[1]->args[0]->literal);
      return pow(args[0]->eval(x, v), args[1]->eval(x, v));
    case ExprKind::Call:
      switch (func) {
        case Func::Exp:
          return exp(args[0]->eval(x, v));
        case Func::Log:
          return log(args[0]->eval(x, v));
        case Func::Sqrt:
          return sqrt(args[0]->eval(x, v));
        case Func::Sin:
          return sin(args[0]->eval(x, v));
        case Func::Cos:
          return cos(args[0]->eval(x, v));
        case Func::Pow:
          if (args[1]->kind == ExprKind::Literal)
            return pow(args[0]->eval(x, v), args[1]->literal);
          return pow(args[0]->eval(x, v), args[1]->eval(x, v));
      }
  }
  throw ValidationError("expression: corrupt AST");
}

}  // namespace causal
