#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace rlve::expr {

using Rational = boost::multiprecision::cpp_rational;

enum class Op { Const, Var, Neg, Sin, Cos, Exp, Log, Sqrt, Add, Sub, Mul, Div, Pow };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  Rational value;     // Const only
  int exponent = 0;   // Pow only
  Expr lhs;           // unary operand, binary left, Pow base
  Expr rhs;           // binary right
};

bool is_unary(Op op);
bool is_binary(Op op);

// Raw constructors: no simplification, so node counts are exactly what the
// caller built.
Expr make_const(Rational value);
Expr make_var();
Expr make_unary(Op op, Expr operand);
Expr make_binary(Op op, Expr lhs, Expr rhs);
Expr make_pow(Expr base, int exponent);

// Simplifying constructors used by differentiation: constant folding plus the
// identities for 0 and 1.
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr neg(Expr a);
Expr power(Expr base, int exponent);
Expr apply(Op fn, Expr operand);

std::size_t node_count(const Expr& e);
bool contains_variable(const Expr& e);
bool is_constant_value(const Expr& e, long value);

/// Evaluates at x. nullopt on a domain error (log of non-positive, sqrt of
/// negative, division by zero) or a non-finite intermediate.
std::optional<double> evaluate(const Expr& e, double x);

Expr differentiate(const Expr& e);

/// Infix rendering with explicit `*`, `pow(base, n)` for integer powers and
/// the function names sin, cos, exp, log, sqrt.
std::string render(const Expr& e);

/// Parses the rendering dialect. Also accepts `**` with an integer or
/// half-integer exponent and the constant `E`. nullopt on any syntax error or
/// when the input exceeds the size limits.
std::optional<Expr> parse(std::string_view text);

}  // namespace rlve::expr
