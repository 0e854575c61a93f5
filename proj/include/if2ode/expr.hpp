#pragma once

#include <array>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "if2ode/errors.hpp"

namespace if2ode {

enum class Op { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };

enum class Func { Exp, Ln, Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt, Abs };

std::string_view func_name(Func f);
std::optional<Func> func_from_name(std::string_view name);

/// Immutable expression tree in the single variable x. Copies share nodes.
class Expr {
 public:
  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable();
  static Expr add(Expr lhs, Expr rhs);
  static Expr sub(Expr lhs, Expr rhs);
  static Expr mul(Expr lhs, Expr rhs);
  static Expr div(Expr lhs, Expr rhs);
  static Expr pow(Expr base, Expr exponent);
  static Expr neg(Expr operand);
  static Expr call(Func f, Expr arg);

  Op op() const noexcept;
  /// Only meaningful for Op::Constant.
  double value() const noexcept;
  /// Only meaningful for Op::Call.
  Func func() const noexcept;
  std::size_t arity() const noexcept;
  const Expr& child(std::size_t i) const;

  bool is_constant() const noexcept { return op() == Op::Constant; }
  bool is_constant(double v) const noexcept {
    return is_constant() && value() == v;
  }

  /// Structural equality (constants compared bitwise by value).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses the coefficient grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' factor)?
///   base   := NUMBER | 'x' | IDENT '(' expr ')' | '(' expr ')'
/// Numbers are unsigned, so parsed constants are never negative.
Expr parse(std::string_view text);

/// Prints with the minimal parentheses needed for parse(print(e)) == e.
/// Holds for every tree whose constants are finite and non-negative; negative
/// constants are printed parenthesised and reparse as Neg.
std::string print(const Expr& e);

Complex evaluate(const Expr& e, Complex x);
double evaluate_real(const Expr& e, double x);

Expr differentiate(const Expr& e);

/// Constant folding, 0/1 identities, Neg flattening, x - x -> 0.
Expr simplify(const Expr& e);

struct Interval {
  double a = 0.0;
  double b = 1.0;
  double length() const noexcept { return b - a; }
  bool contains(double x) const noexcept { return x >= a && x <= b; }
};

/// Returns the constant value of `e` on the interval if it is constant within
/// `tol`. Tries symbolic simplification first, then 64 Chebyshev samples.
std::optional<double> detect_constant(const Expr& e, Interval iv,
                                      double tol = 1e-9);

/// Result of the sampling step of detect_constant, kept for diagnostics.
struct ConstancySamples {
  std::vector<double> x;
  std::vector<Complex> values;
  double spread = 0.0;
  Complex mean{};
};
ConstancySamples sample_chebyshev(const Expr& e, Interval iv,
                                  std::size_t count = 64);

}  // namespace if2ode
