#include "if2ode/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

namespace if2ode {

struct Expr::Node {
  Op op = Op::Constant;
  double value = 0.0;
  Func func = Func::Exp;
  std::vector<Expr> children;
};

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 10> kFuncNames{{
    {"exp", Func::Exp},
    {"ln", Func::Ln},
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"tanh", Func::Tanh},
    {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
}};

}  // namespace

std::string_view func_name(Func f) {
  for (const auto& [name, id] : kFuncNames)
    if (id == f) return name;
  return "?";
}

std::optional<Func> func_from_name(std::string_view name) {
  for (const auto& [n, id] : kFuncNames)
    if (n == name) return id;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Construction

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  static const Expr x = [] {
    auto n = std::make_shared<Node>();
    n->op = Op::Variable;
    return Expr(std::move(n));
  }();
  return x;
}

#define IF2ODE_BINARY(name, opcode)                  \
  Expr Expr::name(Expr lhs, Expr rhs) {              \
    auto n = std::make_shared<Node>();               \
    n->op = opcode;                                  \
    n->children = {std::move(lhs), std::move(rhs)};  \
    return Expr(std::move(n));                       \
  }

IF2ODE_BINARY(add, Op::Add)
IF2ODE_BINARY(sub, Op::Sub)
IF2ODE_BINARY(mul, Op::Mul)
IF2ODE_BINARY(div, Op::Div)
IF2ODE_BINARY(pow, Op::Pow)
#undef IF2ODE_BINARY

Expr Expr::neg(Expr operand) {
  auto n = std::make_shared<Node>();
  n->op = Op::Neg;
  n->children = {std::move(operand)};
  return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->op = Op::Call;
  n->func = f;
  n->children = {std::move(arg)};
  return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
Func Expr::func() const noexcept { return node_->func; }
std::size_t Expr::arity() const noexcept { return node_->children.size(); }
const Expr& Expr::child(std::size_t i) const { return node_->children.at(i); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.arity() != b.arity()) return false;
  if (a.op() == Op::Constant) return a.value() == b.value();
  if (a.op() == Op::Call && a.func() != b.func()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.child(i) == b.child(i))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == text_.size()) fail("expression");
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("operator or end of input");
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::string describe_here() const {
    if (pos_ >= text_.size()) return "end of input";
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() &&
             std::isalnum(static_cast<unsigned char>(text_[end])))
        ++end;
      return "'" + std::string(text_.substr(pos_, end - pos_)) + "'";
    }
    return std::string("'") + c + "'";
  }

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(pos_, expected, describe_here());
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        lhs = Expr::add(std::move(lhs), parse_term());
      } else if (c == '-') {
        ++pos_;
        lhs = Expr::sub(std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        lhs = Expr::mul(std::move(lhs), parse_factor());
      } else if (c == '/') {
        ++pos_;
        lhs = Expr::div(std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    if (peek() == '-') {
      ++pos_;
      return Expr::neg(parse_factor());
    }
    Expr base = parse_base();
    if (peek() == '^') {
      ++pos_;
      return Expr::pow(std::move(base), parse_factor());
    }
    return base;
  }

  Expr parse_base() {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalnum(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == "x") return Expr::variable();
      const auto f = func_from_name(ident);
      if (!f) {
        pos_ = start;
        fail("'x', a number, a function name or '('");
      }
      expect('(');
      Expr arg = parse_expr();
      expect(')');
      return Expr::call(*f, std::move(arg));
    }
    fail("'x', a number, a function name or '('");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        ++pos_;
      if (digits() == 0) pos_ = save;  // 'e' not followed by an exponent
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      pos_ = start;
      fail("number");
    }
    return Expr::constant(value);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("'") + c + "'");
    ++pos_;
  }
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Constant:
      return e.value() < 0 || std::signbit(e.value()) ? 0 : 5;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print_to(const Expr& e, std::string& out);

void print_operand(const Expr& e, int min_prec, std::string& out) {
  if (precedence(e) < min_prec) {
    out += '(';
    print_to(e, out);
    out += ')';
  } else {
    print_to(e, out);
  }
}

void print_to(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::Constant:
      out += format_number(e.value());
      return;
    case Op::Variable:
      out += 'x';
      return;
    case Op::Add:
    case Op::Sub:
      print_operand(e.child(0), 1, out);
      out += e.op() == Op::Add ? " + " : " - ";
      print_operand(e.child(1), 2, out);
      return;
    case Op::Mul:
    case Op::Div:
      print_operand(e.child(0), 2, out);
      out += e.op() == Op::Mul ? " * " : " / ";
      print_operand(e.child(1), 3, out);
      return;
    case Op::Neg:
      out += '-';
      print_operand(e.child(0), 3, out);
      return;
    case Op::Pow:
      print_operand(e.child(0), 5, out);
      out += '^';
      print_operand(e.child(1), 3, out);
      return;
    case Op::Call:
      out += func_name(e.func());
      out += '(';
      print_to(e.child(0), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool is_real(Complex z) { return z.imag() == 0.0; }

Complex eval_pow(Complex base, Complex exponent, Complex x) {
  if (base == 0.0) {
    const double p = exponent.real();
    if (exponent == 0.0) return 1.0;
    if (p > 0) return 0.0;
    throw DomainError("division by zero in power", x);
  }
  if (is_real(base) && is_real(exponent)) {
    const double b = base.real();
    const double p = exponent.real();
    if (b > 0 || std::nearbyint(p) == p) return std::pow(b, p);
  }
  return std::pow(base, exponent);
}

Complex eval_call(Func f, Complex z, Complex x) {
  if (is_real(z)) {
    const double r = z.real();
    switch (f) {
      case Func::Exp: return std::exp(r);
      case Func::Ln:
        if (r == 0.0) throw DomainError("ln of zero", x);
        if (r > 0) return std::log(r);
        break;
      case Func::Sin: return std::sin(r);
      case Func::Cos: return std::cos(r);
      case Func::Tan: return std::tan(r);
      case Func::Sinh: return std::sinh(r);
      case Func::Cosh: return std::cosh(r);
      case Func::Tanh: return std::tanh(r);
      case Func::Sqrt:
        return r >= 0 ? Complex(std::sqrt(r)) : Complex(0.0, std::sqrt(-r));
      case Func::Abs: return std::abs(r);
    }
  }
  switch (f) {
    case Func::Exp: return std::exp(z);
    case Func::Ln:
      if (z == 0.0) throw DomainError("ln of zero", x);
      return std::log(z);
    case Func::Sin: return std::sin(z);
    case Func::Cos: return std::cos(z);
    case Func::Tan: return std::tan(z);
    case Func::Sinh: return std::sinh(z);
    case Func::Cosh: return std::cosh(z);
    case Func::Tanh: return std::tanh(z);
    case Func::Sqrt: return std::sqrt(z);
    case Func::Abs: return std::abs(z);
  }
  return {};
}

Complex eval_at(const Expr& e, Complex x) {
  switch (e.op()) {
    case Op::Constant: return e.value();
    case Op::Variable: return x;
    case Op::Add: return eval_at(e.child(0), x) + eval_at(e.child(1), x);
    case Op::Sub: return eval_at(e.child(0), x) - eval_at(e.child(1), x);
    case Op::Mul: return eval_at(e.child(0), x) * eval_at(e.child(1), x);
    case Op::Div: {
      const Complex num = eval_at(e.child(0), x);
      const Complex den = eval_at(e.child(1), x);
      if (den == 0.0) throw DomainError("division by zero", x);
      if (is_real(num) && is_real(den)) return num.real() / den.real();
      return num / den;
    }
    case Op::Pow:
      return eval_pow(eval_at(e.child(0), x), eval_at(e.child(1), x), x);
    case Op::Neg: return -eval_at(e.child(0), x);
    case Op::Call: return eval_call(e.func(), eval_at(e.child(0), x), x);
  }
  return {};
}

}  // namespace

Complex evaluate(const Expr& e, Complex x) { return eval_at(e, x); }

double evaluate_real(const Expr& e, double x) {
  const Complex v = eval_at(e, x);
  if (v.imag() != 0.0) throw DomainError("complex value of real expression", x);
  return v.real();
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

bool depends_on_x(const Expr& e) {
  if (e.op() == Op::Variable) return true;
  for (std::size_t i = 0; i < e.arity(); ++i)
    if (depends_on_x(e.child(i))) return true;
  return false;
}

std::optional<double> fold(const Expr& e) {
  try {
    const Complex v = eval_at(e, 0.0);
    if (v.imag() == 0.0 && std::isfinite(v.real())) return v.real();
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

Expr simplify_node(const Expr& e) {
  auto k = [](double v) { return Expr::constant(v); };
  switch (e.op()) {
    case Op::Constant:
    case Op::Variable:
      return e;
    case Op::Neg: {
      const Expr a = simplify_node(e.child(0));
      if (a.op() == Op::Neg) return a.child(0);
      if (a.is_constant()) return k(-a.value());
      return Expr::neg(a);
    }
    case Op::Call: {
      const Expr a = simplify_node(e.child(0));
      const Expr r = Expr::call(e.func(), a);
      if (a.is_constant())
        if (auto v = fold(r)) return k(*v);
      return r;
    }
    default:
      break;
  }
  const Expr a = simplify_node(e.child(0));
  const Expr b = simplify_node(e.child(1));
  Expr r;
  switch (e.op()) {
    case Op::Add:
      if (a.is_constant(0.0)) return b;
      if (b.is_constant(0.0)) return a;
      if (b.op() == Op::Neg) return simplify_node(Expr::sub(a, b.child(0)));
      r = Expr::add(a, b);
      break;
    case Op::Sub:
      if (b.is_constant(0.0)) return a;
      if (a.is_constant(0.0)) return simplify_node(Expr::neg(b));
      if (a == b) return k(0.0);
      if (b.op() == Op::Neg) return simplify_node(Expr::add(a, b.child(0)));
      r = Expr::sub(a, b);
      break;
    case Op::Mul:
      if (a.is_constant(0.0) || b.is_constant(0.0)) return k(0.0);
      if (a.is_constant(1.0)) return b;
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(-1.0)) return simplify_node(Expr::neg(b));
      if (b.is_constant(-1.0)) return simplify_node(Expr::neg(a));
      r = Expr::mul(a, b);
      break;
    case Op::Div:
      if (a.is_constant(0.0) && !b.is_constant(0.0)) return k(0.0);
      if (b.is_constant(1.0)) return a;
      r = Expr::div(a, b);
      break;
    case Op::Pow:
      if (b.is_constant(0.0)) return k(1.0);
      if (b.is_constant(1.0)) return a;
      if (a.is_constant(1.0)) return k(1.0);
      r = Expr::pow(a, b);
      break;
    default:
      return e;
  }
  if (a.is_constant() && b.is_constant())
    if (auto v = fold(r)) return k(*v);
  return r;
}

}  // namespace

Expr simplify(const Expr& e) { return simplify_node(e); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

Expr d(const Expr& e);

Expr chain(const Expr& outer, const Expr& inner_derivative) {
  return Expr::mul(outer, inner_derivative);
}

Expr d_call(Func f, const Expr& u) {
  using E = Expr;
  const Expr du = d(u);
  switch (f) {
    case Func::Exp: return chain(E::call(Func::Exp, u), du);
    case Func::Ln: return E::div(du, u);
    case Func::Sin: return chain(E::call(Func::Cos, u), du);
    case Func::Cos: return E::neg(chain(E::call(Func::Sin, u), du));
    case Func::Tan:
      return E::div(du, E::pow(E::call(Func::Cos, u), E::constant(2)));
    case Func::Sinh: return chain(E::call(Func::Cosh, u), du);
    case Func::Cosh: return chain(E::call(Func::Sinh, u), du);
    case Func::Tanh:
      return chain(E::sub(E::constant(1),
                          E::pow(E::call(Func::Tanh, u), E::constant(2))),
                   du);
    case Func::Sqrt:
      return E::div(du, E::mul(E::constant(2), E::call(Func::Sqrt, u)));
    case Func::Abs:
      // undefined at u = 0; evaluation reports the division by zero there
      return E::div(E::mul(du, u), E::call(Func::Abs, u));
  }
  return E::constant(0);
}

Expr d(const Expr& e) {
  using E = Expr;
  switch (e.op()) {
    case Op::Constant: return E::constant(0);
    case Op::Variable: return E::constant(1);
    case Op::Add: return E::add(d(e.child(0)), d(e.child(1)));
    case Op::Sub: return E::sub(d(e.child(0)), d(e.child(1)));
    case Op::Neg: return E::neg(d(e.child(0)));
    case Op::Mul: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      return E::add(E::mul(d(a), b), E::mul(a, d(b)));
    }
    case Op::Div: {
      const Expr& a = e.child(0);
      const Expr& b = e.child(1);
      return E::div(E::sub(E::mul(d(a), b), E::mul(a, d(b))),
                    E::pow(b, E::constant(2)));
    }
    case Op::Pow: {
      const Expr& base = e.child(0);
      const Expr& exponent = e.child(1);
      if (!depends_on_x(exponent)) {
        const Expr lowered = simplify(E::sub(exponent, E::constant(1)));
        return E::mul(E::mul(exponent, E::pow(base, lowered)), d(base));
      }
      // f^g = exp(g ln f); only defined for f > 0
      return E::mul(e, E::add(E::mul(d(exponent), E::call(Func::Ln, base)),
                              E::div(E::mul(exponent, d(base)), base)));
    }
    case Op::Call: return d_call(e.func(), e.child(0));
  }
  return E::constant(0);
}

}  // namespace

Expr differentiate(const Expr& e) { return simplify(d(e)); }

// ---------------------------------------------------------------------------
// Constancy detection

ConstancySamples sample_chebyshev(const Expr& e, Interval iv,
                                  std::size_t count) {
  ConstancySamples s;
  s.x.reserve(count);
  s.values.reserve(count);
  const double mid = 0.5 * (iv.a + iv.b);
  const double half = 0.5 * (iv.b - iv.a);
  double re_lo = INFINITY, re_hi = -INFINITY, im_lo = INFINITY, im_hi = -INFINITY;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * count));
    const double x = mid + half * t;
    const Complex v = evaluate(e, x);
    s.x.push_back(x);
    s.values.push_back(v);
    s.mean += v;
    re_lo = std::min(re_lo, v.real());
    re_hi = std::max(re_hi, v.real());
    im_lo = std::min(im_lo, v.imag());
    im_hi = std::max(im_hi, v.imag());
  }
  s.mean /= static_cast<double>(count);
  s.spread = std::max(re_hi - re_lo, im_hi - im_lo);
  return s;
}

std::optional<double> detect_constant(const Expr& e, Interval iv, double tol) {
  const Expr s = simplify(e);
  if (s.is_constant()) return s.value();
  const ConstancySamples samples = sample_chebyshev(s, iv);
  const double bound = tol * (1.0 + std::abs(samples.mean));
  if (!std::isfinite(samples.spread) || samples.spread > bound) return std::nullopt;
  if (std::abs(samples.mean.imag()) > bound) return std::nullopt;
  return samples.mean.real();
}

}  // namespace if2ode
