#include "rlve/envs/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace rlve::expr {

namespace {

constexpr std::size_t kMaxInputLength = 10000;
constexpr int kMaxDepth = 600;
constexpr int kMaxExponent = 64;

bool is_zero(const Expr& e) { return e->op == Op::Const && e->value == 0; }
bool is_one(const Expr& e) { return e->op == Op::Const && e->value == 1; }

std::optional<double> finite(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::string rational_text(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  const auto num = numerator(r);
  const auto den = denominator(r);
  if (den == 1) {
    if (num < 0) return "(" + num.str() + ")";
    return num.str();
  }
  return "(" + num.str() + "/" + den.str() + ")";
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    default: return "";
  }
}

// Precedence levels: 1 additive, 2 multiplicative, 3 unary minus, 5 atoms.
int level(const Expr& e) {
  switch (e->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    default: return 5;
  }
}

void render_into(const Expr& e, std::string& out);

void render_child(const Expr& child, int min_level, std::string& out) {
  if (level(child) < min_level) {
    out.push_back('(');
    render_into(child, out);
    out.push_back(')');
  } else {
    render_into(child, out);
  }
}

void render_into(const Expr& e, std::string& out) {
  switch (e->op) {
    case Op::Const: out += rational_text(e->value); return;
    case Op::Var: out += "x"; return;
    case Op::Neg:
      out.push_back('-');
      // "--x" parses, but "-(-x)" reads better.
      render_child(e->lhs, e->lhs->op == Op::Neg ? 4 : 3, out);
      return;
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
      out += function_name(e->op);
      out.push_back('(');
      render_into(e->lhs, out);
      out.push_back(')');
      return;
    case Op::Pow:
      out += "pow(";
      render_into(e->lhs, out);
      out += ", " + std::to_string(e->exponent) + ")";
      return;
    case Op::Add:
      render_child(e->lhs, 1, out);
      out += " + ";
      render_child(e->rhs, 1, out);
      return;
    case Op::Sub:
      render_child(e->lhs, 1, out);
      out += " - ";
      render_child(e->rhs, 2, out);
      return;
    case Op::Mul:
      render_child(e->lhs, 2, out);
      out += "*";
      render_child(e->rhs, 2, out);
      return;
    case Op::Div:
      render_child(e->lhs, 2, out);
      out += "/";
      render_child(e->rhs, 3, out);
      return;
  }
}

// Recursive-descent parser over the rendering dialect.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::optional<Expr> run() {
    auto e = expression();
    skip_space();
    if (!e || pos_ != text_.size()) return std::nullopt;
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  struct DepthGuard {
    int& depth;
    explicit DepthGuard(int& d) : depth(d) { ++depth; }
    ~DepthGuard() { --depth; }
  };

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view token) {
    skip_space();
    return text_.substr(pos_, token.size()) == token;
  }

  bool consume(std::string_view token) {
    if (!peek(token)) return false;
    pos_ += token.size();
    return true;
  }

  std::optional<Expr> expression() {
    DepthGuard guard(depth_);
    if (depth_ > kMaxDepth) return std::nullopt;
    auto lhs = term();
    if (!lhs) return std::nullopt;
    Expr acc = *lhs;
    for (;;) {
      if (consume("+")) {
        auto rhs = term();
        if (!rhs) return std::nullopt;
        acc = make_binary(Op::Add, acc, *rhs);
      } else if (consume("-")) {
        auto rhs = term();
        if (!rhs) return std::nullopt;
        acc = make_binary(Op::Sub, acc, *rhs);
      } else {
        return acc;
      }
    }
  }

  std::optional<Expr> term() {
    auto lhs = factor();
    if (!lhs) return std::nullopt;
    Expr acc = *lhs;
    for (;;) {
      if (consume("*")) {
        auto rhs = factor();
        if (!rhs) return std::nullopt;
        acc = make_binary(Op::Mul, acc, *rhs);
      } else if (consume("/")) {
        auto rhs = factor();
        if (!rhs) return std::nullopt;
        // Fold "(p/q)" so rendered rational constants read back as constants.
        if (acc->op == Op::Const && (*rhs)->op == Op::Const && (*rhs)->value != 0) {
          acc = make_const(acc->value / (*rhs)->value);
        } else {
          acc = make_binary(Op::Div, acc, *rhs);
        }
      } else {
        return acc;
      }
    }
  }

  std::optional<Expr> factor() {
    DepthGuard guard(depth_);
    if (depth_ > kMaxDepth) return std::nullopt;
    if (consume("-")) {
      auto inner = factor();
      if (!inner) return std::nullopt;
      if ((*inner)->op == Op::Const) return make_const(-(*inner)->value);
      return make_unary(Op::Neg, *inner);
    }
    if (consume("+")) return factor();
    return power_expr();
  }

  std::optional<Expr> power_expr() {
    auto base = atom();
    if (!base) return std::nullopt;
    if (!consume("**")) return base;
    auto exponent = factor();
    if (!exponent || (*exponent)->op != Op::Const) return std::nullopt;
    return raise(*base, (*exponent)->value);
  }

  static std::optional<Expr> raise(const Expr& base, const Rational& exponent) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const auto num = numerator(exponent);
    const auto den = denominator(exponent);
    if (abs(num) > kMaxExponent) return std::nullopt;
    const int n = num.convert_to<int>();
    if (den == 1) return make_pow(base, n);
    if (den == 2) return make_pow(make_unary(Op::Sqrt, base), n);
    return std::nullopt;
  }

  std::optional<Expr> number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::size_t int_end = pos_;
    std::string digits(text_.substr(start, int_end - start));
    Rational scale = 1;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::size_t frac_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string frac(text_.substr(frac_start, pos_ - frac_start));
      digits += frac;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    }
    if (digits.empty() || digits.size() > 200) return std::nullopt;
    while (digits.size() > 1 && digits.front() == '0') digits.erase(0, 1);
    boost::multiprecision::cpp_int mantissa(digits);
    return make_const(Rational(mantissa) / scale);
  }

  std::optional<Expr> atom() {
    DepthGuard guard(depth_);
    if (depth_ > kMaxDepth) return std::nullopt;
    skip_space();
    if (pos_ >= text_.size()) return std::nullopt;
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (consume("(")) {
      auto inner = expression();
      if (!inner || !consume(")")) return std::nullopt;
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "x") return make_var();
      if (name == "E") return make_unary(Op::Exp, make_const(1));
      if (name == "pow") {
        if (!consume("(")) return std::nullopt;
        auto base = expression();
        if (!base || !consume(",")) return std::nullopt;
        auto exponent = expression();
        if (!exponent || !consume(")")) return std::nullopt;
        if ((*exponent)->op != Op::Const) return std::nullopt;
        return raise(*base, (*exponent)->value);
      }
      Op fn;
      if (name == "sin") fn = Op::Sin;
      else if (name == "cos") fn = Op::Cos;
      else if (name == "exp") fn = Op::Exp;
      else if (name == "log") fn = Op::Log;
      else if (name == "sqrt") fn = Op::Sqrt;
      else return std::nullopt;
      if (!consume("(")) return std::nullopt;
      auto inner = expression();
      if (!inner || !consume(")")) return std::nullopt;
      return make_unary(fn, *inner);
    }
    return std::nullopt;
  }
};

}  // namespace

bool is_unary(Op op) {
  return op == Op::Neg || op == Op::Sin || op == Op::Cos || op == Op::Exp || op == Op::Log || op == Op::Sqrt;
}

bool is_binary(Op op) { return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div; }

Expr make_const(Rational value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = std::move(value);
  return n;
}

Expr make_var() {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  return n;
}

Expr make_unary(Op op, Expr operand) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(operand);
  return n;
}

Expr make_binary(Op op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

Expr make_pow(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->lhs = std::move(base);
  n->exponent = exponent;
  return n;
}

Expr add(Expr a, Expr b) {
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value + b->value);
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (b->op == Op::Neg) return make_binary(Op::Sub, a, b->lhs);
  return make_binary(Op::Add, a, b);
}

Expr sub(Expr a, Expr b) {
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value - b->value);
  if (is_zero(b)) return a;
  if (is_zero(a)) return neg(b);
  if (b->op == Op::Neg) return make_binary(Op::Add, a, b->lhs);
  return make_binary(Op::Sub, a, b);
}

Expr mul(Expr a, Expr b) {
  if (a->op == Op::Const && b->op == Op::Const) return make_const(a->value * b->value);
  if (is_zero(a) || is_zero(b)) return make_const(0);
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (b->op == Op::Const) std::swap(a, b);
  if (a->op == Op::Const && a->value == -1) return neg(b);
  if (a->op == Op::Const && b->op == Op::Mul && b->lhs->op == Op::Const) {
    return mul(make_const(a->value * b->lhs->value), b->rhs);
  }
  return make_binary(Op::Mul, a, b);
}

Expr div(Expr a, Expr b) {
  if (a->op == Op::Const && b->op == Op::Const && b->value != 0) return make_const(a->value / b->value);
  if (is_one(b)) return a;
  if (is_zero(a) && b->op == Op::Const && b->value != 0) return a;
  return make_binary(Op::Div, a, b);
}

Expr neg(Expr a) {
  if (a->op == Op::Const) return make_const(-a->value);
  if (a->op == Op::Neg) return a->lhs;
  return make_unary(Op::Neg, a);
}

Expr power(Expr base, int exponent) {
  if (exponent == 0) return make_const(1);
  if (exponent == 1) return base;
  if (base->op == Op::Const && std::abs(exponent) <= kMaxExponent && (base->value != 0 || exponent > 0)) {
    Rational r = 1;
    for (int i = 0; i < std::abs(exponent); ++i) r *= base->value;
    return make_const(exponent > 0 ? r : Rational(1) / r);
  }
  return make_pow(base, exponent);
}

Expr apply(Op fn, Expr operand) { return make_unary(fn, std::move(operand)); }

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  if (e->lhs) n += node_count(e->lhs);
  if (e->rhs) n += node_count(e->rhs);
  return n;
}

bool contains_variable(const Expr& e) {
  if (e->op == Op::Var) return true;
  return (e->lhs && contains_variable(e->lhs)) || (e->rhs && contains_variable(e->rhs));
}

bool is_constant_value(const Expr& e, long value) { return e->op == Op::Const && e->value == value; }

std::optional<double> evaluate(const Expr& e, double x) {
  switch (e->op) {
    case Op::Const: return finite(e->value.convert_to<double>());
    case Op::Var: return x;
    default: break;
  }
  auto a = evaluate(e->lhs, x);
  if (!a) return std::nullopt;
  switch (e->op) {
    case Op::Neg: return -*a;
    case Op::Sin: return finite(std::sin(*a));
    case Op::Cos: return finite(std::cos(*a));
    case Op::Exp: return finite(std::exp(*a));
    case Op::Log:
      if (*a <= 0.0) return std::nullopt;
      return finite(std::log(*a));
    case Op::Sqrt:
      if (*a < 0.0) return std::nullopt;
      return finite(std::sqrt(*a));
    case Op::Pow:
      if (*a == 0.0 && e->exponent < 0) return std::nullopt;
      return finite(std::pow(*a, e->exponent));
    default: break;
  }
  auto b = evaluate(e->rhs, x);
  if (!b) return std::nullopt;
  switch (e->op) {
    case Op::Add: return finite(*a + *b);
    case Op::Sub: return finite(*a - *b);
    case Op::Mul: return finite(*a * *b);
    case Op::Div:
      if (*b == 0.0) return std::nullopt;
      return finite(*a / *b);
    default: return std::nullopt;
  }
}

Expr differentiate(const Expr& e) {
  const Expr& u = e->lhs;
  const Expr& v = e->rhs;
  switch (e->op) {
    case Op::Const: return make_const(0);
    case Op::Var: return make_const(1);
    case Op::Neg: return neg(differentiate(u));
    case Op::Sin: return mul(apply(Op::Cos, u), differentiate(u));
    case Op::Cos: return neg(mul(apply(Op::Sin, u), differentiate(u)));
    case Op::Exp: return mul(apply(Op::Exp, u), differentiate(u));
    case Op::Log: return div(differentiate(u), u);
    case Op::Sqrt: return div(differentiate(u), mul(make_const(2), apply(Op::Sqrt, u)));
    case Op::Pow:
      return mul(mul(make_const(e->exponent), power(u, e->exponent - 1)), differentiate(u));
    case Op::Add: return add(differentiate(u), differentiate(v));
    case Op::Sub: return sub(differentiate(u), differentiate(v));
    case Op::Mul: return add(mul(differentiate(u), v), mul(u, differentiate(v)));
    case Op::Div:
      return div(sub(mul(differentiate(u), v), mul(u, differentiate(v))), power(v, 2));
  }
  return make_const(0);
}

std::string render(const Expr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

std::optional<Expr> parse(std::string_view text) {
  if (text.size() > kMaxInputLength) return std::nullopt;
  return Parser(text).run();
}

}  // namespace rlve::expr
