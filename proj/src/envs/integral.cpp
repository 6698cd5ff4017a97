#include <array>
#include <cmath>

#include "common.hpp"
#include "rlve/envs.hpp"
#include "rlve/envs/expression.hpp"

namespace rlve {

namespace {

using expr::Expr;
using expr::Op;

constexpr int kProbePoints = 20;
constexpr int kProbeScan = 400;
constexpr double kTolerance = 1e-6;
constexpr std::size_t kMaxCandidateNodes = 2000;
constexpr std::size_t kMaxRenderLength = 4000;
constexpr int kGenerationAttempts = 2000;

constexpr std::array<Op, 6> kUnary{Op::Neg, Op::Sin, Op::Cos, Op::Exp, Op::Log, Op::Sqrt};
constexpr std::array<Op, 4> kBinary{Op::Add, Op::Sub, Op::Mul, Op::Div};
constexpr std::array<int, 6> kExponents{-2, -1, 2, 3, 4, 5};

// Weyl sequence over [-4, 4]; fixed so every verification probes the same points.
double probe_point(int k) {
  const double golden = 0.6180339887498949;
  const double frac = std::fmod(0.5 + golden * k, 1.0);
  return -4.0 + 8.0 * frac;
}

Expr random_leaf(Rng& rng) {
  if (rng.bernoulli(0.5)) return expr::make_var();
  return expr::make_const(rng.uniform_int(1, 9));
}

// A tree with exactly `nodes` nodes; pow counts as one node.
Expr random_tree(int nodes, Rng& rng) {
  if (nodes == 1) return random_leaf(rng);
  const bool binary = nodes >= 3 && rng.bernoulli(0.6);
  if (binary) {
    const int left = static_cast<int>(rng.uniform_int(1, nodes - 2));
    const Op op = kBinary[static_cast<std::size_t>(rng.uniform_int(0, kBinary.size() - 1))];
    Expr lhs = random_tree(left, rng);
    Expr rhs = random_tree(nodes - 1 - left, rng);
    return expr::make_binary(op, lhs, rhs);
  }
  Expr child = random_tree(nodes - 1, rng);
  if (rng.bernoulli(0.25)) {
    return expr::make_pow(child, kExponents[static_cast<std::size_t>(rng.uniform_int(0, kExponents.size() - 1))]);
  }
  return expr::make_unary(kUnary[static_cast<std::size_t>(rng.uniform_int(0, kUnary.size() - 1))], child);
}

bool close(double a, double b) {
  return std::fabs(a - b) <= kTolerance * std::max({1.0, std::fabs(a), std::fabs(b)});
}

enum class Match { Equal, Different, TooFewPoints };

Match compare_derivative(const Expr& candidate_derivative, const Expr& target) {
  int compared = 0;
  for (int k = 0; k < kProbeScan && compared < kProbePoints; ++k) {
    const double x = probe_point(k);
    auto a = expr::evaluate(target, x);
    if (!a) continue;
    auto b = expr::evaluate(candidate_derivative, x);
    if (!b) continue;
    ++compared;
    if (!close(*a, *b)) return Match::Different;
  }
  return compared < kProbePoints ? Match::TooFewPoints : Match::Equal;
}

bool has_nonzero_probe(const Expr& e) {
  int finite = 0;
  bool nonzero = false;
  for (int k = 0; k < kProbeScan; ++k) {
    auto v = expr::evaluate(e, probe_point(k));
    if (!v) continue;
    ++finite;
    if (std::fabs(*v) > 1e-12) nonzero = true;
  }
  return finite >= kProbePoints && nonzero;
}

class IntegralEnvironment final : public Environment {
 public:
  IntegralEnvironment()
      : Environment(detail::describe("integral", "Indefinite integral", EnvCategory::MathOperation, 30, true,
                                     RewardStyle::Binary)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 2; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const int nodes = static_cast<int>(d) + 2;
    for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
      Expr f = random_tree(nodes, rng);
      if (!expr::contains_variable(f)) continue;
      Expr df = expr::differentiate(f);
      if (expr::is_constant_value(df, 0) || !has_nonzero_probe(df)) continue;
      const std::string f_text = expr::render(f);
      const std::string df_text = expr::render(df);
      if (f_text.size() > kMaxRenderLength || df_text.size() > kMaxRenderLength) continue;
      // The printed answer must re-parse to a tree of the advertised size.
      const auto reparsed = expr::parse(f_text);
      if (!reparsed || expr::node_count(*reparsed) != static_cast<std::size_t>(nodes)) continue;

      ProblemInstance p;
      p.params = Json{{"f_prime", df_text}, {"node_count", nodes}};
      p.prompt = "You are given the derivative of a function F(x):\nF'(x) = " + df_text +
                 "\n\nFind an antiderivative F(x). Write it on the last line as an expression in x. Always use * "
                 "for multiplication, write integer powers as pow(base, n), and use the functions sin, cos, exp, "
                 "log and sqrt. Do not use ^ and do not wrap the expression in backticks.";
      p.reference_answer = f_text;
      if (do_verify(p, f_text).is_correct()) return p;
    }
    throw Error(ErrorCode::GenerationExhausted, "integral: no usable expression tree");
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto candidate = expr::parse(*answer);
    if (!candidate) return VerificationVerdict::parse_failure("expression does not parse");
    if (expr::node_count(*candidate) > kMaxCandidateNodes) {
      return VerificationVerdict::parse_failure("expression too large");
    }
    auto target = expr::parse(instance.params.at("f_prime").get<std::string>());
    if (!target) return VerificationVerdict::parse_failure("instance derivative does not parse");
    switch (compare_derivative(expr::differentiate(*candidate), *target)) {
      case Match::Equal: return VerificationVerdict::exact();
      case Match::Different: return VerificationVerdict::graded(0.0, "derivative differs at a probe point");
      case Match::TooFewPoints: return VerificationVerdict::graded(0.0, "too few comparable probe points");
    }
    return VerificationVerdict::graded(0.0);
  }

  // Adding x changes the derivative by 1, so this is always wrong. Adding a
  // constant would not be.
  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng&) const override {
    if (!instance.reference_answer) return std::nullopt;
    return *instance.reference_answer + " + x";
  }

  Json manifest_details() const override {
    Json j = detail::manifest_record(
        "expression tree node count d + 2",
        Json{{"f_prime", "rendered derivative of the hidden antiderivative"}, {"node_count", "d + 2"}},
        "an expression in x using + - * /, pow(base, n) with integer n (or base**n), sin, cos, exp, log, sqrt; "
        "scored +1 when its derivative matches f_prime at 20 probe points in [-4, 4] (relative tolerance 1e-6)");
    j["generator"] = Json{
        {"leaves", "x or an integer constant 1..9, each with probability 1/2"},
        {"internal", "binary add/sub/mul/div with probability 0.6 when at least 3 nodes remain; otherwise pow "
                     "with exponent in {-2,-1,2,3,4,5} (1/4) or one of neg, sin, cos, exp, log, sqrt"},
        {"rejection", "no x, derivative identically zero, fewer than 20 finite probe points, or rendering "
                      "longer than 4000 characters"}};
    return j;
  }
};

}  // namespace

std::shared_ptr<const Environment> make_integral_environment() { return std::make_shared<IntegralEnvironment>(); }

}  // namespace rlve
