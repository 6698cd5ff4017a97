#include <cmath>
#include <cstdio>

#include "common.hpp"
#include "rlve/envs.hpp"
#include "rlve/envs/polynomial.hpp"

namespace rlve {

namespace {

constexpr int kGenerationAttempts = 1000;
constexpr long double kMinimumGap = 1e-3L;
constexpr double kNearMissOffset = 0.5;

std::string fixed6(long double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6Lf", x);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

class PolynomialMinimumEnvironment final : public Environment {
 public:
  PolynomialMinimumEnvironment()
      : Environment(detail::describe("polynomial_minimum", "Polynomial minimum", EnvCategory::Optimization, 8, false,
                                     RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return 2 * (static_cast<std::int64_t>(d) + 1); }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const std::size_t degree = 2 * (static_cast<std::size_t>(d) + 1);
    for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
      std::vector<std::int64_t> coefficients(degree + 1);
      for (std::size_t i = 0; i < degree; ++i) coefficients[i] = rng.uniform_int(-9, 9);
      coefficients[degree] = rng.uniform_int(1, 9);
      const auto f = poly::from_integers(coefficients);
      const long double x_star = poly::global_minimizer(f);
      if (f(0) - f(x_star) < kMinimumGap) continue;

      ProblemInstance p;
      p.params = Json{{"coefficients", coefficients}, {"degree", degree}};
      p.prompt = "Consider the polynomial\nf(x) = " + poly::render(coefficients) +
                 "\n\nFind the real number x at which f attains its global minimum. Output x as a decimal number "
                 "on the last line.";
      p.reference_answer = fixed6(x_star);
      if (do_verify(p, *p.reference_answer).is_correct()) return p;
    }
    throw Error(ErrorCode::GenerationExhausted, "polynomial_minimum: no polynomial with a usable minimum gap");
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto x0 = parse_real(*answer);
    if (!x0) return VerificationVerdict::parse_failure("answer is not a number");
    const auto f = poly::from_integers(detail::int_vector(instance.params.at("coefficients")));
    const long double best = f(poly::global_minimizer(f));
    const long double denom = f(0) - best;
    if (!(denom > 0)) return VerificationVerdict::graded(*x0 == 0.0 ? 1.0 : 0.0);
    const long double fx = f(static_cast<long double>(*x0));
    if (!std::isfinite(static_cast<double>(fx))) return VerificationVerdict::graded(-1.0);
    const double ratio = static_cast<double>((f(0) - fx) / denom);
    double reward = std::pow(ratio, 5);
    if (std::isnan(reward)) reward = -1.0;
    return VerificationVerdict::graded(std::clamp(reward, -1.0, 1.0));
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng&) const override {
    if (!instance.reference_answer) return std::nullopt;
    auto x = parse_real(*instance.reference_answer);
    if (!x) return std::nullopt;
    return fixed6(static_cast<long double>(*x + kNearMissOffset));
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "polynomial degree 2(d + 1)",
        Json{{"coefficients", "integers, constant term first; lower terms in [-9, 9], leading term in [1, 9]"},
             {"degree", "2(d + 1)"}},
        "one real number x0; reward clamp(((f(0) - f(x0)) / (f(0) - f(x*)))^5, -1, 1) with x* the true minimiser");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_polynomial_minimum_environment() {
  return std::make_shared<PolynomialMinimumEnvironment>();
}

}  // namespace rlve
