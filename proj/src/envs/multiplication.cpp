#include "common.hpp"
#include "rlve/envs.hpp"
#include "rlve/envs/rewards.hpp"

namespace rlve {

namespace {

// Uniform over [10^d, 10^(d+1)): a leading digit 1..9 followed by d free digits.
std::string random_operand(DifficultyLevel d, Rng& rng) {
  std::string s(1, static_cast<char>('0' + rng.uniform_int(1, 9)));
  for (DifficultyLevel i = 0; i < d; ++i) s.push_back(static_cast<char>('0' + rng.uniform_int(0, 9)));
  return s;
}

class MultiplicationEnvironment final : public Environment {
 public:
  MultiplicationEnvironment()
      : Environment(detail::describe("multiplication", "Multiplication", EnvCategory::MathOperation, 38, false,
                                     RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 1; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const std::string a = random_operand(d, rng);
    const std::string b = random_operand(d, rng);
    const BigInt product = BigInt(a) * BigInt(b);
    ProblemInstance p;
    p.params = Json{{"a", a}, {"b", b}};
    p.prompt = "Compute the product " + a + " * " + b + ".\n\nOutput only the resulting integer on the last line.";
    p.reference_answer = to_decimal(product);
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const BigInt truth = big_from_json(instance.params.at("a")) * big_from_json(instance.params.at("b"));
    return verify_nonnegative_count(truth, output, 10);
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    const BigInt truth = big_from_json(instance.params.at("a")) * big_from_json(instance.params.at("b"));
    return perturb_one_digit(to_decimal(truth), rng);
  }

  Json manifest_details() const override {
    return detail::manifest_record("operand digit count d + 1",
                                   Json{{"a", "decimal string with d+1 digits"}, {"b", "decimal string with d+1 digits"}},
                                   "one non-negative decimal integer; reward (min/max)^10 against the product");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_multiplication_environment() {
  return std::make_shared<MultiplicationEnvironment>();
}

}  // namespace rlve
