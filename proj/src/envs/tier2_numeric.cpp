#include <cmath>

#include "common.hpp"
#include "rlve/envs.hpp"
#include "rlve/envs/algorithms.hpp"
#include "rlve/envs/rewards.hpp"

namespace rlve {

namespace {

constexpr DifficultyLevel kLinearCap = 400;

std::int64_t round_half_up(double v) { return static_cast<std::int64_t>(std::floor(v + 0.5)); }

// ---------------------------------------------------------------- CRT

std::int64_t crt_modulus_bound(DifficultyLevel d) { return round_half_up(6.0 * std::pow(1.25, d)); }
std::size_t crt_count(DifficultyLevel d) { return 2 + d / 8; }

BigInt crt_truth(const ProblemInstance& instance) {
  const auto residues = detail::int_vector(instance.params.at("residues"));
  const auto moduli = detail::int_vector(instance.params.at("moduli"));
  return algo::crt_solve(residues, moduli);
}

class CrtEnvironment final : public Environment {
 public:
  CrtEnvironment()
      : Environment(detail::describe("crt", "Chinese remainder theorem", EnvCategory::MathOperation, 40, false,
                                     RewardStyle::Binary)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return crt_modulus_bound(d); }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const std::int64_t bound = crt_modulus_bound(d);
    const std::size_t k = crt_count(d);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::vector<std::int64_t> moduli;
      for (int tries = 0; tries < 200 && moduli.size() < k; ++tries) {
        const std::int64_t candidate = rng.uniform_int(2, bound);
        bool coprime = true;
        for (auto m : moduli) coprime = coprime && algo::gcd(m, candidate) == 1;
        if (coprime) moduli.push_back(candidate);
      }
      if (moduli.size() < k) continue;
      std::vector<std::int64_t> residues;
      std::string listing;
      for (auto m : moduli) {
        residues.push_back(rng.uniform_int(0, m - 1));
        listing += "x = " + std::to_string(residues.back()) + " (mod " + std::to_string(m) + ")\n";
      }
      ProblemInstance p;
      p.params = Json{{"residues", residues}, {"moduli", moduli}};
      p.prompt = "Find the smallest non-negative integer x satisfying all of the following congruences (the moduli "
                 "are pairwise coprime):\n" +
                 listing + "\nOutput x as a single integer on the last line.";
      p.reference_answer = to_decimal(algo::crt_solve(residues, moduli));
      return p;
    }
    throw Error(ErrorCode::GenerationExhausted, "crt: could not draw pairwise coprime moduli");
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    return verify_exact_integer(crt_truth(instance), output);
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    return perturb_one_digit(to_decimal(crt_truth(instance)), rng);
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "modulus bound round(6 * 1.25^d); 2 + floor(d/8) congruences",
        Json{{"residues", "integers r_i in [0, m_i)"}, {"moduli", "pairwise coprime integers in [2, bound]"}},
        "one non-negative integer; +1 when it is the smallest solution, 0 otherwise");
  }
};

// ---------------------------------------------------------------- InversionPair

class InversionPairEnvironment final : public Environment {
 public:
  InversionPairEnvironment()
      : Environment(detail::describe("inversion_pair", "Inversion pairs", EnvCategory::ProgrammingCompetition,
                                     kLinearCap, false, RewardStyle::Binary)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 3; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const std::int64_t n = static_cast<std::int64_t>(d) + 3;
    std::vector<std::int64_t> values(static_cast<std::size_t>(n));
    for (auto& v : values) v = rng.uniform_int(1, 2 * n);
    ProblemInstance p;
    p.params = Json{{"values", values}};
    p.prompt = "You are given an array A of " + std::to_string(n) + " integers:\n" + detail::join(values) +
               "\n\nCount the pairs of indices (i, j) with i < j and A[i] > A[j]. Output the count as a single "
               "integer on the last line.";
    p.reference_answer = std::to_string(algo::inversion_count(values));
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    return verify_exact_integer(BigInt(algo::inversion_count(detail::int_vector(instance.params.at("values")))),
                                output);
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    return perturb_one_digit(std::to_string(algo::inversion_count(detail::int_vector(instance.params.at("values")))),
                             rng);
  }

  Json manifest_details() const override {
    return detail::manifest_record("array length N = d + 3", Json{{"values", "N integers in [1, 2N]"}},
                                   "one non-negative integer; +1 on the exact inversion count, 0 otherwise");
  }
};

// ---------------------------------------------------------------- Josephus

std::int64_t josephus_bound(DifficultyLevel d) { return round_half_up(5.0 * std::pow(1.2, d)); }

class JosephusEnvironment final : public Environment {
 public:
  JosephusEnvironment()
      : Environment(detail::describe("josephus", "Josephus problem", EnvCategory::ProgrammingCompetition, 40, false,
                                     RewardStyle::Binary)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return josephus_bound(d); }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const std::int64_t bound = josephus_bound(d);
    const std::int64_t n = rng.uniform_int((bound + 1) / 2, bound);
    const std::int64_t k = rng.uniform_int(2, 10);
    ProblemInstance p;
    p.params = Json{{"n", n}, {"k", k}};
    p.prompt = std::to_string(n) + " people stand in a circle, numbered 1 to " + std::to_string(n) +
               ". Starting from person 1, count around the circle; every " + std::to_string(k) +
               "-th person is removed, and counting resumes with the next person. Which number does the last "
               "remaining person have? Output the number on the last line.";
    p.reference_answer = std::to_string(algo::josephus_survivor(n, k));
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const auto truth = algo::josephus_survivor(detail::as_int(instance.params.at("n")), detail::as_int(instance.params.at("k")));
    return verify_exact_integer(BigInt(truth), output);
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    const auto truth = algo::josephus_survivor(detail::as_int(instance.params.at("n")), detail::as_int(instance.params.at("k")));
    return perturb_one_digit(std::to_string(truth), rng);
  }

  Json manifest_details() const override {
    return detail::manifest_record("circle size bound B = round(5 * 1.2^d); n in [ceil(B/2), B]",
                                   Json{{"n", "number of people"}, {"k", "step in [2, 10]"}},
                                   "one integer in [1, n]; +1 on the survivor, 0 otherwise");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_crt_environment() { return std::make_shared<CrtEnvironment>(); }
std::shared_ptr<const Environment> make_inversion_pair_environment() {
  return std::make_shared<InversionPairEnvironment>();
}
std::shared_ptr<const Environment> make_josephus_environment() { return std::make_shared<JosephusEnvironment>(); }

}  // namespace rlve
