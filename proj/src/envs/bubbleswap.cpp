#include "common.hpp"
#include "rlve/envs.hpp"
#include "rlve/envs/algorithms.hpp"
#include "rlve/envs/rewards.hpp"

namespace rlve {

namespace {

std::vector<int> permutation_param(const ProblemInstance& instance) {
  return instance.params.at("permutation").get<std::vector<int>>();
}

class BubbleSwapEnvironment final : public Environment {
 public:
  BubbleSwapEnvironment()
      : Environment(detail::describe("bubbleswap_lowerbound_permutation_counting",
                                     "Bubble-swap lower-bound permutation counting",
                                     EnvCategory::ProgrammingCompetition, 6, false, RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 3; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const int n = static_cast<int>(d) + 3;
    const auto perm = detail::random_permutation(n, rng, 1);
    ProblemInstance p;
    p.params = Json{{"n", n}, {"permutation", perm}};
    p.prompt =
        "Bubble sort repeatedly swaps adjacent out-of-order elements. For a permutation p of 1.." +
        std::to_string(n) +
        ", the number of swaps bubble sort performs is at least (|1 - p_1| + |2 - p_2| + ... + |N - p_N|) / 2.\n"
        "Count the permutations of 1.." + std::to_string(n) +
        " whose swap count equals this lower bound and which are lexicographically strictly greater than\nP = " +
        detail::join(perm) + "\n\nOutput the count as a single integer on the last line.";
    p.reference_answer = std::to_string(algo::count_lower_bound_permutations_fast(perm));
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const BigInt truth = algo::count_lower_bound_permutations_fast(permutation_param(instance));
    return verify_nonnegative_count(truth, output, 10);
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    const auto truth = algo::count_lower_bound_permutations_fast(permutation_param(instance));
    return perturb_one_digit(std::to_string(truth), rng);
  }

  Json manifest_details() const override {
    return detail::manifest_record("permutation length N = d + 3",
                                   Json{{"n", "N"}, {"permutation", "the values 1..N in the given order"}},
                                   "one non-negative decimal integer; reward (min/max)^10 against the count");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_bubbleswap_environment() { return std::make_shared<BubbleSwapEnvironment>(); }

}  // namespace rlve
