#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "rlve/envs.hpp"

namespace rlve {

std::int64_t sorting_length(std::uint32_t d) {
  const double raw = 3.0 * std::pow(1.1, static_cast<double>(d));
  return std::max<std::int64_t>(2, static_cast<std::int64_t>(std::floor(raw + 0.5)));
}

namespace {

class SortingEnvironment final : public Environment {
 public:
  SortingEnvironment()
      : Environment(detail::describe("sorting", "Sorting", EnvCategory::ClassicalAlgorithm, 60, false,
                                     RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return sorting_length(d); }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const std::int64_t n = sorting_length(d);
    std::vector<std::int64_t> values(static_cast<std::size_t>(n));
    for (auto& v : values) v = rng.uniform_int(-10 * n, 10 * n);
    auto sorted = values;
    std::sort(sorted.begin(), sorted.end());

    ProblemInstance p;
    p.params = Json{{"values", values}};
    p.prompt = "You are given an array of " + std::to_string(n) + " integers:\n" + detail::join(values) +
               "\n\nSort the array in non-decreasing order. Output the sorted values on the last line, "
               "separated by single spaces.";
    p.reference_answer = detail::join(sorted);
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    auto sorted = detail::int_vector(instance.params.at("values"));
    std::sort(sorted.begin(), sorted.end());
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto list = parse_int_list(*answer);
    if (!list) return VerificationVerdict::parse_failure("answer is not a list of integers");
    if (list->size() != sorted.size()) return VerificationVerdict::structural(-0.5, "wrong number of elements");
    std::size_t matches = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) matches += (*list)[i] == sorted[i];
    const double frac = static_cast<double>(matches) / static_cast<double>(sorted.size());
    return VerificationVerdict::graded(std::pow(frac, 10));
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    auto sorted = detail::int_vector(instance.params.at("values"));
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> swappable;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      if (sorted[i] != sorted[i + 1]) swappable.push_back(i);
    }
    if (swappable.empty()) return std::nullopt;
    const auto i = swappable[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(swappable.size()) - 1))];
    std::swap(sorted[i], sorted[i + 1]);
    return detail::join(sorted);
  }

  Json manifest_details() const override {
    return detail::manifest_record("array length N = max(2, round(3 * 1.1^d))",
                                   Json{{"values", "array of N integers in [-10N, 10N]"}},
                                   "N integers separated by whitespace or commas, optionally in brackets");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_sorting_environment() { return std::make_shared<SortingEnvironment>(); }

}  // namespace rlve
