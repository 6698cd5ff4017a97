#include <algorithm>
#include <cmath>
#include <set>

#include "common.hpp"
#include "rlve/envs.hpp"

namespace rlve {

namespace {

using EdgeSet = std::set<std::pair<std::int64_t, std::int64_t>>;

EdgeSet edge_set(const Json& edges) {
  EdgeSet out;
  for (const auto& e : edges) out.emplace(e.at(0).get<std::int64_t>(), e.at(1).get<std::int64_t>());
  return out;
}

class HamiltonianEnvironment final : public Environment {
 public:
  HamiltonianEnvironment()
      : Environment(detail::describe("hamiltonian_path_existence", "Hamiltonian path", EnvCategory::NpComplete, 60,
                                     true, RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 3; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const int n = static_cast<int>(d) + 3;
    const auto path = detail::random_permutation(n, rng);
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace(path[i], path[i + 1]);
    const double q = std::min(0.5, 3.0 / n);
    for (int s = 0; s < n; ++s) {
      detail::for_each_bernoulli_index(n - 1, q, rng, [&](std::int64_t k) {
        const int t = static_cast<int>(k) < s ? static_cast<int>(k) : static_cast<int>(k) + 1;
        edges.emplace(s, t);
      });
    }
    Json edge_json = Json::array();
    std::string listing;
    for (const auto& [s, t] : edges) {
      edge_json.push_back(Json::array({s, t}));
      listing += "(" + std::to_string(s) + ", " + std::to_string(t) + ")\n";
    }
    ProblemInstance p;
    p.params = Json{{"n", n}, {"edges", edge_json}};
    p.prompt = "You are given a directed graph with " + std::to_string(n) + " vertices labeled 0 to " +
               std::to_string(n - 1) + ". Each edge (s, t) goes from s to t:\n" + listing +
               "\nFind a path that visits every vertex exactly once, following edge directions. Output the "
               "vertices of the path in order on the last line, separated by spaces.";
    p.reference_answer = detail::join(path);
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const std::int64_t n = detail::as_int(instance.params.at("n"));
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto list = parse_int_list(*answer);
    if (!list) return VerificationVerdict::parse_failure("answer is not a list of integers");
    if (!detail::is_permutation_of_range(*list, n)) {
      return VerificationVerdict::structural(-0.5, "not a permutation of the vertices");
    }
    const auto edges = edge_set(instance.params.at("edges"));
    std::int64_t present = 0;
    for (std::size_t i = 0; i + 1 < list->size(); ++i) present += edges.contains({(*list)[i], (*list)[i + 1]});
    return VerificationVerdict::graded(std::pow(static_cast<double>(present) / static_cast<double>(n - 1), 5));
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    auto parsed = parse_int_list(instance.reference_answer.value_or(""));
    if (!parsed) return std::nullopt;
    auto path = *parsed;
    if (path.size() < 2) return std::nullopt;
    const auto last = static_cast<std::int64_t>(path.size()) - 1;
    const auto i = static_cast<std::size_t>(rng.uniform_int(0, last));
    auto j = static_cast<std::size_t>(rng.uniform_int(0, last - 1));
    if (j >= i) ++j;
    std::swap(path[i], path[j]);
    return detail::join(path);
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "vertex count N = d + 3",
        Json{{"n", "N"}, {"edges", "sorted list of directed edges [s, t]; a planted Hamiltonian path plus random "
                                   "extra edges with probability min(0.5, 3/N)"}},
        "a permutation of 0..N-1; reward (x/(N-1))^5 where x counts consecutive pairs that are edges");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_hamiltonian_environment() { return std::make_shared<HamiltonianEnvironment>(); }

}  // namespace rlve
