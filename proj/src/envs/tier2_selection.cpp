#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "rlve/envs.hpp"
#include "rlve/envs/algorithms.hpp"

namespace rlve {

namespace {

constexpr DifficultyLevel kLinearCap = 400;

std::size_t pick_index(std::size_t size, Rng& rng) {
  return static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(size) - 1));
}

// Drop one chosen index, or swap the only one for another when just one is chosen.
std::optional<std::string> perturb_selection(const std::string& reference, std::int64_t n, Rng& rng) {
  auto chosen = parse_int_list(reference);
  if (!chosen || chosen->empty()) return std::nullopt;
  if (chosen->size() >= 2) {
    chosen->erase(chosen->begin() + static_cast<std::ptrdiff_t>(pick_index(chosen->size(), rng)));
    return detail::join(*chosen);
  }
  if (n < 2) return std::nullopt;
  std::int64_t other = rng.uniform_int(0, n - 2);
  if (other >= chosen->front()) ++other;
  return std::to_string(other);
}

// ---------------------------------------------------------------- Knapsack

std::vector<std::int64_t> knapsack_choice(const std::vector<std::int64_t>& weights,
                                          const std::vector<std::int64_t>& values, std::int64_t capacity) {
  const std::size_t n = weights.size();
  const auto cap = static_cast<std::size_t>(capacity);
  // One value row plus a take-bit per (item, capacity) for reconstruction.
  std::vector<std::int64_t> best(cap + 1, 0);
  std::vector<char> take(n * (cap + 1), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = static_cast<std::size_t>(weights[i]);
    for (std::size_t c = cap + 1; c-- > w;) {
      const std::int64_t with = best[c - w] + values[i];
      if (with > best[c]) {
        best[c] = with;
        take[i * (cap + 1) + c] = 1;
      }
    }
  }
  std::vector<std::int64_t> chosen;
  std::size_t c = cap;
  for (std::size_t i = n; i > 0; --i) {
    if (take[(i - 1) * (cap + 1) + c]) {
      chosen.push_back(static_cast<std::int64_t>(i - 1));
      c -= static_cast<std::size_t>(weights[i - 1]);
    }
  }
  std::reverse(chosen.begin(), chosen.end());
  return chosen;
}

class KnapsackEnvironment final : public Environment {
 public:
  KnapsackEnvironment()
      : Environment(detail::describe("knapsack", "0/1 knapsack", EnvCategory::Optimization, kLinearCap, false,
                                     RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 3; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const std::int64_t n = static_cast<std::int64_t>(d) + 3;
    std::vector<std::int64_t> weights(static_cast<std::size_t>(n));
    std::vector<std::int64_t> values(static_cast<std::size_t>(n));
    std::string listing;
    std::int64_t total = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      weights[i] = rng.uniform_int(1, 20);
      values[i] = rng.uniform_int(1, 20);
      total += weights[i];
      listing += "item " + std::to_string(i) + ": weight " + std::to_string(weights[i]) + ", value " +
                 std::to_string(values[i]) + "\n";
    }
    const std::int64_t capacity = total / 2;
    ProblemInstance p;
    p.params = Json{{"weights", weights}, {"values", values}, {"capacity", capacity}};
    p.prompt = "You have " + std::to_string(n) + " items, numbered from 0:\n" + listing +
               "\nChoose a set of items whose total weight is at most " + std::to_string(capacity) +
               " and whose total value is as large as possible. Output the indices of the chosen items on the "
               "last line, separated by spaces.";
    p.reference_answer = detail::join(knapsack_choice(weights, values, capacity));
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const auto weights = detail::int_vector(instance.params.at("weights"));
    const auto values = detail::int_vector(instance.params.at("values"));
    const std::int64_t capacity = detail::as_int(instance.params.at("capacity"));
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto chosen = parse_int_list(*answer);
    if (!chosen) return VerificationVerdict::parse_failure("answer is not a list of integers");
    if (!detail::distinct_indices(*chosen, static_cast<std::int64_t>(weights.size()))) {
      return VerificationVerdict::structural(-0.5, "indices repeat or fall outside the item range");
    }
    std::int64_t weight = 0;
    std::int64_t value = 0;
    for (auto i : *chosen) {
      weight += weights[i];
      value += values[i];
    }
    if (weight > capacity) return VerificationVerdict::structural(0.0, "capacity exceeded");
    const std::int64_t best = algo::knapsack_optimum(weights, values, capacity);
    if (best == 0) return VerificationVerdict::graded(1.0);
    return VerificationVerdict::graded(std::pow(static_cast<double>(value) / static_cast<double>(best), 5));
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    const auto n = static_cast<std::int64_t>(instance.params.at("weights").size());
    return perturb_selection(instance.reference_answer.value_or(""), n, rng);
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "item count N = d + 3",
        Json{{"weights", "N integers in [1, 20]"}, {"values", "N integers in [1, 20]"},
             {"capacity", "floor(total weight / 2)"}},
        "distinct 0-based item indices; -0.5 on repeats or out-of-range indices, 0 when overweight, otherwise "
        "(value / optimal value)^5");
  }
};

// ---------------------------------------------------------------- SAT

struct Clause {
  std::int64_t literals[3];
};

std::vector<Clause> clauses_from(const Json& j) {
  std::vector<Clause> out;
  for (const auto& c : j) out.push_back({{c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>(), c.at(2).get<std::int64_t>()}});
  return out;
}

bool satisfied(const Clause& c, const std::vector<std::int64_t>& assignment) {
  for (auto lit : c.literals) {
    const auto var = static_cast<std::size_t>((lit < 0 ? -lit : lit) - 1);
    if ((assignment[var] == 1) == (lit > 0)) return true;
  }
  return false;
}

class SatEnvironment final : public Environment {
 public:
  SatEnvironment()
      : Environment(detail::describe("sat", "3-SAT", EnvCategory::NpComplete, kLinearCap, true, RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 3; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const int n = static_cast<int>(d) + 3;
    const int m = 4 * n;
    std::vector<std::int64_t> planted(static_cast<std::size_t>(n));
    for (auto& v : planted) v = rng.bernoulli(0.5) ? 1 : 0;
    Json clause_json = Json::array();
    std::string listing;
    for (int c = 0; c < m; ++c) {
      Clause clause{};
      do {
        std::int64_t vars[3];
        for (int k = 0; k < 3; ++k) {
          bool fresh = false;
          while (!fresh) {
            vars[k] = rng.uniform_int(1, n);
            fresh = std::find(vars, vars + k, vars[k]) == vars + k;
          }
          clause.literals[k] = rng.bernoulli(0.5) ? vars[k] : -vars[k];
        }
      } while (!satisfied(clause, planted));
      clause_json.push_back(Json::array({clause.literals[0], clause.literals[1], clause.literals[2]}));
      listing += "(";
      for (int k = 0; k < 3; ++k) {
        const auto lit = clause.literals[k];
        if (k) listing += " OR ";
        listing += (lit < 0 ? "NOT x" : "x") + std::to_string(lit < 0 ? -lit : lit);
      }
      listing += ")\n";
    }
    ProblemInstance p;
    p.params = Json{{"n", n}, {"clauses", clause_json}};
    p.prompt = "Find an assignment of the boolean variables x1..x" + std::to_string(n) +
               " that satisfies every clause below:\n" + listing + "\nOutput the values of x1..x" +
               std::to_string(n) + " on the last line as " + std::to_string(n) +
               " digits (0 or 1) separated by spaces.";
    p.reference_answer = detail::join(planted);
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const auto n = static_cast<std::size_t>(detail::as_int(instance.params.at("n")));
    const auto clauses = clauses_from(instance.params.at("clauses"));
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto assignment = parse_int_list(*answer);
    if (!assignment) return VerificationVerdict::parse_failure("answer is not a list of integers");
    if (assignment->size() != n) return VerificationVerdict::structural(-0.5, "wrong number of values");
    for (auto v : *assignment) {
      if (v != 0 && v != 1) return VerificationVerdict::structural(-0.5, "values must be 0 or 1");
    }
    std::size_t sat = 0;
    for (const auto& c : clauses) sat += satisfied(c, *assignment);
    return VerificationVerdict::graded(std::pow(static_cast<double>(sat) / static_cast<double>(clauses.size()), 5));
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    auto assignment = parse_int_list(instance.reference_answer.value_or(""));
    if (!assignment || assignment->empty()) return std::nullopt;
    auto& v = (*assignment)[pick_index(assignment->size(), rng)];
    v = 1 - v;
    return detail::join(*assignment);
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "variable count n = d + 3; 4n clauses",
        Json{{"n", "n"}, {"clauses", "4n clauses of three literals over distinct variables; +i is x_i, -i is NOT "
                                     "x_i; all satisfied by a hidden assignment"}},
        "n values in {0, 1}; -0.5 on the wrong count or other values, otherwise (satisfied / total)^5");
  }
};

// ---------------------------------------------------------------- SubsetSum

class SubsetSumEnvironment final : public Environment {
 public:
  SubsetSumEnvironment()
      : Environment(detail::describe("subset_sum", "Subset sum", EnvCategory::NpComplete, kLinearCap, true,
                                     RewardStyle::Binary)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 3; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const std::int64_t n = static_cast<std::int64_t>(d) + 3;
    std::vector<std::int64_t> values(static_cast<std::size_t>(n));
    for (auto& v : values) v = rng.uniform_int(1, 5 * n);
    std::vector<std::int64_t> chosen;
    for (std::int64_t i = 0; i < n; ++i) {
      if (rng.bernoulli(0.5)) chosen.push_back(i);
    }
    if (chosen.empty()) chosen.push_back(rng.uniform_int(0, n - 1));
    std::int64_t target = 0;
    for (auto i : chosen) target += values[i];
    ProblemInstance p;
    p.params = Json{{"values", values}, {"target", target}};
    p.prompt = "You are given " + std::to_string(n) + " positive integers, indexed from 0:\n" +
               detail::join(values) + "\n\nChoose a non-empty set of indices whose values sum to exactly " +
               std::to_string(target) + ". Output the chosen indices on the last line, separated by spaces.";
    p.reference_answer = detail::join(chosen);
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const auto values = detail::int_vector(instance.params.at("values"));
    const std::int64_t target = detail::as_int(instance.params.at("target"));
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto chosen = parse_int_list(*answer);
    if (!chosen) return VerificationVerdict::parse_failure("answer is not a list of integers");
    if (!detail::distinct_indices(*chosen, static_cast<std::int64_t>(values.size()))) {
      return VerificationVerdict::structural(-0.5, "indices repeat or fall outside the range");
    }
    std::int64_t sum = 0;
    for (auto i : *chosen) sum += values[i];
    if (sum != target) return VerificationVerdict::graded(0.0, "wrong sum");
    return VerificationVerdict::exact();
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    const auto n = static_cast<std::int64_t>(instance.params.at("values").size());
    return perturb_selection(instance.reference_answer.value_or(""), n, rng);
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "value count N = d + 3",
        Json{{"values", "N integers in [1, 5N]"}, {"target", "sum of a hidden non-empty subset"}},
        "distinct 0-based indices; -0.5 on repeats or out-of-range indices, +1 when the sum hits the target, "
        "0 otherwise");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_knapsack_environment() { return std::make_shared<KnapsackEnvironment>(); }
std::shared_ptr<const Environment> make_sat_environment() { return std::make_shared<SatEnvironment>(); }
std::shared_ptr<const Environment> make_subset_sum_environment() { return std::make_shared<SubsetSumEnvironment>(); }

}  // namespace rlve
