#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "rlve/answer.hpp"
#include "rlve/envs.hpp"
#include "rlve/envs/algorithms.hpp"
#include "rlve/envs/expression.hpp"
#include "rlve/envs/polynomial.hpp"
#include "rlve/error.hpp"

using namespace rlve;

namespace {

const Registry& registry() {
  static const Registry r = make_default_registry();
  return r;
}

ProblemInstance instance(const std::string& env, Json params, std::optional<std::string> reference = {}) {
  ProblemInstance p;
  p.env_id = env;
  p.params = std::move(params);
  p.reference_answer = std::move(reference);
  p.seed_path = {0, env, 0};
  return p;
}

double reward(const ProblemInstance& p, const std::string& out) { return registry().verify_output(p, out).reward; }

const std::string kBubble = "bubbleswap_lowerbound_permutation_counting";

}  // namespace

TEST_SUITE("envs") {

TEST_CASE("registry holds the sixteen environments") {
  CHECK(registry().size() == 16);
  const std::set<std::string> expected{"sorting", "multiplication", kBubble, "integral", "polynomial_minimum", "sudoku",
                                       "hamiltonian_path_existence", "crt", "knapsack", "shortest_path", "sat",
                                       "inversion_pair", "topological_sort", "josephus", "minimum_spanning_tree",
                                       "subset_sum"};
  const auto ids = registry().ids();
  CHECK(std::set<std::string>(ids.begin(), ids.end()) == expected);
  for (const auto& id : default_simulation_envs()) CHECK(registry().contains(id));
}

TEST_CASE("size parameters follow the declared formulas") {
  CHECK(sorting_length(0) == 3);
  CHECK(sorting_length(10) == 8);
  CHECK(registry().at("hamiltonian_path_existence").generate(0, {1, "h", 0}).params.at("n") == 3);
  CHECK(registry().at(kBubble).generate(2, {1, "b", 0}).params.at("permutation").size() == 5);
  CHECK(registry().at(kBubble).size_parameter(6) == 9);
  CHECK(registry().at("polynomial_minimum").generate(0, {1, "p", 0}).params.at("degree") == 2);
  CHECK(registry().at("sorting").generate(0, {7, "sorting", 0}).params.at("values").size() == 3);
  CHECK(registry().at("sorting").generate(10, {7, "sorting", 0}).params.at("values").size() == 8);
  for (const auto& d : registry().list()) {
    const auto& env = registry().at(d.env_id);
    for (DifficultyLevel k = 0; k < d.max_supported_difficulty; ++k) {
      CHECK(env.size_parameter(k) <= env.size_parameter(k + 1));
    }
  }
}

TEST_CASE("generation is deterministic and bounded by the cap") {
  for (const auto& d : registry().list()) {
    const auto& env = registry().at(d.env_id);
    const RandomnessCoordinates c{5, d.env_id, 11};
    auto a = env.generate(1, c);
    auto b = env.generate(1, c);
    CHECK(a.prompt == b.prompt);
    CHECK(a.params == b.params);
    CHECK(a.reference_answer == b.reference_answer);
    CHECK(a.difficulty == 1);
    CHECK(a.seed_path == c);
    CHECK_THROWS_AS(env.generate(d.max_supported_difficulty + 1, c), Error);
  }
}

TEST_CASE("near misses never verify as correct") {
  for (const auto& d : registry().list()) {
    const auto& env = registry().at(d.env_id);
    for (DifficultyLevel k = 0; k <= std::min<DifficultyLevel>(d.max_supported_difficulty, 5); ++k) {
      for (std::uint64_t s = 0; s < 5; ++s) {
        auto p = env.generate(k, {s, d.env_id, k});
        const auto miss = env.near_miss(p);
        INFO(d.env_id << " d=" << k);
        CHECK_FALSE(env.verify(p, miss).is_correct());
        CHECK(env.near_miss(p) == miss);
      }
    }
  }
}

TEST_CASE("sorting rewards") {
  auto p = instance("sorting", Json{{"values", {3, 1, 2}}});
  CHECK(reward(p, "1 2 3") == 1.0);
  CHECK(registry().verify_output(p, "1 2 3").category == VerdictCategory::Exact);
  CHECK(reward(p, "1 2") == -0.5);
  CHECK(reward(p, "one two") == -1.0);
  auto q = instance("sorting", Json{{"values", {4, 3, 2, 1}}});
  CHECK(reward(q, "1 2 4 3") == doctest::Approx(std::pow(0.5, 10)).epsilon(1e-12));
  // Reducibility: prepending a new minimum to a sorted reference stays sorted.
  auto inst = registry().at("sorting").generate(4, {3, "sorting", 0});
  auto values = inst.params.at("values").get<std::vector<std::int64_t>>();
  const auto smallest = *std::min_element(values.begin(), values.end()) - 1;
  values.insert(values.begin(), smallest);
  auto bigger = instance("sorting", Json{{"values", values}});
  CHECK(reward(bigger, std::to_string(smallest) + " " + *inst.reference_answer) == 1.0);
}

TEST_CASE("multiplication rewards") {
  auto p = instance("multiplication", Json{{"a", "12"}, {"b", "34"}});
  CHECK(reward(p, "408") == 1.0);
  CHECK(reward(p, "204") == doctest::Approx(std::pow(0.5, 10)));
  CHECK(reward(p, "-5") == -1.0);
  CHECK(reward(p, "0408") == 1.0);
  auto d0 = registry().at("multiplication").generate(0, {1, "m", 0});
  for (const auto* key : {"a", "b"}) {
    const auto v = std::stoll(d0.params.at(key).get<std::string>());
    CHECK(v >= 1);
    CHECK(v <= 9);
  }
  auto big = registry().at("multiplication").generate(38, {1, "m", 0});
  CHECK(big.params.at("a").get<std::string>().size() == 39);
  CHECK(reward(big, *big.reference_answer) == 1.0);
}

TEST_CASE("bubbleswap counting") {
  CHECK(oracle::bubbleswap_count({1, 2, 3}) == 4);
  CHECK(oracle::bubbleswap_count({3, 2, 1}) == 0);
  CHECK(algo::count_lower_bound_permutations_fast(std::vector<int>{1, 2, 3}) == 4);
  CHECK(algo::count_lower_bound_permutations_exhaustive(std::vector<int>{1, 2, 3}) == 4);
  auto p = instance(kBubble, Json{{"n", 3}, {"permutation", {1, 2, 3}}});
  CHECK(reward(p, "4") == 1.0);
  CHECK(reward(p, "8") == doctest::Approx(std::pow(0.5, 10)));
  CHECK(reward(p, "0") == 0.0);
  CHECK(reward(p, "-1") == -1.0);
  auto zero = instance(kBubble, Json{{"n", 3}, {"permutation", {3, 2, 1}}});
  CHECK(reward(zero, "0") == 1.0);
  CHECK(reward(zero, "2") == 0.0);
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> perm(static_cast<std::size_t>(rng.uniform_int(1, 7)));
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i) + 1;
    rng.shuffle(std::span<int>(perm));
    CHECK(algo::count_lower_bound_permutations_fast(perm) == static_cast<std::uint64_t>(oracle::bubbleswap_count(perm)));
  }
}

TEST_CASE("expression parsing, rendering and differentiation") {
  auto e = expr::parse("x*x + 3*sin(x)");
  REQUIRE(e);
  CHECK(*expr::evaluate(*e, 2.0) == doctest::Approx(4 + 3 * std::sin(2.0)));
  auto round = expr::parse(expr::render(*e));
  REQUIRE(round);
  CHECK(*expr::evaluate(*round, 0.7) == doctest::Approx(*expr::evaluate(*e, 0.7)));
  auto de = expr::differentiate(*e);
  CHECK(*expr::evaluate(de, 1.3) == doctest::Approx(2 * 1.3 + 3 * std::cos(1.3)));
  CHECK_FALSE(expr::parse("x^2"));
  CHECK_FALSE(expr::parse("(x"));
  CHECK_FALSE(expr::parse(""));
  CHECK(expr::parse("pow(x, 3)"));
  CHECK(expr::parse("x**3"));
  CHECK_FALSE(expr::evaluate(*expr::parse("log(x)"), -1.0));
  CHECK_FALSE(expr::parse(std::string(5000, '(') + "x" + std::string(5000, ')')));
}

TEST_CASE("integral rewards") {
  auto p = instance("integral", Json{{"f_prime", "2*x"}, {"node_count", 3}});
  CHECK(reward(p, "x*x") == 1.0);
  CHECK(reward(p, "x*x + 7") == 1.0);
  CHECK(reward(p, "x") == 0.0);
  CHECK(reward(p, "x^2") == -1.0);
  for (DifficultyLevel d : {0u, 3u, 10u, 30u}) {
    auto g = registry().at("integral").generate(d, {4, "integral", d});
    CHECK(g.params.at("node_count") == d + 2);
    CHECK(expr::node_count(*expr::parse(*g.reference_answer)) == d + 2);
    CHECK(g.params.at("f_prime").get<std::string>().find('^') == std::string::npos);
    // Reducibility: F + 1 still solves the instance.
    CHECK(reward(g, *g.reference_answer + " + 1") == 1.0);
  }
}

TEST_CASE("polynomial minimum") {
  const auto f = poly::from_integers({1, -2, 1});
  CHECK(static_cast<double>(poly::global_minimizer(f)) == doctest::Approx(1.0));
  const auto roots = poly::real_roots(poly::from_integers({-6, 11, -6, 1}));  // (x-1)(x-2)(x-3)
  REQUIRE(roots.size() == 3);
  CHECK(static_cast<double>(roots[0]) == doctest::Approx(1.0));
  CHECK(static_cast<double>(roots[2]) == doctest::Approx(3.0));
  auto p = instance("polynomial_minimum", Json{{"coefficients", {1, -2, 1}}, {"degree", 2}});
  CHECK(reward(p, "1") == 1.0);
  CHECK(reward(p, "0") == 0.0);
  CHECK(reward(p, "3") == -1.0);
  CHECK(reward(p, "minimum") == -1.0);
  for (DifficultyLevel d = 0; d <= 8; ++d) {
    auto g = registry().at("polynomial_minimum").generate(d, {2, "poly", d});
    const auto c = g.params.at("coefficients").get<std::vector<std::int64_t>>();
    CHECK(c.size() == 2 * (d + 1) + 1);
    CHECK(c.back() >= 1);
    const auto poly = poly::from_integers(c);
    CHECK(static_cast<double>(poly(0) - poly(poly::global_minimizer(poly))) >= 1e-3);
  }
}

TEST_CASE("sudoku") {
  for (int n = 1; n <= 6; ++n) {
    for (int m = 1; m <= 6; ++m) {
      if (n * m < 4 || n * m > 36) continue;
      CHECK(sudoku::is_complete_valid(sudoku::canonical_grid(n, m), n, m));
    }
  }
  auto g = registry().at("sudoku").generate(1, {3, "sudoku", 0});
  const int n = g.params.at("n"), m = g.params.at("m");
  CHECK(std::max(n, m) <= 3);
  CHECK(reward(g, *g.reference_answer) == 1.0);
  auto rows = split_lines(*g.reference_answer);
  std::string broken;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto vals = *parse_int_list(rows[r]);
    if (r == 0) vals[1] = vals[0];
    for (std::size_t i = 0; i < vals.size(); ++i) broken += (i ? " " : "") + std::to_string(vals[i]);
    broken += "\n";
  }
  CHECK(reward(g, broken) == 0.0);
  CHECK(reward(g, "1 2\n2 1") == -1.0);
}

TEST_CASE("hamiltonian path") {
  auto p = instance("hamiltonian_path_existence", Json{{"n", 4}, {"edges", {{0, 1}, {1, 2}, {3, 0}}}});
  CHECK(reward(p, "3 0 1 2") == 1.0);
  CHECK(reward(p, "0 1 2 3") == doctest::Approx(std::pow(2.0 / 3.0, 5)));
  CHECK(reward(p, "0 0 1 2") == -0.5);
  CHECK(reward(p, "path") == -1.0);
  auto g = registry().at("hamiltonian_path_existence").generate(0, {1, "h", 0});
  CHECK(g.params.at("n") == 3);
  CHECK(g.params.at("edges").size() >= 2);
}

TEST_CASE("tier-2 examples") {
  auto sat = registry().at("sat").generate(5, {1, "sat", 0});
  CHECK(reward(sat, *sat.reference_answer) == 1.0);
  auto knap = instance("knapsack", Json{{"weights", {2, 3, 4}}, {"values", {3, 4, 6}}, {"capacity", 5}});
  CHECK(oracle::knapsack_best({2, 3, 4}, {3, 4, 6}, 5) == 7);
  CHECK(reward(knap, "0 1") == 1.0);
  CHECK(reward(knap, "2") == doctest::Approx(std::pow(6.0 / 7.0, 5)));
  CHECK(reward(knap, "1 2") == 0.0);
  CHECK(reward(knap, "0 0") == -0.5);
  auto sp = instance("shortest_path", Json{{"n", 4}, {"edges", {{0, 1, 1}, {1, 3, 1}, {0, 2, 1}, {2, 3, 5}}}});
  CHECK(reward(sp, "0 1 3") == 1.0);
  CHECK(reward(sp, "0 2 3") == doctest::Approx(std::pow(2.0 / 6.0, 5)));
  CHECK(reward(sp, "0 3") == -0.5);
  auto topo = instance("topological_sort", Json{{"n", 3}, {"edges", {{0, 1}, {1, 2}}}});
  CHECK(reward(topo, "0 1 2") == 1.0);
  CHECK(reward(topo, "1 0 2") == 0.0);
  CHECK(reward(topo, "0 1") == -0.5);
  auto mst = instance("minimum_spanning_tree", Json{{"n", 3}, {"edges", {{0, 1, 1}, {1, 2, 2}, {0, 2, 4}}}});
  CHECK(reward(mst, "0 1\n1 2") == 1.0);
  CHECK(reward(mst, "0 1\n0 2") == doctest::Approx(std::pow(3.0 / 5.0, 5)));
  CHECK(reward(mst, "0 1\n1 0") == -0.5);
  auto inv = instance("inversion_pair", Json{{"values", {3, 1, 2}}});
  CHECK(reward(inv, "2") == 1.0);
  CHECK(reward(inv, "3") == 0.0);
  auto jos = instance("josephus", Json{{"n", 7}, {"k", 3}});
  CHECK(oracle::josephus(7, 3) == 4);
  CHECK(reward(jos, "4") == 1.0);
  CHECK(reward(jos, "5") == 0.0);
  auto crt = instance("crt", Json{{"residues", {2, 3}}, {"moduli", {3, 5}}});
  CHECK(oracle::crt_scan({2, 3}, {3, 5}) == 8);
  CHECK(reward(crt, "8") == 1.0);
  CHECK(reward(crt, "23") == 0.0);
  auto ss = instance("subset_sum", Json{{"values", {3, 5, 7}}, {"target", 10}});
  CHECK(reward(ss, "0 2") == 1.0);
  CHECK(reward(ss, "1") == 0.0);
  CHECK(reward(ss, "4") == -0.5);
}

TEST_CASE("library solvers agree with brute force on random instances") {
  Rng rng(99);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::int64_t> w(static_cast<std::size_t>(rng.uniform_int(1, 10))), v(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform_int(1, 20), v[i] = rng.uniform_int(1, 20);
    const auto cap = rng.uniform_int(0, 60);
    CHECK(algo::knapsack_optimum(w, v, cap) == oracle::knapsack_best(w, v, cap));
    std::vector<std::int64_t> a(static_cast<std::size_t>(rng.uniform_int(0, 30)));
    for (auto& x : a) x = rng.uniform_int(-5, 5);
    CHECK(static_cast<std::int64_t>(algo::inversion_count(a)) == oracle::inversions(a));
    const auto n = rng.uniform_int(1, 40), k = rng.uniform_int(1, 12);
    CHECK(algo::josephus_survivor(n, k) == oracle::josephus(n, k));
  }
}

TEST_CASE("verify never throws on hostile input") {
  const std::vector<std::string> hostile{"", std::string(100000, '9'), std::string(3000, '('), "\x00\xff", "nan",
                                         "<answer></answer>", "1e999", "-9223372036854775809"};
  for (const auto& d : registry().list()) {
    auto p = registry().at(d.env_id).generate(0, {0, d.env_id, 0});
    for (const auto& h : hostile) {
      const auto v = registry().verify_output(p, h);
      CHECK(v.reward >= -1.0);
      CHECK(v.reward <= 1.0);
    }
    // Malformed params are reported, not thrown.
    auto broken = p;
    broken.params = Json::object();
    CHECK(registry().verify_output(broken, *p.reference_answer).category == VerdictCategory::ParseFailure);
  }
}

}  // TEST_SUITE
