#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rlve/envs/rewards.hpp"

// Fast reference solvers used by generators and verifiers. Tests check each
// one against an independent exhaustive implementation.
namespace rlve::algo {

std::uint64_t inversion_count(std::span<const std::int64_t> values);

/// Survivor (1-based) of the Josephus elimination with n people and step k.
std::int64_t josephus_survivor(std::int64_t n, std::int64_t k);

/// 0/1 knapsack optimum by dynamic programming over capacity.
std::int64_t knapsack_optimum(std::span<const std::int64_t> weights, std::span<const std::int64_t> values,
                              std::int64_t capacity);

struct WeightedEdge {
  int from = 0;
  int to = 0;
  std::int64_t weight = 0;
  bool operator==(const WeightedEdge&) const = default;
};

/// Dijkstra over a directed graph with non-negative weights.
std::optional<std::int64_t> shortest_path_length(int n, std::span<const WeightedEdge> edges, int source, int target);

/// Kruskal over an undirected graph; nullopt when the graph is disconnected.
std::optional<std::int64_t> minimum_spanning_weight(int n, std::span<const WeightedEdge> edges);

/// Bubble-sort swap count equals the lower bound sum|i - p_i| / 2.
/// `perm` holds the values 1..N.
bool swaps_equal_lower_bound(std::span<const int> perm);

/// Number of permutations p of 1..N with swaps(p) = LB(p) that are
/// lexicographically greater than `given`. Polynomial-time counting walk over
/// the 321-avoiding characterisation; valid for N <= 30.
std::uint64_t count_lower_bound_permutations_fast(std::span<const int> given);

/// Same count by enumerating every permutation after `given`.
std::uint64_t count_lower_bound_permutations_exhaustive(std::span<const int> given);

/// Smallest non-negative x with x = residues[i] (mod moduli[i]); moduli must
/// be pairwise coprime.
BigInt crt_solve(std::span<const std::int64_t> residues, std::span<const std::int64_t> moduli);

std::int64_t gcd(std::int64_t a, std::int64_t b);

}  // namespace rlve::algo
