#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rlve/environment.hpp"

namespace rlve {

std::shared_ptr<const Environment> make_sorting_environment();
std::shared_ptr<const Environment> make_multiplication_environment();
std::shared_ptr<const Environment> make_bubbleswap_environment();
std::shared_ptr<const Environment> make_integral_environment();
std::shared_ptr<const Environment> make_polynomial_minimum_environment();
std::shared_ptr<const Environment> make_sudoku_environment();
std::shared_ptr<const Environment> make_hamiltonian_environment();

std::shared_ptr<const Environment> make_crt_environment();
std::shared_ptr<const Environment> make_knapsack_environment();
std::shared_ptr<const Environment> make_shortest_path_environment();
std::shared_ptr<const Environment> make_sat_environment();
std::shared_ptr<const Environment> make_inversion_pair_environment();
std::shared_ptr<const Environment> make_topological_sort_environment();
std::shared_ptr<const Environment> make_josephus_environment();
std::shared_ptr<const Environment> make_minimum_spanning_tree_environment();
std::shared_ptr<const Environment> make_subset_sum_environment();

/// All sixteen environments.
Registry make_default_registry();

/// The environments used by simulations when a config names none: the
/// tier-2 families whose size grows linearly with difficulty.
std::vector<std::string> default_simulation_envs();

/// Sorting array length at difficulty d: max(2, round-half-up(3 * 1.1^d)).
std::int64_t sorting_length(std::uint32_t d);

namespace sudoku {

using Grid = std::vector<std::vector<int>>;

/// Solved grid value(r, c) = ((r mod n)*m + r/n + c) mod (n*m) + 1, with
/// subgrids of n rows by m columns.
Grid canonical_grid(int n, int m);

/// Every row, column and n-by-m subgrid holds 1..n*m exactly once.
bool is_complete_valid(const Grid& grid, int n, int m);

}  // namespace sudoku

}  // namespace rlve
