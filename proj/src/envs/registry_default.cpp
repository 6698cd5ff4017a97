#include "rlve/envs.hpp"

namespace rlve {

Registry make_default_registry() {
  Registry registry;
  registry.add(make_sorting_environment());
  registry.add(make_multiplication_environment());
  registry.add(make_bubbleswap_environment());
  registry.add(make_integral_environment());
  registry.add(make_polynomial_minimum_environment());
  registry.add(make_sudoku_environment());
  registry.add(make_hamiltonian_environment());
  registry.add(make_crt_environment());
  registry.add(make_knapsack_environment());
  registry.add(make_shortest_path_environment());
  registry.add(make_sat_environment());
  registry.add(make_inversion_pair_environment());
  registry.add(make_topological_sort_environment());
  registry.add(make_josephus_environment());
  registry.add(make_minimum_spanning_tree_environment());
  registry.add(make_subset_sum_environment());
  return registry;
}

std::vector<std::string> default_simulation_envs() {
  return {"knapsack", "shortest_path", "sat", "inversion_pair", "topological_sort", "minimum_spanning_tree",
          "subset_sum"};
}

}  // namespace rlve
