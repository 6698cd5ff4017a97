#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "rlve/envs.hpp"

namespace rlve {

namespace sudoku {

Grid canonical_grid(int n, int m) {
  const int size = n * m;
  Grid g(static_cast<std::size_t>(size), std::vector<int>(static_cast<std::size_t>(size)));
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) g[r][c] = ((r % n) * m + r / n + c) % size + 1;
  }
  return g;
}

bool is_complete_valid(const Grid& grid, int n, int m) {
  const int size = n * m;
  if (static_cast<int>(grid.size()) != size) return false;
  for (const auto& row : grid) {
    if (static_cast<int>(row.size()) != size) return false;
  }
  auto check = [size](const std::vector<int>& cells) {
    std::vector<char> seen(static_cast<std::size_t>(size) + 1, 0);
    for (int v : cells) {
      if (v < 1 || v > size || seen[v]) return false;
      seen[v] = 1;
    }
    return true;
  };
  for (int r = 0; r < size; ++r) {
    if (!check(grid[r])) return false;
  }
  for (int c = 0; c < size; ++c) {
    std::vector<int> col;
    for (int r = 0; r < size; ++r) col.push_back(grid[r][c]);
    if (!check(col)) return false;
  }
  // Subgrids have n rows and m columns: m of them stacked vertically, n across.
  for (int br = 0; br < m; ++br) {
    for (int bc = 0; bc < n; ++bc) {
      std::vector<int> box;
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < m; ++c) box.push_back(grid[br * n + r][bc * m + c]);
      }
      if (!check(box)) return false;
    }
  }
  return true;
}

}  // namespace sudoku

namespace {

using sudoku::Grid;

// Row order: shuffle the m bands of n rows, then the rows inside each band.
std::vector<int> grouped_order(int groups, int group_size, Rng& rng) {
  auto group_order = detail::random_permutation(groups, rng);
  std::vector<int> out;
  for (int g : group_order) {
    auto inner = detail::random_permutation(group_size, rng);
    for (int i : inner) out.push_back(g * group_size + i);
  }
  return out;
}

Grid transformed_solution(int n, int m, Rng& rng) {
  const int size = n * m;
  const Grid base = sudoku::canonical_grid(n, m);
  const auto rows = grouped_order(m, n, rng);
  const auto cols = grouped_order(n, m, rng);
  const auto symbols = detail::random_permutation(size, rng, 1);
  Grid g(static_cast<std::size_t>(size), std::vector<int>(static_cast<std::size_t>(size)));
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) g[r][c] = symbols[base[rows[r]][cols[c]] - 1];
  }
  if (n == m && rng.bernoulli(0.5)) {
    for (int r = 0; r < size; ++r) {
      for (int c = r + 1; c < size; ++c) std::swap(g[r][c], g[c][r]);
    }
  }
  return g;
}

std::string render_grid(const Grid& g) {
  std::string out;
  for (const auto& row : g) out += detail::join(row) + "\n";
  return out;
}

class SudokuEnvironment final : public Environment {
 public:
  SudokuEnvironment()
      : Environment(detail::describe("sudoku", "Sudoku", EnvCategory::LogicPuzzle, 4, true, RewardStyle::Binary)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 2; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const int limit = static_cast<int>(d) + 2;
    std::vector<std::pair<int, int>> shapes;
    for (int n = 1; n <= limit; ++n) {
      for (int m = 1; m <= limit; ++m) {
        if (std::max(n, m) >= 2 && n * m >= 4) shapes.emplace_back(n, m);
      }
    }
    const auto [n, m] = shapes[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(shapes.size()) - 1))];
    const Grid solution = transformed_solution(n, m, rng);
    const double mask = std::min(0.75, 0.25 + 0.05 * d);
    Grid puzzle = solution;
    for (auto& row : puzzle) {
      for (auto& cell : row) {
        if (rng.bernoulli(mask)) cell = 0;
      }
    }
    const int size = n * m;
    ProblemInstance p;
    p.params = Json{{"n", n}, {"m", m}, {"grid", puzzle}};
    p.prompt = "Solve the following " + std::to_string(size) + "x" + std::to_string(size) +
               " Sudoku. Empty cells are represented by 0. Every row, every column and every subgrid of " +
               std::to_string(n) + " rows by " + std::to_string(m) + " columns must contain each of 1.." +
               std::to_string(size) + " exactly once.\n\n" + render_grid(puzzle) +
               "\nOutput the completed grid as the last " + std::to_string(size) +
               " lines of your response, one row per line with values separated by spaces.";
    auto ref = render_grid(solution);
    ref.pop_back();
    p.reference_answer = ref;
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const int n = static_cast<int>(detail::as_int(instance.params.at("n")));
    const int m = static_cast<int>(detail::as_int(instance.params.at("m")));
    const int size = n * m;
    const auto given = instance.params.at("grid").get<Grid>();
    auto answer = extract_answer(output, static_cast<std::size_t>(size));
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto lines = split_lines(*answer);
    std::vector<std::string_view> rows;
    for (auto line : lines) {
      if (!trim(line).empty()) rows.push_back(line);
    }
    if (static_cast<int>(rows.size()) < size) return VerificationVerdict::parse_failure("too few grid rows");
    rows.erase(rows.begin(), rows.end() - size);
    Grid grid;
    for (auto row : rows) {
      auto values = parse_int_list(row);
      if (!values || static_cast<int>(values->size()) != size) {
        return VerificationVerdict::parse_failure("grid row has the wrong shape");
      }
      std::vector<int> cells;
      for (auto v : *values) {
        if (v < 1 || v > size) return VerificationVerdict::structural(0.0, "value out of range");
        cells.push_back(static_cast<int>(v));
      }
      grid.push_back(std::move(cells));
    }
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        if (given[r][c] != 0 && given[r][c] != grid[r][c]) {
          return VerificationVerdict::structural(0.0, "contradicts a given cell");
        }
      }
    }
    if (!sudoku::is_complete_valid(grid, n, m)) return VerificationVerdict::structural(0.0, "rule violated");
    return VerificationVerdict::exact();
  }

  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    if (!instance.reference_answer) return std::nullopt;
    const int size = static_cast<int>(detail::as_int(instance.params.at("n")) * detail::as_int(instance.params.at("m")));
    Grid grid;
    for (auto line : split_lines(*instance.reference_answer)) {
      auto values = parse_int_list(line);
      if (!values) return std::nullopt;
      grid.emplace_back(values->begin(), values->end());
    }
    const auto r = static_cast<std::size_t>(rng.uniform_int(0, size - 1));
    const auto c = static_cast<std::size_t>(rng.uniform_int(0, size - 1));
    grid[r][c] = grid[r][c] % size + 1;
    auto out = render_grid(grid);
    out.pop_back();
    return out;
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "largest subgrid side max(n, m) <= d + 2",
        Json{{"n", "subgrid rows"}, {"m", "subgrid columns"}, {"grid", "(n*m) x (n*m) integers, 0 for empty cells"}},
        "the last n*m non-empty lines, each with n*m integers; +1 when the grid is complete, valid and consistent "
        "with the givens, 0 on any violation, -1 when it does not parse");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_sudoku_environment() { return std::make_shared<SudokuEnvironment>(); }

}  // namespace rlve
