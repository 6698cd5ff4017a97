#include "rlve/envs/algorithms.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <queue>

namespace rlve::algo {

namespace {

std::uint64_t merge_count(std::vector<std::int64_t>& a, std::vector<std::int64_t>& tmp, std::size_t lo,
                          std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = merge_count(a, tmp, lo, mid) + merge_count(a, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[j] < a[i]) {
      count += mid - i;
      tmp[k++] = a[j++];
    } else {
      tmp[k++] = a[i++];
    }
  }
  while (i < mid) tmp[k++] = a[i++];
  while (j < hi) tmp[k++] = a[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            a.begin() + static_cast<std::ptrdiff_t>(lo));
  return count;
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = a % m, r = m, old_s = 1, s = 0;
  if (old_r < 0) old_r += m;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  std::int64_t inv = old_s % m;
  return inv < 0 ? inv + m : inv;
}

}  // namespace

std::uint64_t inversion_count(std::span<const std::int64_t> values) {
  std::vector<std::int64_t> a(values.begin(), values.end());
  std::vector<std::int64_t> tmp(a.size());
  return merge_count(a, tmp, 0, a.size());
}

std::int64_t josephus_survivor(std::int64_t n, std::int64_t k) {
  std::int64_t pos = 0;
  for (std::int64_t size = 2; size <= n; ++size) pos = (pos + k) % size;
  return pos + 1;
}

std::int64_t knapsack_optimum(std::span<const std::int64_t> weights, std::span<const std::int64_t> values,
                              std::int64_t capacity) {
  if (capacity < 0) return 0;
  std::vector<std::int64_t> best(static_cast<std::size_t>(capacity) + 1, 0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const std::int64_t w = weights[i];
    if (w > capacity) continue;
    for (std::int64_t c = capacity; c >= w; --c) {
      best[c] = std::max(best[c], best[c - w] + values[i]);
    }
  }
  return best[capacity];
}

std::optional<std::int64_t> shortest_path_length(int n, std::span<const WeightedEdge> edges, int source, int target) {
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(static_cast<std::size_t>(n));
  for (const auto& e : edges) adj[e.from].push_back({e.to, e.weight});
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(static_cast<std::size_t>(n), kInf);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0;
  queue.push({0, source});
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d != dist[u]) continue;
    if (u == target) return d;
    for (auto [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        queue.push({dist[v], v});
      }
    }
  }
  return std::nullopt;
}

std::optional<std::int64_t> minimum_spanning_weight(int n, std::span<const WeightedEdge> edges) {
  std::vector<WeightedEdge> sorted(edges.begin(), edges.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const WeightedEdge& a, const WeightedEdge& b) { return a.weight < b.weight; });
  DisjointSet dsu(n);
  std::int64_t total = 0;
  int used = 0;
  for (const auto& e : sorted) {
    if (dsu.unite(e.from, e.to)) {
      total += e.weight;
      ++used;
    }
  }
  if (used != n - 1) return std::nullopt;
  return total;
}

bool swaps_equal_lower_bound(std::span<const int> perm) {
  std::vector<std::int64_t> values(perm.begin(), perm.end());
  std::int64_t displacement = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) displacement += std::abs(static_cast<std::int64_t>(i + 1) - perm[i]);
  return 2 * static_cast<std::int64_t>(inversion_count(values)) == displacement;
}

std::uint64_t count_lower_bound_permutations_fast(std::span<const int> given) {
  const int n = static_cast<int>(given.size());
  // completions[i][j]: ways to finish with i values left, j of which exceed
  // the running maximum. A value is placeable iff it is a new maximum or the
  // smallest value left.
  std::vector<std::vector<std::uint64_t>> completions(static_cast<std::size_t>(n) + 1,
                                                      std::vector<std::uint64_t>(static_cast<std::size_t>(n) + 1, 0));
  completions[0][0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = 0; j <= i; ++j) {
      std::uint64_t ways = (i > j) ? completions[i - 1][j] : 0;
      for (int k = 1; k <= j; ++k) ways += completions[i - 1][j - k];
      completions[i][j] = ways;
    }
  }

  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  int running_max = 0;
  std::uint64_t total = 0;
  for (int t = 0; t < n; ++t) {
    const int remaining = n - t;
    int smallest = 1;
    while (used[smallest]) ++smallest;
    const int floor = std::max(given[t], running_max);
    // Candidates strictly greater than given[t] that are new maxima; the
    // smallest remaining value can never exceed given[t].
    int above = 0;
    for (int v = n; v > floor; --v) {
      if (used[v]) continue;
      total += completions[remaining - 1][above];
      ++above;
    }
    const int v = given[t];
    if (v < 1 || v > n || used[v]) break;
    if (v > running_max) {
      running_max = v;
    } else if (v != smallest) {
      break;
    }
    used[v] = true;
  }
  return total;
}

std::uint64_t count_lower_bound_permutations_exhaustive(std::span<const int> given) {
  std::vector<int> p(given.begin(), given.end());
  std::uint64_t count = 0;
  while (std::next_permutation(p.begin(), p.end())) {
    if (swaps_equal_lower_bound(p)) ++count;
  }
  return count;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

BigInt crt_solve(std::span<const std::int64_t> residues, std::span<const std::int64_t> moduli) {
  BigInt product = 1;
  for (auto m : moduli) product *= m;
  BigInt x = 0;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const BigInt partial = product / moduli[i];
    const std::int64_t partial_mod = static_cast<std::int64_t>(partial % moduli[i]);
    const std::int64_t inv = mod_inverse(partial_mod, moduli[i]);
    x += BigInt(residues[i]) * partial * inv;
  }
  x %= product;
  if (x < 0) x += product;
  return x;
}

}  // namespace rlve::algo
