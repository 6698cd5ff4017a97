#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>
#include <numeric>
#include <queue>
#include <set>

#include "common.hpp"
#include "rlve/envs.hpp"
#include "rlve/envs/algorithms.hpp"

namespace rlve {

namespace {

constexpr DifficultyLevel kLinearCap = 400;

double edge_probability(int n) { return std::min(0.5, 3.0 / n); }

std::vector<algo::WeightedEdge> weighted_edges(const Json& j) {
  std::vector<algo::WeightedEdge> out;
  for (const auto& e : j) {
    out.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<std::int64_t>()});
  }
  return out;
}

Json weighted_edges_json(const std::vector<algo::WeightedEdge>& edges) {
  Json out = Json::array();
  for (const auto& e : edges) out.push_back(Json::array({e.from, e.to, e.weight}));
  return out;
}

std::string weighted_listing(const std::vector<algo::WeightedEdge>& edges) {
  std::string out;
  for (const auto& e : edges) {
    out += "(" + std::to_string(e.from) + ", " + std::to_string(e.to) + ", " + std::to_string(e.weight) + ")\n";
  }
  return out;
}

// ---------------------------------------------------------------- ShortestPath

std::vector<int> dijkstra_path(int n, const std::vector<algo::WeightedEdge>& edges, int source, int target) {
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(static_cast<std::size_t>(n));
  for (const auto& e : edges) adj[e.from].emplace_back(e.to, e.weight);
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(static_cast<std::size_t>(n), inf);
  std::vector<int> prev(static_cast<std::size_t>(n), -1);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[source] = 0;
  pq.emplace(0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d != dist[u]) continue;
    for (auto [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        prev[v] = u;
        pq.emplace(dist[v], v);
      }
    }
  }
  std::vector<int> path;
  if (dist[target] == inf) return path;
  for (int v = target; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

// Length of a walk, or nullopt when it is not a walk from 0 to n-1 over edges.
std::optional<std::int64_t> walk_length(int n, const std::vector<algo::WeightedEdge>& edges,
                                        const std::vector<std::int64_t>& walk) {
  if (walk.size() < 2 || walk.front() != 0 || walk.back() != n - 1) return std::nullopt;
  for (auto v : walk) {
    if (v < 0 || v >= n) return std::nullopt;
  }
  std::unordered_map<std::int64_t, std::int64_t> weight;
  weight.reserve(edges.size());
  for (const auto& e : edges) weight[static_cast<std::int64_t>(e.from) * n + e.to] = e.weight;
  std::int64_t total = 0;
  for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
    auto it = weight.find(walk[i] * n + walk[i + 1]);
    if (it == weight.end()) return std::nullopt;
    total += it->second;
  }
  return total;
}

class ShortestPathEnvironment final : public Environment {
 public:
  ShortestPathEnvironment()
      : Environment(detail::describe("shortest_path", "Shortest path", EnvCategory::ClassicalAlgorithm, kLinearCap,
                                     false, RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 4; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const int n = static_cast<int>(d) + 4;
    // Backbone 0 -> (shuffled middle vertices) -> n-1 guarantees reachability.
    auto middle = detail::random_permutation(n - 2, rng, 1);
    std::vector<int> backbone{0};
    backbone.insert(backbone.end(), middle.begin(), middle.end());
    backbone.push_back(n - 1);
    std::set<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i + 1 < backbone.size(); ++i) pairs.emplace(backbone[i], backbone[i + 1]);
    const double q = edge_probability(n);
    for (int s = 0; s < n; ++s) {
      detail::for_each_bernoulli_index(n - 1, q, rng, [&](std::int64_t k) {
        const int t = static_cast<int>(k) < s ? static_cast<int>(k) : static_cast<int>(k) + 1;
        pairs.emplace(s, t);
      });
    }
    std::vector<algo::WeightedEdge> edges;
    for (const auto& [s, t] : pairs) edges.push_back({s, t, rng.uniform_int(1, 10)});
    const auto path = dijkstra_path(n, edges, 0, n - 1);

    ProblemInstance p;
    p.params = Json{{"n", n}, {"edges", weighted_edges_json(edges)}};
    p.prompt = "You are given a directed graph with " + std::to_string(n) + " vertices labeled 0 to " +
               std::to_string(n - 1) + ". Each edge (s, t, w) goes from s to t with weight w:\n" +
               weighted_listing(edges) + "\nFind a path from vertex 0 to vertex " + std::to_string(n - 1) +
               " with the minimum total weight. Output the vertices of the path in order on the last line, "
               "separated by spaces.";
    p.reference_answer = detail::join(path);
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const int n = static_cast<int>(detail::as_int(instance.params.at("n")));
    const auto edges = weighted_edges(instance.params.at("edges"));
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto walk = parse_int_list(*answer);
    if (!walk) return VerificationVerdict::parse_failure("answer is not a list of integers");
    auto length = walk_length(n, edges, *walk);
    if (!length) return VerificationVerdict::structural(-0.5, "not a path from 0 to the last vertex");
    const auto best = algo::shortest_path_length(n, edges, 0, n - 1);
    if (!best) return VerificationVerdict::graded(0.0);
    return VerificationVerdict::graded(std::pow(static_cast<double>(*best) / static_cast<double>(*length), 5));
  }

  // A random simple path; when it happens to be optimal, a truncated walk.
  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    const int n = static_cast<int>(detail::as_int(instance.params.at("n")));
    const auto edges = weighted_edges(instance.params.at("edges"));
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& e : edges) adj[e.from].push_back(e.to);
    for (auto& list : adj) rng.shuffle(std::span<int>(list));
    std::vector<int> path{0};
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    visited[0] = 1;
    std::function<bool(int)> dfs = [&](int u) {
      if (u == n - 1) return true;
      for (int v : adj[u]) {
        if (visited[v]) continue;
        visited[v] = 1;
        path.push_back(v);
        if (dfs(v)) return true;
        path.pop_back();
      }
      return false;
    };
    const auto best = algo::shortest_path_length(n, edges, 0, n - 1);
    if (dfs(0)) {
      std::vector<std::int64_t> walk(path.begin(), path.end());
      const auto length = walk_length(n, edges, walk);
      if (length && best && *length > *best) return detail::join(path);
    }
    auto reference = parse_int_list(instance.reference_answer.value_or(""));
    if (!reference || reference->size() < 2) return std::nullopt;
    reference->pop_back();
    return detail::join(*reference);
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "vertex count N = d + 4",
        Json{{"n", "N"}, {"edges", "directed edges [s, t, w] with w in [1, 10]; a backbone path 0 -> N-1 through "
                                   "every vertex plus extra edges with probability min(0.5, 3/N)"}},
        "a walk of vertex labels from 0 to N-1 along edges; -0.5 when it is not, otherwise (optimal / length)^5");
  }
};

// ---------------------------------------------------------------- TopologicalSort

class TopologicalSortEnvironment final : public Environment {
 public:
  TopologicalSortEnvironment()
      : Environment(detail::describe("topological_sort", "Topological sort", EnvCategory::ClassicalAlgorithm,
                                     kLinearCap, true, RewardStyle::Binary)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 3; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const int n = static_cast<int>(d) + 3;
    const auto order = detail::random_permutation(n, rng);
    const double q = edge_probability(n);
    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      detail::for_each_bernoulli_index(n - 1 - i, q, rng,
                                       [&](std::int64_t k) { edges.emplace(order[i], order[i + 1 + k]); });
    }
    if (edges.empty()) {
      const int i = static_cast<int>(rng.uniform_int(0, n - 2));
      edges.emplace(order[i], order[i + 1]);
    }
    Json edge_json = Json::array();
    std::string listing;
    for (const auto& [s, t] : edges) {
      edge_json.push_back(Json::array({s, t}));
      listing += "(" + std::to_string(s) + ", " + std::to_string(t) + ")\n";
    }
    ProblemInstance p;
    p.params = Json{{"n", n}, {"edges", edge_json}};
    p.prompt = "You are given a directed acyclic graph with " + std::to_string(n) + " vertices labeled 0 to " +
               std::to_string(n - 1) + ". Each edge (s, t) means s must come before t:\n" + listing +
               "\nOutput an ordering of all vertices that respects every edge, on the last line, separated by "
               "spaces.";
    p.reference_answer = detail::join(order);
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const std::int64_t n = detail::as_int(instance.params.at("n"));
    auto answer = extract_answer(output);
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto order = parse_int_list(*answer);
    if (!order) return VerificationVerdict::parse_failure("answer is not a list of integers");
    if (!detail::is_permutation_of_range(*order, n)) {
      return VerificationVerdict::structural(-0.5, "not a permutation of the vertices");
    }
    std::vector<std::int64_t> position(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order->size(); ++i) position[(*order)[i]] = static_cast<std::int64_t>(i);
    for (const auto& e : instance.params.at("edges")) {
      if (position[e.at(0).get<std::size_t>()] > position[e.at(1).get<std::size_t>()]) {
        return VerificationVerdict::structural(0.0, "an edge is violated");
      }
    }
    return VerificationVerdict::exact();
  }

  // Swapping the endpoints of an edge always violates that edge.
  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    auto order = parse_int_list(instance.reference_answer.value_or(""));
    const auto& edges = instance.params.at("edges");
    if (!order || edges.empty()) return std::nullopt;
    const auto& e = edges.at(static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(edges.size()) - 1)));
    auto a = std::find(order->begin(), order->end(), e.at(0).get<std::int64_t>());
    auto b = std::find(order->begin(), order->end(), e.at(1).get<std::int64_t>());
    if (a == order->end() || b == order->end()) return std::nullopt;
    std::iter_swap(a, b);
    return detail::join(*order);
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "vertex count N = d + 3",
        Json{{"n", "N"}, {"edges", "directed edges [s, t] consistent with a hidden order, each forward pair with "
                                   "probability min(0.5, 3/N), at least one edge"}},
        "a permutation of 0..N-1; +1 when every edge points forward, 0 when one does not, -0.5 when not a "
        "permutation");
  }
};

// ---------------------------------------------------------------- MinimumSpanningTree

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

std::vector<algo::WeightedEdge> kruskal_tree(int n, std::vector<algo::WeightedEdge> edges) {
  std::stable_sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) { return a.weight < b.weight; });
  Dsu dsu(n);
  std::vector<algo::WeightedEdge> tree;
  for (const auto& e : edges) {
    if (dsu.unite(e.from, e.to)) tree.push_back(e);
  }
  return tree;
}

std::map<std::pair<int, int>, std::int64_t> undirected_weights(const std::vector<algo::WeightedEdge>& edges) {
  std::map<std::pair<int, int>, std::int64_t> out;
  for (const auto& e : edges) out[{std::min(e.from, e.to), std::max(e.from, e.to)}] = e.weight;
  return out;
}

std::string tree_text(const std::vector<std::pair<int, int>>& pairs) {
  std::string out;
  for (const auto& [u, v] : pairs) {
    if (!out.empty()) out += "\n";
    out += std::to_string(u) + " " + std::to_string(v);
  }
  return out;
}

class MinimumSpanningTreeEnvironment final : public Environment {
 public:
  MinimumSpanningTreeEnvironment()
      : Environment(detail::describe("minimum_spanning_tree", "Minimum spanning tree", EnvCategory::ClassicalAlgorithm,
                                     kLinearCap, false, RewardStyle::Graded)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return static_cast<std::int64_t>(d) + 4; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override {
    const int n = static_cast<int>(d) + 4;
    const auto order = detail::random_permutation(n, rng);
    std::set<std::pair<int, int>> pairs;
    for (int i = 1; i < n; ++i) {
      const int u = order[i];
      const int v = order[static_cast<std::size_t>(rng.uniform_int(0, i - 1))];
      pairs.emplace(std::min(u, v), std::max(u, v));
    }
    const double q = edge_probability(n);
    for (int u = 0; u < n; ++u) {
      detail::for_each_bernoulli_index(n - 1 - u, q, rng,
                                       [&](std::int64_t k) { pairs.emplace(u, u + 1 + static_cast<int>(k)); });
    }
    std::vector<algo::WeightedEdge> edges;
    for (const auto& [u, v] : pairs) edges.push_back({u, v, rng.uniform_int(1, 20)});
    std::vector<std::pair<int, int>> tree;
    for (const auto& e : kruskal_tree(n, edges)) tree.emplace_back(e.from, e.to);

    ProblemInstance p;
    p.params = Json{{"n", n}, {"edges", weighted_edges_json(edges)}};
    p.prompt = "You are given a connected undirected graph with " + std::to_string(n) + " vertices labeled 0 to " +
               std::to_string(n - 1) + ". Each edge (u, v, w) joins u and v with weight w:\n" +
               weighted_listing(edges) + "\nFind a spanning tree with the minimum total weight. Output its " +
               std::to_string(n - 1) + " edges as the last " + std::to_string(n - 1) +
               " lines, each line holding the two endpoints \"u v\".";
    p.reference_answer = tree_text(tree);
    return p;
  }

  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    const int n = static_cast<int>(detail::as_int(instance.params.at("n")));
    const auto edges = weighted_edges(instance.params.at("edges"));
    auto answer = extract_answer(output, static_cast<std::size_t>(n - 1));
    if (!answer) return VerificationVerdict::parse_failure("no answer found");
    auto values = parse_int_list(*answer);
    if (!values) return VerificationVerdict::parse_failure("answer is not a list of integers");
    if (values->size() != 2 * static_cast<std::size_t>(n - 1)) {
      return VerificationVerdict::structural(-0.5, "wrong number of edges");
    }
    const auto weights = undirected_weights(edges);
    Dsu dsu(n);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < values->size(); i += 2) {
      const auto a = (*values)[i];
      const auto b = (*values)[i + 1];
      if (a < 0 || b < 0 || a >= n || b >= n) return VerificationVerdict::structural(-0.5, "vertex out of range");
      auto it = weights.find({static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b))});
      if (it == weights.end()) return VerificationVerdict::structural(-0.5, "not an edge of the graph");
      if (!dsu.unite(static_cast<int>(a), static_cast<int>(b))) {
        return VerificationVerdict::structural(-0.5, "edges contain a cycle");
      }
      total += it->second;
    }
    const auto best = algo::minimum_spanning_weight(n, edges);
    if (!best) return VerificationVerdict::graded(0.0);
    return VerificationVerdict::graded(std::pow(static_cast<double>(*best) / static_cast<double>(total), 5));
  }

  // Exchange one tree edge for a non-tree edge that reconnects the two halves.
  std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const override {
    const int n = static_cast<int>(detail::as_int(instance.params.at("n")));
    const auto edges = weighted_edges(instance.params.at("edges"));
    auto values = parse_int_list(instance.reference_answer.value_or(""));
    if (!values) return std::nullopt;
    std::vector<std::pair<int, int>> tree;
    std::set<std::pair<int, int>> in_tree;
    for (std::size_t i = 0; i + 1 < values->size(); i += 2) {
      const int a = static_cast<int>((*values)[i]);
      const int b = static_cast<int>((*values)[i + 1]);
      tree.emplace_back(a, b);
      in_tree.emplace(std::min(a, b), std::max(a, b));
    }
    std::vector<std::pair<int, int>> outside;
    for (const auto& e : edges) {
      if (!in_tree.contains({std::min(e.from, e.to), std::max(e.from, e.to)})) outside.emplace_back(e.from, e.to);
    }
    if (outside.empty()) {
      if (tree.empty()) return std::nullopt;
      tree.pop_back();
      return tree_text(tree);
    }
    const auto [u, v] = outside[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(outside.size()) - 1))];
    // Tree path from u to v by BFS; removing any edge on it keeps a spanning tree after adding (u, v).
    std::vector<std::vector<std::pair<int, std::size_t>>> adj(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < tree.size(); ++i) {
      adj[tree[i].first].emplace_back(tree[i].second, i);
      adj[tree[i].second].emplace_back(tree[i].first, i);
    }
    std::vector<std::pair<int, std::size_t>> via(static_cast<std::size_t>(n), {-1, 0});
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<int> bfs;
    bfs.push(u);
    seen[u] = 1;
    while (!bfs.empty()) {
      const int x = bfs.front();
      bfs.pop();
      for (auto [y, idx] : adj[x]) {
        if (seen[y]) continue;
        seen[y] = 1;
        via[y] = {x, idx};
        bfs.push(y);
      }
    }
    if (!seen[v]) return std::nullopt;
    std::vector<std::size_t> path_edges;
    for (int x = v; x != u; x = via[x].first) path_edges.push_back(via[x].second);
    const auto drop = path_edges[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(path_edges.size()) - 1))];
    tree[drop] = {u, v};
    return tree_text(tree);
  }

  Json manifest_details() const override {
    return detail::manifest_record(
        "vertex count N = d + 4",
        Json{{"n", "N"}, {"edges", "undirected edges [u, v, w] with w in [1, 20]; a random spanning tree plus "
                                   "extra edges with probability min(0.5, 3/N)"}},
        "N-1 vertex pairs; -0.5 unless they form a spanning tree of graph edges, otherwise (optimal / weight)^5");
  }
};

}  // namespace

std::shared_ptr<const Environment> make_shortest_path_environment() {
  return std::make_shared<ShortestPathEnvironment>();
}
std::shared_ptr<const Environment> make_topological_sort_environment() {
  return std::make_shared<TopologicalSortEnvironment>();
}
std::shared_ptr<const Environment> make_minimum_spanning_tree_environment() {
  return std::make_shared<MinimumSpanningTreeEnvironment>();
}

}  // namespace rlve
