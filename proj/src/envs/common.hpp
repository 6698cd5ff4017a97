#pragma once

// Helpers shared by the environment implementations.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rlve/answer.hpp"
#include "rlve/environment.hpp"
#include "rlve/error.hpp"

namespace rlve::detail {

inline EnvironmentDescriptor describe(std::string id, std::string display, EnvCategory category,
                                      DifficultyLevel cap, bool planted, RewardStyle style) {
  return EnvironmentDescriptor{std::move(id), std::move(display), category, cap, planted, style};
}

inline Json manifest_record(std::string size_parameter, Json params_schema, std::string answer_grammar) {
  Json j = Json::object();
  j["size_parameter"] = std::move(size_parameter);
  j["params_schema"] = std::move(params_schema);
  j["answer_grammar"] = std::move(answer_grammar);
  return j;
}

template <class T>
std::string join(std::span<const T> values, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& values, std::string_view sep = " ") {
  return join(std::span<const T>(values), sep);
}

inline std::vector<int> iota_vector(int n, int start = 0) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = start + i;
  return v;
}

inline std::vector<int> random_permutation(int n, Rng& rng, int start = 0) {
  auto v = iota_vector(n, start);
  rng.shuffle(std::span<int>(v));
  return v;
}

/// Calls fn(i) for each i in [0, count) kept independently with probability q,
/// jumping over the skipped indices with geometric gaps.
template <class F>
void for_each_bernoulli_index(std::int64_t count, double q, Rng& rng, F&& fn) {
  if (q <= 0.0) return;
  if (q >= 1.0) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const double log_miss = std::log1p(-q);
  std::int64_t i = -1;
  for (;;) {
    const double u = 1.0 - rng.uniform01();
    const double gap = std::floor(std::log(u) / log_miss);
    if (gap >= static_cast<double>(count)) return;
    i += 1 + static_cast<std::int64_t>(gap);
    if (i >= count) return;
    fn(i);
  }
}

inline std::int64_t as_int(const Json& j) { return j.get<std::int64_t>(); }

inline std::vector<std::int64_t> int_vector(const Json& j) { return j.get<std::vector<std::int64_t>>(); }

/// A parsed list of 0-based indices, each in [0, n), with no repeats.
inline bool distinct_indices(const std::vector<std::int64_t>& indices, std::int64_t n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (auto i : indices) {
    if (i < 0 || i >= n) return false;
    if (seen[static_cast<std::size_t>(i)]) return false;
    seen[static_cast<std::size_t>(i)] = 1;
  }
  return true;
}

inline bool is_permutation_of_range(const std::vector<std::int64_t>& values, std::int64_t n) {
  return static_cast<std::int64_t>(values.size()) == n && distinct_indices(values, n);
}

}  // namespace rlve::detail
