#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace rlve {

/// Coordinates of a random stream. The stream is a pure function of these
/// three fields; nothing else feeds the generator.
struct RandomnessCoordinates {
  std::uint64_t master_seed = 0;
  std::string env_id;
  std::uint64_t counter = 0;

  /// Sub-stream for a named purpose (rollouts, corruption, ...). Pure in
  /// (this, tag, index).
  RandomnessCoordinates child(std::string_view tag, std::uint64_t index) const;

  bool operator==(const RandomnessCoordinates&) const = default;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);
std::uint64_t derive_seed(const RandomnessCoordinates& coords);

// SplitMix64 stream keyed by the derived seed. Construction is a single
// word, which matters because the harness opens a stream per rollout. The
// standard distributions are not bit-reproducible, so ours live here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  explicit Rng(const RandomnessCoordinates& coords) : state_(derive_seed(coords)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in the inclusive range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Uniform real in [0, 1).
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace rlve
