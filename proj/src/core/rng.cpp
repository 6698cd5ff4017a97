#include "rlve/rng.hpp"

#include <limits>

namespace rlve {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t derive_seed(const RandomnessCoordinates& coords) {
  std::uint64_t h = splitmix64(coords.master_seed);
  h = splitmix64(h ^ fnv1a64(coords.env_id));
  return splitmix64(h ^ splitmix64(coords.counter + 0x632BE59BD9B4E019ULL));
}

RandomnessCoordinates RandomnessCoordinates::child(std::string_view tag, std::uint64_t index) const {
  RandomnessCoordinates out;
  out.master_seed = master_seed;
  out.env_id = env_id;
  out.env_id.push_back('/');
  out.env_id.append(tag);
  out.counter = splitmix64(counter ^ splitmix64(index + 0xD1B54A32D192ED03ULL));
  return out;
}

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (range == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit span
  const std::uint64_t threshold = (0 - range) % range;
  for (;;) {
    std::uint64_t r = next_u64();
    if (r >= threshold) return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + r % range);
  }
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace rlve
