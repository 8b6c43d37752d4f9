#include "weedsim/rng.hpp"

namespace weedsim {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t salt) noexcept {
  return splitmix64(parent ^ splitmix64(salt ^ 0xD1B54A32D192ED03ULL));
}

std::uint64_t hash_string(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

double hashed_uniform(std::uint64_t seed, std::uint64_t index) noexcept {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ (index * 0x9E3779B97F4A7C15ULL));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace weedsim
