#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace weedsim {

// Every stochastic operation draws from a std::mt19937_64 seeded with an
// explicit 64-bit seed. The engine sequence is fixed by the C++ standard;
// std:: distributions (Poisson, gamma, normal) are those of the toolchain's
// standard library, so bit-identical output is guaranteed per toolchain.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Deterministic child seed; distinct salts give statistically independent streams.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t salt) noexcept;

// FNV-1a, used to turn scenario keys into salts.
std::uint64_t hash_string(std::string_view text) noexcept;

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Counter-based uniform on [0, 1): depends only on (seed, index).
double hashed_uniform(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace weedsim
