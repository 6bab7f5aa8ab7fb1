#pragma once

#include <cstdint>
#include <random>

namespace swarm {

// All randomness in the library flows through explicitly seeded engines.
// The integer and real mappings below are written out by hand so draws are
// identical across standard library implementations.
using Engine = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

// Stable per-trial seed: hash(base, a, b). Adding or removing other trials
// never changes the seed of (a, b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Engine& engine);

// Uniform integer in [0, bound). bound must be positive.
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound);

}  // namespace swarm
