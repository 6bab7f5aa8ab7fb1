#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "swarm/config.hpp"
#include "swarm/dynamics.hpp"
#include "swarm/interaction.hpp"
#include "swarm/lattice.hpp"

namespace fixture {

inline constexpr double kRa = 1.3660254037844386;

inline swarm::InteractionFunction default_lj() {
  return swarm::InteractionFunction::lennard_jones({}, 1.0, kRa);
}

inline swarm::InteractionFunction truncated_lj() {
  return swarm::InteractionFunction::truncated_lennard_jones({}, 1.0, kRa);
}

inline swarm::SwarmConfig triangle(double side = 1.0) {
  return {{0.0, 0.0}, {side, 0.0}, {0.5 * side, side * std::numbers::sqrt3 / 2.0}};
}

inline swarm::SwarmConfig unit_square() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }

inline swarm::SwarmConfig collinear3() { return {{0, 0}, {1, 0}, {2, 0}}; }

inline swarm::SwarmConfig lattice(std::size_t n, std::uint64_t seed) {
  swarm::LatticeSpec spec;
  spec.n = n;
  spec.seed = seed;
  return swarm::generate_triangular(spec, kRa);
}

inline swarm::SwarmConfig random_config(std::size_t n, double box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, box);
  std::vector<swarm::Vec2> p;
  for (std::size_t i = 0; i < n; ++i) p.emplace_back(u(rng), u(rng));
  return swarm::SwarmConfig(std::move(p));
}

inline swarm::SwarmConfig rigid_motion(const swarm::SwarmConfig& c, double angle,
                                       const swarm::Vec2& shift) {
  const Eigen::Rotation2Dd rot(angle);
  std::vector<swarm::Vec2> p;
  for (const auto& x : c.positions()) p.push_back(rot * x + shift);
  return swarm::SwarmConfig(std::move(p));
}

}  // namespace fixture
