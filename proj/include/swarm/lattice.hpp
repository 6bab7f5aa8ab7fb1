#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "swarm/config.hpp"
#include "swarm/swarm_graph.hpp"

namespace swarm {

// How the next grid site is drawn from the frontier of the occupied set.
enum class GrowthPolicy {
  // Frontier sites that keep the framework infinitesimally rigid (two
  // non-antipodal occupied neighbours), drawn with probability proportional
  // to their occupied-neighbour count. Default.
  bond_weighted,
  // Same eligible sites, drawn uniformly.
  uniform_rigid,
  // Any unoccupied neighbour, uniformly; verified afterwards and retried.
  // Rarely rigid beyond a handful of agents.
  eden,
};

const char* to_string(GrowthPolicy policy);
// Throws InvalidInput on an unknown name.
GrowthPolicy growth_policy_from_string(const std::string& name);

struct LatticeSpec {
  std::size_t n = 100;
  double R = 1.0;
  std::uint64_t seed = 0;
  GrowthPolicy growth = GrowthPolicy::bond_weighted;
  std::size_t max_attempts = 64;
};

/// n distinct sites of the triangular grid with spacing R, grown by seeded
/// accretion from a single site. The result is verified to be triangular.
SwarmConfig generate_triangular(const LatticeSpec& spec, double R_a);

/// Displaces every agent by an independent uniform sample of the disk of
/// radius delta (radius delta * sqrt(u), angle 2 pi v).
SwarmConfig perturb(const SwarmConfig& config, double delta, std::uint64_t seed);

inline constexpr double kDefaultLengthTol = 1e-6;  // relative to R

struct TriangularReport {
  bool triangular = false;
  bool rigid = false;
  std::size_t rank = 0;
  std::size_t expected_rank = 0;
  std::size_t link_count = 0;
  double max_length_deviation = 0.0;  // equals link_error; 0 when no links
};

/// Rigid and every link within tol_len of R.
TriangularReport is_triangular(const SwarmConfig& config, double R, double R_a, double tol_len,
                               double tol_rank = kDefaultRankTol);

/// max over links of ||r_k| - R|. Throws DegenerateConfiguration without links.
double link_error(const SwarmConfig& config, double R, double R_a);
double link_error(const LinkSet& links, double R);

}  // namespace swarm
