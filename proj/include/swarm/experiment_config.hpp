#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarm/dynamics.hpp"
#include "swarm/interaction.hpp"
#include "swarm/lattice.hpp"

namespace swarm {

inline constexpr const char* kToolVersion = "swarmsim 0.1.0";

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line(line) {}
  std::size_t line;  // 0 when not tied to a file line
};

/// Every knob of an experiment. Defaults reproduce the reference setup:
/// R = 1, R_a = (1 + sqrt 3) / 2, R_s = 3, a = b = 0.5, c = 12, dt = 0.01 s,
/// horizon 20 s, n = 100.
struct ExperimentConfig {
  // [interaction]
  std::string profile = "lennard_jones";
  LennardJonesParams lj;
  double spring_stiffness = 1.0;

  // [geometry] + [simulation]; sim.seed is the perturbation seed of `simulate`
  SimulationParams sim;

  // [experiment]
  std::size_t n = 100;
  double delta = 0.2;
  std::vector<double> deltas = {0.0,  0.05, 0.1,  0.15, 0.2,  0.25, 0.3, 0.35,
                                0.4,  0.45, 0.5,  0.55, 0.6,  0.65, 0.7};
  std::size_t trials = 20;
  std::uint64_t lattice_seed = 1;
  std::uint64_t perturb_seed = 2;
  std::vector<std::size_t> n_values = {25, 50, 100};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  GrowthPolicy growth = GrowthPolicy::bond_weighted;

  // [tolerances]
  double rank_tol = kDefaultRankTol;
  double zero_tol = 1e-8;
  double convergence_tol = 1e-3;
  double dissipation_tol = 1e-3;
  double grid_step = 1e-3;

  // [output]
  std::string output_dir = "out";

  /// Applies one `section.key = value` setting. Throws ConfigError.
  void set(const std::string& key, const std::string& value, std::size_t line = 0);

  /// Canonical `key = value` dump; loading it reproduces this config.
  std::string to_text() const;

  /// FNV-1a 64 of to_text().
  std::uint64_t hash() const;

  /// Cross-field checks (R < R_a < R sqrt 3, R_s >= R_a, dt > 0, ...).
  void validate() const;

  /// Also requires the LJ parameter bounds. `validate` alone accepts any
  /// LJ parameters so that the assumption checker can report on them.
  void validate_for_simulation() const;

  InteractionFunction interaction() const;
};

/// Parses a flat `section.key = value` file; '#' starts a comment.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

}  // namespace swarm
