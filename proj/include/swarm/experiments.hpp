#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "swarm/dynamics.hpp"
#include "swarm/interaction.hpp"
#include "swarm/lattice.hpp"

namespace swarm {

// Terminal e at or below this, together with terminal rigidity, counts as
// converged to a triangular configuration.
inline constexpr double kConvergenceTol = 1e-3;

struct TrialSeeds {
  std::uint64_t lattice = 0;
  std::uint64_t perturb = 0;
};

/// Seeds of trial (delta_index, trial_index) derived from the two bases.
TrialSeeds trial_seeds(std::uint64_t lattice_base, std::uint64_t perturb_base,
                       std::size_t delta_index, std::size_t trial_index);

struct TrialOptions {
  GrowthPolicy growth = GrowthPolicy::bond_weighted;
  double convergence_tol = kConvergenceTol;
  double rank_tol = kDefaultRankTol;
  // Check rigidity at every recorded step (stride sim.record_every).
  bool track_rigidity = false;
  // Record e at every recorded step.
  bool track_error = false;
};

struct TrialRecord {
  std::size_t delta_index = 0;
  std::size_t trial_index = 0;
  double delta = 0.0;
  TrialSeeds seeds;
  double e_initial = 0.0;
  double e_final = 0.0;
  bool rigid = false;      // terminal infinitesimal rigidity
  bool converged = false;  // rigid and e_final <= convergence_tol
  bool diverged = false;
  bool rigid_throughout = true;  // only meaningful with track_rigidity
  std::size_t coincident_pairs = 0;
  std::vector<double> times;     // with track_error
  std::vector<double> e_series;  // with track_error
};

/// Lattice -> perturbation -> simulation -> terminal metrics. A diverged run
/// is returned as non-converged with e_final = +inf.
TrialRecord run_trial(std::size_t n, double delta, const TrialSeeds& seeds,
                      const SimulationParams& sim, const InteractionFunction& fn,
                      const TrialOptions& options = {});

struct SweepSpec {
  std::vector<double> delta_values;
  std::size_t trials_per_delta = 20;
  std::size_t n = 100;
  SimulationParams sim;
  std::uint64_t lattice_seed_base = 1;
  std::uint64_t perturb_seed_base = 2;
  TrialOptions options;

  void validate() const;
};

struct DeltaSummary {
  double delta = 0.0;
  std::size_t trials = 0;
  double rho = 0.0;             // fraction terminally rigid
  double converged_fraction = 0.0;  // fraction rigid with e <= tol
  double e_mean = 0.0;
  double e_min = 0.0;
  double e_max = 0.0;
};

struct SweepResult {
  std::vector<DeltaSummary> per_delta;
  std::vector<TrialRecord> trials;  // ordered by (delta_index, trial_index)
};

/// Runs trials_per_delta independent trials per delta on `jobs` worker
/// threads (0 = hardware concurrency). Output order is independent of
/// completion order.
SweepResult delta_sweep(const SweepSpec& spec, const InteractionFunction& fn,
                        std::size_t jobs = 0);

struct ConvergenceStudy {
  double delta = 0.0;
  std::vector<double> times;
  std::vector<TrialRecord> trials;  // each carries its e series
  std::vector<double> e_mean;
  std::vector<double> e_min;
  std::vector<double> e_max;
};

ConvergenceStudy convergence_study(std::size_t n, double delta, std::size_t trials,
                                   const SimulationParams& sim, const InteractionFunction& fn,
                                   std::uint64_t lattice_seed_base,
                                   std::uint64_t perturb_seed_base,
                                   const TrialOptions& options = {}, std::size_t jobs = 0);

/// Calls body(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

// Writers for the sweep and convergence artifacts.
void write_sweep_summary_csv(const SweepResult& result, const std::filesystem::path& path);
void write_trials_csv(const SweepResult& result, const std::filesystem::path& path);
void write_convergence_csv(const ConvergenceStudy& study, const std::filesystem::path& dir);

}  // namespace swarm
