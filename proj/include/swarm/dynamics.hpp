#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/interaction.hpp"

namespace swarm {

/// Geometry, integration and reproducibility parameters of one run.
struct SimulationParams {
  double R = 1.0;
  double R_a = 1.3660254037844386;  // (1 + sqrt 3) / 2
  double R_s = 3.0;
  double dt = 0.01;
  double horizon = 20.0;
  std::uint64_t seed = 0;
  std::size_t record_every = 1;

  // Throws InvalidInput naming the violated bound.
  void validate() const;
  std::size_t step_count() const;
};

/// What to do when two agents are closer than kCoincidenceDistance.
enum class CoincidencePolicy {
  skip_and_count,  // drop that pair's contribution and count a warning
  abort,           // throw CoincidentAgents
};

inline constexpr double kCoincidenceDistance = 1e-12;

struct ForceStats {
  std::size_t coincident_pairs = 0;
};

/// Agents j != i within distance R_s of agent i, ascending.
std::vector<std::size_t> interaction_set(std::size_t i, const SwarmConfig& config, double R_s);

/// u_i = sum over the interaction set of f(|r_ij|) (x_i - x_j) / |r_ij|,
/// summed in ascending j.
Vec2 control_input(std::size_t i, const SwarmConfig& config, const InteractionFunction& fn,
                   double R_s, CoincidencePolicy policy = CoincidencePolicy::skip_and_count,
                   ForceStats* stats = nullptr);

/// Control inputs of every agent. Bit-identical to calling control_input for
/// each i; pairs are visited once and applied with opposite signs.
std::vector<Vec2> control_inputs(const SwarmConfig& config, const InteractionFunction& fn,
                                 double R_s,
                                 CoincidencePolicy policy = CoincidencePolicy::skip_and_count,
                                 ForceStats* stats = nullptr);

class IntegrationDiverged : public std::runtime_error {
 public:
  IntegrationDiverged(std::size_t step, SwarmConfig last_finite)
      : std::runtime_error("integration diverged at step " + std::to_string(step)),
        step(step),
        snapshot(std::move(last_finite)) {}
  std::size_t step;
  SwarmConfig snapshot;  // last configuration with finite coordinates
};

/// One synchronous forward-Euler step: x_i += dt * u_i(x), all u from the
/// pre-step configuration.
SwarmConfig step_euler(const SwarmConfig& config, const InteractionFunction& fn,
                       const SimulationParams& params,
                       CoincidencePolicy policy = CoincidencePolicy::skip_and_count,
                       ForceStats* stats = nullptr);

struct Trajectory {
  std::vector<double> times;
  std::vector<SwarmConfig> states;
  SimulationParams params;

  // State after the last integration step, recorded or not.
  SwarmConfig terminal;
  double terminal_time = 0.0;
  std::size_t coincident_pairs = 0;
};

struct StepView {
  std::size_t step;
  double time;
  const SwarmConfig& state;
};

using Observer = std::function<void(const StepView&)>;

struct SimulateOptions {
  CoincidencePolicy policy = CoincidencePolicy::skip_and_count;
  bool keep_states = true;  // false records times only (observers still run)
};

/// Integrates horizon / dt steps. Records (and notifies observers) at step 0
/// and every record_every steps. Deterministic in (initial, fn, params).
Trajectory simulate(const SwarmConfig& initial, const InteractionFunction& fn,
                    const SimulationParams& params, const std::vector<Observer>& observers = {},
                    const SimulateOptions& options = {});

/// max_t |x_c(t) - x_c(0)| over the recorded states.
double center_drift(const Trajectory& trajectory);

}  // namespace swarm
