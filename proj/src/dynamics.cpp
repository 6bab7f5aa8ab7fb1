#include "swarm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarm/errors.hpp"

namespace swarm {

void SimulationParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(R) || !finite(R_a) || !finite(R_s) || !finite(dt) || !finite(horizon)) {
    throw InvalidInput("simulation parameters must be finite");
  }
  if (!(R > 0.0)) throw InvalidInput("R must be positive");
  if (!(R_a > R) || !(R_a < R * std::sqrt(3.0))) {
    throw InvalidInput("R_a must lie strictly between R and R*sqrt(3) (R = " + std::to_string(R) +
                       ", R_a = " + std::to_string(R_a) + ")");
  }
  if (!(R_s >= R_a)) throw InvalidInput("R_s must be at least R_a");
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  if (!(horizon >= dt)) throw InvalidInput("horizon must be at least dt");
  if (record_every == 0) throw InvalidInput("record_every must be at least 1");
}

std::size_t SimulationParams::step_count() const {
  return static_cast<std::size_t>(std::llround(horizon / dt));
}

std::vector<std::size_t> interaction_set(std::size_t i, const SwarmConfig& config, double R_s) {
  if (i >= config.size()) throw InvalidInput("agent index out of range");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (j != i && (config[i] - config[j]).norm() <= R_s) out.push_back(j);
  }
  return out;
}

namespace {

// Contribution of agent j to u_i given diff = x_i - x_j. Shared by both
// entry points so that they agree bit for bit.
inline Vec2 pair_term(const Vec2& diff, double d, const InteractionFunction& fn) {
  return diff * (fn.force_unchecked(d) / d);
}

inline bool coincident(double d, std::size_t i, std::size_t j, CoincidencePolicy policy,
                       ForceStats* stats) {
  if (d >= kCoincidenceDistance) return false;
  if (policy == CoincidencePolicy::abort) throw CoincidentAgents(i, j);
  if (stats != nullptr) ++stats->coincident_pairs;
  return true;
}

}  // namespace

Vec2 control_input(std::size_t i, const SwarmConfig& config, const InteractionFunction& fn,
                   double R_s, CoincidencePolicy policy, ForceStats* stats) {
  if (i >= config.size()) throw InvalidInput("agent index out of range");
  Vec2 u = Vec2::Zero();
  const Vec2 xi = config[i];
  for (std::size_t j = 0; j < config.size(); ++j) {
    if (j == i) continue;
    const Vec2 diff = xi - config[j];
    const double d = diff.norm();
    if (d > R_s) continue;
    if (coincident(d, std::min(i, j), std::max(i, j), policy, stats)) continue;
    u += pair_term(diff, d, fn);
  }
  return u;
}

std::vector<Vec2> control_inputs(const SwarmConfig& config, const InteractionFunction& fn,
                                 double R_s, CoincidencePolicy policy, ForceStats* stats) {
  const std::size_t n = config.size();
  std::vector<Vec2> u(n, Vec2::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 xi = config[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 diff = xi - config[j];
      const double d = diff.norm();
      if (d > R_s) continue;
      if (coincident(d, i, j, policy, stats)) continue;
      const Vec2 term = pair_term(diff, d, fn);
      u[i] += term;
      u[j] -= term;
    }
  }
  return u;
}

SwarmConfig step_euler(const SwarmConfig& config, const InteractionFunction& fn,
                       const SimulationParams& params, CoincidencePolicy policy,
                       ForceStats* stats) {
  const std::vector<Vec2> u = control_inputs(config, fn, params.R_s, policy, stats);
  SwarmConfig next = config;
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += params.dt * u[i];
  if (!next.all_finite()) throw IntegrationDiverged(0, config);
  return next;
}

Trajectory simulate(const SwarmConfig& initial, const InteractionFunction& fn,
                    const SimulationParams& params, const std::vector<Observer>& observers,
                    const SimulateOptions& options) {
  params.validate();
  initial.require_finite();

  Trajectory traj;
  traj.params = params;
  const std::size_t steps = params.step_count();

  auto record = [&](std::size_t step, const SwarmConfig& state) {
    const double t = static_cast<double>(step) * params.dt;
    traj.times.push_back(t);
    if (options.keep_states) traj.states.push_back(state);
    const StepView view{step, t, state};
    for (const auto& observer : observers) observer(view);
  };

  ForceStats stats;
  SwarmConfig state = initial;
  record(0, state);
  for (std::size_t step = 1; step <= steps; ++step) {
    try {
      state = step_euler(state, fn, params, options.policy, &stats);
    } catch (const IntegrationDiverged& e) {
      throw IntegrationDiverged(step, e.snapshot);
    }
    if (step % params.record_every == 0) record(step, state);
  }
  traj.terminal = std::move(state);
  traj.terminal_time = static_cast<double>(steps) * params.dt;
  traj.coincident_pairs = stats.coincident_pairs;
  return traj;
}

double center_drift(const Trajectory& trajectory) {
  if (trajectory.states.empty()) throw InvalidInput("trajectory has no recorded states");
  const Vec2 c0 = swarm_center(trajectory.states.front());
  double drift = 0.0;
  for (const auto& state : trajectory.states) {
    drift = std::max(drift, (swarm_center(state) - c0).norm());
  }
  return drift;
}

}  // namespace swarm
