#pragma once

#include <cstddef>
#include <vector>

#include "swarm/config.hpp"
#include "swarm/dynamics.hpp"
#include "swarm/interaction.hpp"

namespace swarm {

/// V = |x_c* - x_c|^2 + sum over current links of P(|r_k|).
double lyapunov_V(const SwarmConfig& config, const Vec2& reference_center,
                  const InteractionFunction& fn, double R_a);

/// -sum_i |u_i|^2 with u from the control law.
double vdot_analytic(const SwarmConfig& config, const InteractionFunction& fn, double R_s);

struct LyapunovSample {
  double t = 0.0;
  double V = 0.0;
  double Vdot_analytic = 0.0;
  double Vdot_numeric = 0.0;  // (V(t+dt) - V(t)) / dt; NaN on the last sample
  std::size_t link_count = 0;
  bool links_changed = false;  // link set differs at t + dt
  bool disagrees = false;      // unflagged step outside tolerance
  bool increased = false;      // unflagged step with V(t+dt) > V(t)
};

inline constexpr double kDefaultDissipationTol = 1e-3;

struct DissipationReport {
  std::vector<LyapunovSample> samples;
  double tol_v = kDefaultDissipationTol;
  std::size_t checked_steps = 0;  // steps with a constant link set
  std::size_t agreeing_steps = 0;
  std::size_t link_change_steps = 0;
  std::size_t increasing_steps = 0;
  double worst_relative_gap = 0.0;  // max |dV/dt - Vdot| / (1 + |Vdot|)

  double agreement_fraction() const {
    return checked_steps == 0 ? 1.0
                              : static_cast<double>(agreeing_steps) / checked_steps;
  }
};

/// Compares the finite-difference dV/dt with -sum |u|^2 at every recorded
/// step. The trajectory must be recorded with stride 1 (throws InvalidInput
/// otherwise). Steps across which the link set changes are flagged and kept
/// out of the statistics.
DissipationReport dissipation_check(const Trajectory& trajectory, const InteractionFunction& fn,
                                    const SimulationParams& params,
                                    double tol_v = kDefaultDissipationTol);

}  // namespace swarm
