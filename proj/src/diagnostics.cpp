#include "swarm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "swarm/errors.hpp"
#include "swarm/swarm_graph.hpp"

namespace swarm {

namespace {

double link_potential_sum(const LinkSet& links, const InteractionFunction& fn) {
  double sum = 0.0;
  for (const Link& link : links) sum += fn.potential(link.length);
  return sum;
}

}  // namespace

double lyapunov_V(const SwarmConfig& config, const Vec2& reference_center,
                  const InteractionFunction& fn, double R_a) {
  const LinkSet links = compute_links(config, R_a);
  return (reference_center - swarm_center(config)).squaredNorm() + link_potential_sum(links, fn);
}

double vdot_analytic(const SwarmConfig& config, const InteractionFunction& fn, double R_s) {
  double sum = 0.0;
  for (const Vec2& u : control_inputs(config, fn, R_s)) sum += u.squaredNorm();
  return -sum;
}

DissipationReport dissipation_check(const Trajectory& trajectory, const InteractionFunction& fn,
                                    const SimulationParams& params, double tol_v) {
  if (trajectory.params.record_every != 1) {
    throw InvalidInput("dissipation_check needs a trajectory recorded at every step");
  }
  if (trajectory.states.size() < 2) throw InvalidInput("dissipation_check needs two states");
  if (!(tol_v > 0.0)) throw InvalidInput("tol_v must be positive");

  DissipationReport report;
  report.tol_v = tol_v;
  const Vec2 reference = swarm_center(trajectory.states.front());
  const std::size_t count = trajectory.states.size();

  std::vector<LinkSet> links(count);
  std::vector<double> V(count);
  for (std::size_t k = 0; k < count; ++k) {
    const SwarmConfig& state = trajectory.states[k];
    links[k] = compute_links(state, params.R_a);
    V[k] = (reference - swarm_center(state)).squaredNorm() + link_potential_sum(links[k], fn);
  }

  report.samples.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    LyapunovSample s;
    s.t = trajectory.times[k];
    s.V = V[k];
    s.Vdot_analytic = vdot_analytic(trajectory.states[k], fn, params.R_s);
    s.link_count = links[k].size();
    s.Vdot_numeric = std::numeric_limits<double>::quiet_NaN();
    if (k + 1 < count) {
      s.Vdot_numeric = (V[k + 1] - V[k]) / params.dt;
      s.links_changed = !links[k].same_pairs(links[k + 1]);
      if (s.links_changed) {
        ++report.link_change_steps;
      } else {
        ++report.checked_steps;
        const double gap = std::abs(s.Vdot_numeric - s.Vdot_analytic) /
                           (1.0 + std::abs(s.Vdot_analytic));
        report.worst_relative_gap = std::max(report.worst_relative_gap, gap);
        s.disagrees = gap > tol_v;
        if (!s.disagrees) ++report.agreeing_steps;
        s.increased = V[k + 1] > V[k];
        if (s.increased) ++report.increasing_steps;
      }
    }
    report.samples.push_back(s);
  }
  return report;
}

}  // namespace swarm
