#include "swarm/lattice.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "swarm/errors.hpp"
#include "swarm/rng.hpp"

namespace swarm {
namespace {

using Site = std::pair<long, long>;  // axial (q, r)

// Directions k and k + 3 are antipodal.
constexpr std::array<Site, 6> kDirections = {
    Site{1, 0}, Site{0, 1}, Site{-1, 1}, Site{-1, 0}, Site{0, -1}, Site{1, -1}};

Site neighbour(const Site& s, std::size_t k) {
  return {s.first + kDirections[k].first, s.second + kDirections[k].second};
}

Vec2 to_plane(const Site& s, double R) {
  const double q = static_cast<double>(s.first);
  const double r = static_cast<double>(s.second);
  return {R * (q + 0.5 * r), R * (r * (std::numbers::sqrt3 / 2.0))};
}

struct Candidate {
  Site site;
  std::uint64_t weight;
};

// Unoccupied neighbours of the occupied set in a deterministic order, with
// their occupied-neighbour counts. With `rigid_only`, keeps the sites whose
// occupied neighbours include a non-antipodal pair.
std::vector<Candidate> frontier(const std::set<Site>& occupied, bool rigid_only) {
  std::map<Site, unsigned> mask;
  for (const Site& s : occupied) {
    for (std::size_t k = 0; k < 6; ++k) {
      const Site t = neighbour(s, k);
      if (occupied.count(t) != 0) continue;
      // s sits in direction k + 3 as seen from t.
      mask[t] |= 1u << ((k + 3) % 6);
    }
  }
  std::vector<Candidate> out;
  for (const auto& [site, bits] : mask) {
    const auto count = static_cast<std::uint64_t>(std::popcount(bits));
    if (rigid_only) {
      const bool antipodal_pair =
          count == 2 && (bits == 0b001001u || bits == 0b010010u || bits == 0b100100u);
      if (count < 2 || antipodal_pair) continue;
    }
    out.push_back({site, count});
  }
  return out;
}

std::vector<Site> grow(std::size_t n, GrowthPolicy policy, Engine& engine) {
  std::set<Site> occupied;
  std::vector<Site> order;
  auto add = [&](const Site& s) {
    occupied.insert(s);
    order.push_back(s);
  };
  add({0, 0});
  if (n >= 2) add(neighbour({0, 0}, uniform_below(engine, 6)));

  while (order.size() < n) {
    const bool rigid_only = policy != GrowthPolicy::eden;
    const std::vector<Candidate> candidates = frontier(occupied, rigid_only);
    if (candidates.empty()) throw GenerationError("lattice growth ran out of eligible sites");
    if (policy == GrowthPolicy::bond_weighted) {
      std::uint64_t total = 0;
      for (const auto& c : candidates) total += c.weight;
      std::uint64_t pick = uniform_below(engine, total);
      for (const auto& c : candidates) {
        if (pick < c.weight) {
          add(c.site);
          break;
        }
        pick -= c.weight;
      }
    } else {
      add(candidates[uniform_below(engine, candidates.size())].site);
    }
  }
  return order;
}

}  // namespace

const char* to_string(GrowthPolicy policy) {
  switch (policy) {
    case GrowthPolicy::bond_weighted:
      return "bond_weighted";
    case GrowthPolicy::uniform_rigid:
      return "uniform_rigid";
    case GrowthPolicy::eden:
      return "eden";
  }
  return "unknown";
}

GrowthPolicy growth_policy_from_string(const std::string& name) {
  for (auto policy : {GrowthPolicy::bond_weighted, GrowthPolicy::uniform_rigid, GrowthPolicy::eden}) {
    if (name == to_string(policy)) return policy;
  }
  throw InvalidInput("unknown growth policy '" + name +
                     "' (expected bond_weighted, uniform_rigid or eden)");
}

SwarmConfig generate_triangular(const LatticeSpec& spec, double R_a) {
  if (spec.n < 3) throw InvalidInput("a triangular configuration needs n >= 3");
  if (!(spec.R > 0.0)) throw InvalidInput("R must be positive");
  if (!(R_a > spec.R) || !(R_a < spec.R * std::numbers::sqrt3)) {
    throw InvalidInput("R_a must lie strictly between R and R*sqrt(3)");
  }
  if (spec.max_attempts == 0) throw InvalidInput("max_attempts must be at least 1");

  for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Engine engine(derive_seed(spec.seed, attempt, 0));
    const std::vector<Site> sites = grow(spec.n, spec.growth, engine);
    std::vector<Vec2> positions;
    positions.reserve(sites.size());
    for (const Site& s : sites) positions.push_back(to_plane(s, spec.R));
    SwarmConfig config(std::move(positions));
    if (is_triangular(config, spec.R, R_a, kDefaultLengthTol * spec.R).triangular) return config;
  }
  throw GenerationError("no triangular configuration with n = " + std::to_string(spec.n) +
                        " after " + std::to_string(spec.max_attempts) + " attempts (growth " +
                        to_string(spec.growth) + ")");
}

SwarmConfig perturb(const SwarmConfig& config, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InvalidInput("delta must be >= 0");
  Engine engine(seed);
  SwarmConfig out = config;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double u = uniform01(engine);
    const double v = uniform01(engine);
    const double radius = delta * std::sqrt(u);
    const double angle = 2.0 * std::numbers::pi * v;
    out[i] += Vec2(radius * std::cos(angle), radius * std::sin(angle));
  }
  return out;
}

TriangularReport is_triangular(const SwarmConfig& config, double R, double R_a, double tol_len,
                               double tol_rank) {
  TriangularReport report;
  if (config.size() < 2) return report;
  const LinkSet links = compute_links(config, R_a);
  const RigidityReport rigidity = rigidity_report(config, links, tol_rank);
  report.rigid = rigidity.rigid;
  report.rank = rigidity.rank;
  report.expected_rank = rigidity.expected_rank;
  report.link_count = links.size();
  report.max_length_deviation = links.empty() ? 0.0 : link_error(links, R);
  report.triangular = report.rigid && !links.empty() && report.max_length_deviation <= tol_len;
  return report;
}

double link_error(const SwarmConfig& config, double R, double R_a) {
  return link_error(compute_links(config, R_a), R);
}

double link_error(const LinkSet& links, double R) {
  if (links.empty()) throw DegenerateConfiguration("link error is undefined without links");
  double e = 0.0;
  for (const Link& link : links) e = std::max(e, std::abs(link.length - R));
  return e;
}

}  // namespace swarm
