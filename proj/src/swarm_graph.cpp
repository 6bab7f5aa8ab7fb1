#include "swarm/swarm_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarm/errors.hpp"

namespace swarm {

SwarmConfig::SwarmConfig(std::vector<Vec2> positions) : positions_(std::move(positions)) {}

SwarmConfig::SwarmConfig(std::initializer_list<Vec2> positions) : positions_(positions) {}

SwarmConfig SwarmConfig::from_stacked(const Eigen::VectorXd& stacked) {
  if (stacked.size() % 2 != 0) throw InvalidInput("stacked state must have even length");
  std::vector<Vec2> positions(static_cast<std::size_t>(stacked.size() / 2));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    positions[i] = stacked.segment<2>(2 * static_cast<Eigen::Index>(i));
  }
  return SwarmConfig(std::move(positions));
}

Eigen::VectorXd SwarmConfig::stacked() const {
  Eigen::VectorXd out(2 * static_cast<Eigen::Index>(positions_.size()));
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    out.segment<2>(2 * static_cast<Eigen::Index>(i)) = positions_[i];
  }
  return out;
}

bool SwarmConfig::all_finite() const {
  return std::all_of(positions_.begin(), positions_.end(),
                     [](const Vec2& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); });
}

void SwarmConfig::require_finite() const {
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!std::isfinite(positions_[i].x()) || !std::isfinite(positions_[i].y())) {
      throw InvalidInput("agent " + std::to_string(i) + " has a non-finite coordinate");
    }
  }
}

Vec2 swarm_center(const SwarmConfig& config) {
  if (config.empty()) throw InvalidInput("swarm_center needs at least one agent");
  Vec2 sum = Vec2::Zero();
  for (const Vec2& p : config.positions()) sum += p;
  return sum / static_cast<double>(config.size());
}

bool LinkSet::same_pairs(const LinkSet& other) const {
  if (links_.size() != other.links_.size()) return false;
  for (std::size_t k = 0; k < links_.size(); ++k) {
    if (links_[k].i != other.links_[k].i || links_[k].j != other.links_[k].j) return false;
  }
  return true;
}

LinkSet compute_links(const SwarmConfig& config, double max_link_length) {
  if (!(max_link_length > 0.0)) throw InvalidInput("maximum link length must be positive");
  const auto pos = config.positions();
  const double limit_sq = max_link_length * max_link_length;
  std::vector<Link> links;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = i + 1; j < pos.size(); ++j) {
      const Vec2 r = pos[i] - pos[j];
      const double sq = r.squaredNorm();
      // Cheap reject, then the exact inclusive test on the length itself.
      if (sq > limit_sq * (1.0 + 1e-12)) continue;
      const double length = std::sqrt(sq);
      if (length <= max_link_length) links.push_back({i, j, length});
    }
  }
  return LinkSet(std::move(links));
}

Eigen::MatrixXd incidence_matrix(const LinkSet& links, std::size_t n) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(links.size()));
  for (std::size_t k = 0; k < links.size(); ++k) {
    const Link& l = links[k];
    if (l.i >= n || l.j >= n) {
      throw InvalidInput("link (" + std::to_string(l.i) + ", " + std::to_string(l.j) +
                         ") out of range for n = " + std::to_string(n));
    }
    B(static_cast<Eigen::Index>(l.i), static_cast<Eigen::Index>(k)) = 1.0;
    B(static_cast<Eigen::Index>(l.j), static_cast<Eigen::Index>(k)) = -1.0;
  }
  return B;
}

Eigen::MatrixXd rigidity_matrix(const SwarmConfig& config, const LinkSet& links) {
  const std::size_t n = config.size();
  if (n < 2) throw InvalidInput("rigidity matrix needs n >= 2");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(links.size()),
                                            2 * static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < links.size(); ++k) {
    const Link& l = links[k];
    if (l.i >= n || l.j >= n) throw InvalidInput("link index out of range");
    const Vec2 r = config[l.i] - config[l.j];
    const auto row = static_cast<Eigen::Index>(k);
    M.block<1, 2>(row, 2 * static_cast<Eigen::Index>(l.i)) = r.transpose();
    M.block<1, 2>(row, 2 * static_cast<Eigen::Index>(l.j)) = -r.transpose();
  }
  return M;
}

std::size_t numerical_rank(const Eigen::MatrixXd& matrix, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("rank tolerance must be positive");
  if (!matrix.allFinite()) throw InvalidInput("matrix has non-finite entries");
  if (matrix.size() == 0) return 0;
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(matrix);
  const Eigen::VectorXd& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double threshold = tol * sigma(0);
  return static_cast<std::size_t>((sigma.array() > threshold).count());
}

RigidityReport rigidity_report(const SwarmConfig& config, const LinkSet& links, double tol) {
  const std::size_t n = config.size();
  if (n < 2) throw InvalidInput("rigidity needs n >= 2");
  RigidityReport report;
  report.expected_rank = 2 * n - 3;
  report.link_count = links.size();
  report.rank = links.empty() ? 0 : numerical_rank(rigidity_matrix(config, links), tol);
  report.rigid = report.rank == report.expected_rank;
  return report;
}

bool is_infinitesimally_rigid(const SwarmConfig& config, const LinkSet& links, double tol) {
  return rigidity_report(config, links, tol).rigid;
}

bool are_congruent(const SwarmConfig& a, const SwarmConfig& b, double tol) {
  if (a.size() != b.size()) {
    throw InvalidInput("congruence needs equal agent counts (" + std::to_string(a.size()) +
                       " vs " + std::to_string(b.size()) + ")");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double da = (a[i] - a[j]).norm();
      const double db = (b[i] - b[j]).norm();
      if (!(std::abs(da - db) <= tol)) return false;
    }
  }
  return true;
}

}  // namespace swarm
