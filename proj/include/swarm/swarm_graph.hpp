#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "swarm/config.hpp"

namespace swarm {

/// Default relative threshold for numerical rank: singular values at or below
/// tol * sigma_max count as zero.
inline constexpr double kDefaultRankTol = 1e-8;

struct Link {
  std::size_t i;  // start vertex (lower index)
  std::size_t j;  // end vertex
  double length;
};

/// Undirected links of a configuration, each stored once as (i, j) with i < j
/// in lexicographic order. A stored pair stands for both directed links.
class LinkSet {
 public:
  LinkSet() = default;
  explicit LinkSet(std::vector<Link> links) : links_(std::move(links)) {}

  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }
  const Link& operator[](std::size_t k) const { return links_[k]; }
  auto begin() const { return links_.begin(); }
  auto end() const { return links_.end(); }

  // True when both sets contain the same index pairs (lengths ignored).
  bool same_pairs(const LinkSet& other) const;

 private:
  std::vector<Link> links_;
};

/// All pairs with distance <= max_link_length (boundary inclusive).
LinkSet compute_links(const SwarmConfig& config, double max_link_length);

/// n x m signed incidence matrix: column k has +1 at the link's start vertex
/// and -1 at its end vertex.
Eigen::MatrixXd incidence_matrix(const LinkSet& links, std::size_t n);

/// m x 2n rigidity matrix. Row k for link (i, j) holds x_i - x_j in the
/// columns of agent i and x_j - x_i in the columns of agent j.
Eigen::MatrixXd rigidity_matrix(const SwarmConfig& config, const LinkSet& links);

/// Number of singular values strictly above tol * sigma_max.
std::size_t numerical_rank(const Eigen::MatrixXd& matrix, double tol = kDefaultRankTol);

struct RigidityReport {
  std::size_t rank = 0;
  std::size_t expected_rank = 0;  // 2n - 3
  std::size_t link_count = 0;
  bool rigid = false;
};

RigidityReport rigidity_report(const SwarmConfig& config, const LinkSet& links,
                               double tol = kDefaultRankTol);

/// Planar infinitesimal rigidity via rank(M) == 2n - 3.
bool is_infinitesimally_rigid(const SwarmConfig& config, const LinkSet& links,
                              double tol = kDefaultRankTol);

/// True when every pairwise distance agrees within tol.
bool are_congruent(const SwarmConfig& a, const SwarmConfig& b, double tol);

}  // namespace swarm
