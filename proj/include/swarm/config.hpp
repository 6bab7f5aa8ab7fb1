#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace swarm {

using Vec2 = Eigen::Vector2d;

/// Positions of n planar agents. Agent i occupies entries (2i, 2i+1) of the
/// stacked state vector.
class SwarmConfig {
 public:
  SwarmConfig() = default;
  explicit SwarmConfig(std::vector<Vec2> positions);
  SwarmConfig(std::initializer_list<Vec2> positions);

  static SwarmConfig from_stacked(const Eigen::VectorXd& stacked);

  std::size_t size() const { return positions_.size(); }
  bool empty() const { return positions_.empty(); }

  const Vec2& operator[](std::size_t i) const { return positions_[i]; }
  Vec2& operator[](std::size_t i) { return positions_[i]; }

  std::span<const Vec2> positions() const { return positions_; }
  std::vector<Vec2>& mutable_positions() { return positions_; }

  Eigen::VectorXd stacked() const;

  bool all_finite() const;
  // Throws InvalidInput when a coordinate is NaN or infinite.
  void require_finite() const;

  bool operator==(const SwarmConfig& other) const { return positions_ == other.positions_; }

 private:
  std::vector<Vec2> positions_;
};

/// Arithmetic mean of the agent positions.
Vec2 swarm_center(const SwarmConfig& config);

}  // namespace swarm
