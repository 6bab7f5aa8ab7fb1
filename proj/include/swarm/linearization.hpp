#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "swarm/config.hpp"
#include "swarm/interaction.hpp"

namespace swarm {

/// Jacobian of the stacked closed loop xdot = ((B H B^T) kron I2) x, split as
/// J = J1 + J2 with J2 = (B H B^T) kron I2 and H = diag(f(|r_k|) / |r_k|).
struct JacobianParts {
  Eigen::MatrixXd first;   // J1: derivative of H, contracted with the state
  Eigen::MatrixXd second;  // J2
  Eigen::MatrixXd total() const { return first + second; }
};

/// Assembles J1 column by column from the sparse structure of dH/dx (one
/// nonzero diagonal entry per link and column) and J2 from H. Pairs within
/// link_radius form the graph; pass R_a for the link graph or R_s for the
/// full interaction graph. Throws DomainError on a zero-length link.
JacobianParts jacobian(const SwarmConfig& config, const InteractionFunction& fn,
                       double link_radius);

inline constexpr double kDefaultZeroTol = 1e-8;  // relative to the spectral radius

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;  // real part descending
  double spectral_radius = 0.0;
  double zero_threshold = 0.0;  // tol_zero * spectral_radius
  std::size_t zero_count = 0;
  std::size_t negative_count = 0;
  std::size_t unclassified_count = 0;
  bool kernel_aligned = false;  // zero modes in ker(M), negative modes outside
  double max_kernel_residual = 0.0;     // over zero modes, |M w| / |w|
  double min_nonkernel_residual = 0.0;  // over negative modes
  double max_real_nonzero_eig = 0.0;    // largest real part among non-zero modes
  Eigen::MatrixXd zero_modes;           // orthonormal basis of the zero eigenspace
};

/// Dense non-symmetric eigen-decomposition of J with classification against
/// the rigidity matrix M. Throws NumericalError if the solver fails.
SpectrumReport spectral_analysis(const Eigen::MatrixXd& J, const Eigen::MatrixXd& M,
                                 double tol_zero = kDefaultZeroTol);

/// Orthonormal basis (2n x 3) of x-translation, y-translation and the
/// infinitesimal rotation about the swarm center.
Eigen::MatrixXd rigid_motion_basis(const SwarmConfig& config);

/// Principal angles (radians, ascending) between the column spans of A and
/// B. Computed from sines so small angles keep full precision.
std::vector<double> principal_angles(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace swarm
