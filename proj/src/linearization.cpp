#include "swarm/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "swarm/errors.hpp"
#include "swarm/swarm_graph.hpp"

namespace swarm {

JacobianParts jacobian(const SwarmConfig& config, const InteractionFunction& fn,
                       double link_radius) {
  config.require_finite();
  const std::size_t n = config.size();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  const LinkSet links = compute_links(config, link_radius);
  const Eigen::MatrixXd M = rigidity_matrix(config, links);

  JacobianParts parts;
  parts.first = Eigen::MatrixXd::Zero(dim, dim);
  parts.second = Eigen::MatrixXd::Zero(dim, dim);

  for (std::size_t k = 0; k < links.size(); ++k) {
    const Link& link = links[k];
    const auto a = static_cast<Eigen::Index>(2 * link.i);
    const auto b = static_cast<Eigen::Index>(2 * link.j);
    const Vec2 r = config[link.i] - config[link.j];
    const double z = r.norm();
    if (!(z > 0.0)) {
      throw DomainError("zero-length link between agents " + std::to_string(link.i) + " and " +
                        std::to_string(link.j));
    }
    const double f = fn.force(z);
    const double h = f / z;
    const double g = (fn.derivative(z) * z - f) / (z * z * z);

    // J2: H_kk on the Laplacian pattern of link k.
    parts.second.block<2, 2>(a, a).diagonal().array() += h;
    parts.second.block<2, 2>(b, b).diagonal().array() += h;
    parts.second.block<2, 2>(a, b).diagonal().array() -= h;
    parts.second.block<2, 2>(b, a).diagonal().array() -= h;

    // J1: slice col of dH/dx has the single entry g M(k, col) at (k, k),
    // and B e_k e_k^T B^T x picks out r in block a and -r in block b.
    for (const Eigen::Index col : {a, a + 1, b, b + 1}) {
      const double coeff = g * M(static_cast<Eigen::Index>(k), col);
      parts.first.block<2, 1>(a, col) += coeff * r;
      parts.first.block<2, 1>(b, col) -= coeff * r;
    }
  }
  return parts;
}

namespace {

// Orthonormal basis of the column span, rank decided relative to the largest
// singular value.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& A) {
  if (A.cols() == 0) return Eigen::MatrixXd(A.rows(), 0);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  const auto rank = static_cast<Eigen::Index>(numerical_rank(A, 1e-12));
  return svd.matrixU().leftCols(rank);
}

double residual(const Eigen::MatrixXd& M, const Eigen::VectorXcd& w) {
  const double norm = w.norm();
  if (M.rows() == 0 || norm == 0.0) return 0.0;
  return (M.cast<std::complex<double>>() * w).norm() / norm;
}

}  // namespace

SpectrumReport spectral_analysis(const Eigen::MatrixXd& J, const Eigen::MatrixXd& M,
                                 double tol_zero) {
  if (J.rows() != J.cols()) throw InvalidInput("Jacobian must be square");
  if (M.rows() > 0 && M.cols() != J.cols()) {
    throw InvalidInput("rigidity matrix and Jacobian dimensions differ");
  }
  if (!(tol_zero > 0.0)) throw InvalidInput("tol_zero must be positive");
  if (!J.allFinite()) throw NumericalError("Jacobian has non-finite entries", J);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(J, true);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-decomposition failed", J);

  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  const auto dim = values.size();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dim));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (values[x].real() != values[y].real()) return values[x].real() > values[y].real();
    return values[x].imag() > values[y].imag();
  });

  SpectrumReport report;
  for (const Eigen::Index idx : order) report.eigenvalues.push_back(values[idx]);
  for (const auto& lambda : report.eigenvalues) {
    report.spectral_radius = std::max(report.spectral_radius, std::abs(lambda));
  }
  report.zero_threshold = tol_zero * report.spectral_radius;
  report.max_real_nonzero_eig = -std::numeric_limits<double>::infinity();
  report.min_nonkernel_residual = std::numeric_limits<double>::infinity();

  bool zero_in_kernel = true;
  bool negative_outside = true;
  std::vector<Eigen::VectorXcd> zero_vectors;
  for (const Eigen::Index idx : order) {
    const std::complex<double> lambda = values[idx];
    if (std::abs(lambda) <= report.zero_threshold) {
      ++report.zero_count;
      const double res = residual(M, vectors.col(idx));
      report.max_kernel_residual = std::max(report.max_kernel_residual, res);
      zero_in_kernel = zero_in_kernel && res <= tol_zero;
      zero_vectors.push_back(vectors.col(idx));
      continue;
    }
    report.max_real_nonzero_eig = std::max(report.max_real_nonzero_eig, lambda.real());
    if (lambda.real() < -report.zero_threshold) {
      ++report.negative_count;
      const double res = residual(M, vectors.col(idx));
      report.min_nonkernel_residual = std::min(report.min_nonkernel_residual, res);
      negative_outside = negative_outside && res > tol_zero;
    } else {
      ++report.unclassified_count;
    }
  }
  report.kernel_aligned = zero_in_kernel && negative_outside;

  // Real and imaginary parts of the zero modes span the same real subspace.
  Eigen::MatrixXd stacked(dim, static_cast<Eigen::Index>(2 * zero_vectors.size()));
  for (std::size_t k = 0; k < zero_vectors.size(); ++k) {
    stacked.col(static_cast<Eigen::Index>(2 * k)) = zero_vectors[k].real();
    stacked.col(static_cast<Eigen::Index>(2 * k + 1)) = zero_vectors[k].imag();
  }
  report.zero_modes = orthonormal_basis(stacked);
  return report;
}

Eigen::MatrixXd rigid_motion_basis(const SwarmConfig& config) {
  const std::size_t n = config.size();
  if (n < 2) throw InvalidInput("rigid motions need at least two agents");
  const auto dim = static_cast<Eigen::Index>(2 * n);
  const Vec2 center = swarm_center(config);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dim, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(2 * i);
    const Vec2 offset = config[i] - center;
    basis(row, 0) = 1.0;
    basis(row + 1, 1) = 1.0;
    basis(row, 2) = -offset.y();
    basis(row + 1, 2) = offset.x();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, 3);
}

std::vector<double> principal_angles(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.rows() != B.rows()) throw InvalidInput("subspaces live in different dimensions");
  Eigen::MatrixXd Q1 = orthonormal_basis(A);
  Eigen::MatrixXd Q2 = orthonormal_basis(B);
  if (Q2.cols() > Q1.cols()) std::swap(Q1, Q2);
  if (Q2.cols() == 0) return {};

  // Singular values of the part of span(Q2) outside span(Q1) are the sines.
  const Eigen::MatrixXd outside = Q2 - Q1 * (Q1.transpose() * Q2);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(outside);
  std::vector<double> angles;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    angles.push_back(std::asin(std::min(1.0, svd.singularValues()[k])));
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace swarm
