#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace swarm {

// Precondition violated by the caller (bad index, size mismatch, NaN input).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar function evaluated outside its domain (e.g. f(z) with z <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Configuration with no links where a link-based quantity was requested.
class DegenerateConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two agents closer than the coincidence threshold while the abort policy is on.
class CoincidentAgents : public std::runtime_error {
 public:
  CoincidentAgents(std::size_t i, std::size_t j)
      : std::runtime_error("agents " + std::to_string(i) + " and " +
                           std::to_string(j) + " coincide"),
        first(i),
        second(j) {}
  std::size_t first;
  std::size_t second;
};

// Lattice generation could not produce a verified triangular configuration.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense linear-algebra routine failed. Carries the offending matrix so the
// caller can dump it.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, Eigen::MatrixXd matrix)
      : std::runtime_error(what), offending(std::move(matrix)) {}
  Eigen::MatrixXd offending;
};

}  // namespace swarm
