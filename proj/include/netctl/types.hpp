#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

namespace netctl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatches, non-finite entries, bad parameters.
struct InvalidInputError : Error {
  using Error::Error;
};

/// Weight matrix failing its definiteness or symmetry requirement.
struct InvalidWeightError : InvalidInputError {
  using InvalidInputError::InvalidInputError;
};

/// Numerical backend failure (SVD non-convergence, singular solve).
struct NumericalError : Error {
  using Error::Error;
};

/// Requested endpoint lies outside the reachable set.
struct ReachabilityError : Error {
  ReachabilityError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual = 0.0;
};

/// The network is not target/output controllable for the given horizon.
struct ControllabilityError : Error {
  using Error::Error;
};

/// Recorded data cannot certify the requested endpoint map (rank deficiency).
struct DataRankError : Error {
  DataRankError(const std::string& what, Index rank, Index required)
      : Error(what), rank(rank), required(required) {}
  Index rank = 0;
  Index required = 0;
};

/// Iterative routine exhausted its step budget without converging.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Deterministic generator; every trial owns a stream derived from its
/// coordinates so results do not depend on scheduling order.
using Rng = std::mt19937_64;

/// Mixes a list of integers into one seed (splitmix64 chain).
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

Rng make_rng(std::initializer_list<std::uint64_t> parts);

/// Throws InvalidInputError if any entry of m is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, const char* name);

}  // namespace netctl
