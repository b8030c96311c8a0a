#pragma once

// Realizing convolution kernels as linear state-space systems: the shift
// register realization of a finite-memory filter, its reduction to a minimal
// realization, and eps-approximate realizations of l1 kernels.

#include <vector>

#include <Eigen/Dense>

#include "canon/linear_system.hpp"
#include "canon/reduction.hpp"

namespace canon {

/// U(z)_t = sum_{j=0}^{N-1} Psi_{-j} z_{t-j}. `psi` is stored past to present,
/// (Psi_{-N+1}, ..., Psi_0), which is exactly the readout row of the shift
/// realization.
struct FiniteMemoryFilter {
  std::vector<double> psi;

  std::size_t memory() const { return psi.size(); }
  /// Psi_{-j}, zero beyond the memory.
  double coefficient(std::size_t j) const;
  /// The kernel in present-to-past order with a zero tail bound.
  ImpulseResponse as_impulse_response() const;
  /// Inverse of as_impulse_response() on the stored coefficients.
  static FiniteMemoryFilter from_impulse_response(const ImpulseResponse& psi);
};

/// A = upper shift (ones on the superdiagonal), C = e_N, W = psi. The empty
/// filter maps to the zero system.
LinearSystem shift_realization(const FiniteMemoryFilter& f);

/// reduce(shift_realization(f)).
ReducedRealization minimal_realization(const FiniteMemoryFilter& f,
                                       double tol = kDefaultTol);

/// H[i][j] = Psi_{-(i+j)}, zero past the memory.
Eigen::MatrixXd hankel_matrix(const FiniteMemoryFilter& f);

/// Numerical rank of hankel_matrix(f) under numerical_rank(). Used as an
/// independent check on minimal_realization; never called by it.
Eigen::Index hankel_rank(const FiniteMemoryFilter& f, double tol = kDefaultTol);

/// Numerical rank of the N x N product O * R of the observability and
/// controllability matrices.
Eigen::Index hankel_rank(const LinearSystem& sys, double tol = kDefaultTol);

struct ApproximateRealization {
  ReducedRealization realization;
  /// l1 mass of the dropped coefficients plus the tail bound. Bounds the
  /// output error for inputs with sup norm at most one.
  double truncation_error;
  std::size_t kept;
};

/// Keeps the shortest prefix of `psi` whose dropped l1 mass (including the
/// tail bound) is at most eps and realizes it minimally. Throws Infeasible
/// when tail_bound >= eps.
ApproximateRealization approximate_realization(const ImpulseResponse& psi,
                                               double eps,
                                               double tol = kDefaultTol);

}  // namespace canon
