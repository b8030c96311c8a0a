#pragma once

// Canonicalization by reduction: a linear system with the echo state property
// drops to the quotient of its reachable subspace by the indistinguishable
// directions it contains. The quotient is represented by the orthogonal
// complement of that intersection inside the reachable subspace.

#include <Eigen/Dense>

#include "canon/linear_system.hpp"
#include "canon/subspace.hpp"

namespace canon {

struct ReducedRealization {
  LinearSystem system;          // (A_bar, C_bar, W_bar), dimension n
  Eigen::MatrixXd projection;   // n x N, pi
  Eigen::MatrixXd section;      // N x n, pi * section = I_n
  Eigen::Index original_dim = 0;
  /// Propagated from the subspace computations.
  bool unreliable_rank = false;
};

/// The reachable subspace V_R, the indistinguishable subspace I and their
/// intersection K = V_R ∩ I, all at the same tolerance.
struct KalmanSubspaces {
  Subspace reachable;
  Subspace kernel;
  Subspace intersection;
};

KalmanSubspaces kalman_subspaces(const LinearSystem& sys,
                                 double tol = kDefaultTol);

/// Throws EspViolation if the echo state property does not hold.
ReducedRealization reduce(const LinearSystem& sys, double tol = kDefaultTol,
                          double margin = kDefaultMargin);

struct ReductionReport {
  /// max_{j <= horizon} |W A^j C - W_bar A_bar^j C_bar|
  double impulse_gap = 0.0;
  CanonicalityReport reduced_canonical{};
  /// ||pi * section - I||
  double section_residual = 0.0;
  /// ||pi * B_K|| for an orthonormal basis B_K of K.
  double kernel_residual = 0.0;
  /// max(||pi A B_R - A_bar pi B_R||, ||W B_R - W_bar pi B_R||) over an
  /// orthonormal basis B_R of V_R.
  double intertwining_residual = 0.0;
  /// Backward error of spectrum containment: for each eigenvalue mu of
  /// A_bar, sigma_min(A - mu I) / max(1, ||A||), maximized over mu.
  double spectrum_residual = 0.0;
  /// Forward distance from each eigenvalue of A_bar to the spectrum of A.
  /// Informational; ill-conditioned for Jordan blocks.
  double spectrum_distance = 0.0;
  double reduced_rho = 0.0;
  bool passes = false;
};

ReductionReport verify_reduction(const LinearSystem& original,
                                 const ReducedRealization& red,
                                 std::size_t horizon, double tol = kDefaultTol);

}  // namespace canon
