#pragma once

// Reachable and indistinguishable subspaces of a linear system, with every
// rank decision taken through numerical_rank() so that all modules agree on
// what "zero" means.

#include <cstddef>

#include <Eigen/Dense>

#include "canon/linear_system.hpp"

namespace canon {

/// Singular values at or below this are zero regardless of scale.
inline constexpr double kRankFloor = 1e-12;
/// Above this condition estimate a Krylov factorization is recomputed with
/// re-orthogonalization and its rank flagged unreliable. The estimate is
/// sigma_max over the smallest singular value above the roundoff level
/// N * eps * sigma_max, so exact rank drops do not count but a gradual decay
/// through the rank threshold does.
inline constexpr double kKrylovConditionLimit = 1e8;

/// Orthonormal basis of a subspace of R^N.
struct Subspace {
  Eigen::MatrixXd basis;  // N x k, orthonormal columns
  double tol = kDefaultTol;
  bool unreliable_rank = false;

  Eigen::Index ambient_dim() const { return basis.rows(); }
  Eigen::Index dim() const { return basis.cols(); }

  static Subspace zero(Eigen::Index ambient, double tol = kDefaultTol);
  static Subspace full(Eigen::Index ambient, double tol = kDefaultTol);
};

/// Number of singular values above max(tol * sigma_max, kRankFloor).
/// `singular_values` must be sorted in decreasing order.
Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values, double tol);

/// (C | AC | ... | A^{N-1} C).
Eigen::MatrixXd controllability_matrix(const LinearSystem& sys);

/// Rows W, WA, ..., W A^{N-1}.
Eigen::MatrixXd observability_matrix(const LinearSystem& sys);

/// Column space of the controllability matrix.
Subspace reachable_subspace(const LinearSystem& sys, double tol = kDefaultTol);

/// Intersection of ker(W A^i) for i < N, i.e. the kernel of the
/// observability matrix.
Subspace observability_kernel(const LinearSystem& sys,
                              double tol = kDefaultTol);

/// Intersection by the stacked-kernel method: x = B1 a lies in span(B2) iff
/// (I - B2 B2^T) B1 a = 0. Since B1 is orthonormal the singular values of
/// that product are the sines of the principal angles, so they are compared
/// against max(tol1, tol2) directly. Throws std::invalid_argument on
/// mismatched ambient dimensions.
Subspace intersect(const Subspace& s1, const Subspace& s2);

/// Sine of the largest principal angle; 1 if dimensions differ.
double subspace_distance(const Subspace& s1, const Subspace& s2);

/// Deterministic sign: the first coordinate that is not negligible is made
/// positive, column by column.
void normalize_signs(Eigen::MatrixXd& basis);

struct CanonicalityReport {
  bool canonical;
  Eigen::Index reachable_dim;
  Eigen::Index kernel_dim;
  bool unreliable_rank;
};

/// Strongly reachable (reachable subspace is R^N) and observable (trivial
/// kernel). Throws EspViolation if the echo state property does not hold.
CanonicalityReport is_canonical(const LinearSystem& sys,
                                double tol = kDefaultTol,
                                double margin = kDefaultMargin);

}  // namespace canon
