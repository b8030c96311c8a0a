#pragma once

// Morphisms between linear state-space systems. A linear map f from the
// state space of sys1 to that of sys2 is a system morphism when
//
//   f A1 = A2 f,   f C1 = C2   (equivariance of the state maps)
//   W1 = W2 f                  (invariance of the readouts)
//
// Invertible morphisms relate all canonical realizations of a filter through
// the action B . (A, C, W) = (B A B^{-1}, B C, W B^{-1}).

#include <Eigen/Dense>

#include "canon/linear_system.hpp"

namespace canon {

/// Maps the state space of one system into another (n2 x n1).
struct LinearMap {
  Eigen::MatrixXd matrix;
};

/// Past this, residual tolerances stop meaning much in double precision.
inline constexpr double kConditionWarning = 1e12;

/// 2-norm condition number; infinity for singular or non-square maps.
double condition_number(const LinearMap& B);

/// (B A B^{-1}, B C, W B^{-1}). Throws std::invalid_argument if B is not
/// square of size N or is singular.
LinearSystem gl_action(const LinearMap& B, const LinearSystem& sys);

/// Transports sys1 along the bijection f; same formula as gl_action.
LinearSystem conjugate_system(const LinearMap& f, const LinearSystem& sys1);

struct MorphismReport {
  double state_residual;    // ||f A1 - A2 f||
  double input_residual;    // ||f C1 - C2||
  double readout_residual;  // ||W1 - W2 f||
  bool passes;
};

/// Throws std::invalid_argument on inconsistent dimensions.
MorphismReport check_morphism(const LinearMap& f, const LinearSystem& sys1,
                              const LinearSystem& sys2, double tol);

/// The unique isomorphism between two canonical realizations of the same
/// filter. Solves the intertwining equations B A1 = A2 B, B C1 = C2,
/// W2 B = W1 jointly in the least-squares sense.
///
/// Throws NotCanonical if either system is not canonical at tol and
/// NoIsomorphism if the dimensions differ, the impulse responses differ by
/// more than tol within horizon 2N, or the solution fails check_morphism at
/// 10 * tol.
LinearMap find_isomorphism(const LinearSystem& sys1, const LinearSystem& sys2,
                           double tol = kDefaultTol);

}  // namespace canon
