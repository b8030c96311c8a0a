#include "canon/morphism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "canon/errors.hpp"
#include "canon/subspace.hpp"

namespace canon {

double condition_number(const LinearMap& B) {
  const Eigen::MatrixXd& M = B.matrix;
  if (M.rows() != M.cols()) return std::numeric_limits<double>::infinity();
  if (M.size() == 0) return 1.0;
  const Eigen::VectorXd s =
      Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
  if (s(s.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(s.size() - 1);
}

LinearSystem gl_action(const LinearMap& B, const LinearSystem& sys) {
  const Eigen::MatrixXd& M = B.matrix;
  if (M.rows() != sys.dim() || M.cols() != sys.dim()) {
    throw std::invalid_argument("gl_action: B must be N x N");
  }
  if (sys.dim() == 0) return sys;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  if (!lu.isInvertible()) {
    throw std::invalid_argument("gl_action: B is singular");
  }
  const Eigen::MatrixXd Binv = lu.inverse();
  return LinearSystem(M * sys.A() * Binv, M * sys.C(), sys.W() * Binv);
}

LinearSystem conjugate_system(const LinearMap& f, const LinearSystem& sys1) {
  return gl_action(f, sys1);
}

MorphismReport check_morphism(const LinearMap& f, const LinearSystem& sys1,
                              const LinearSystem& sys2, double tol) {
  const Eigen::MatrixXd& F = f.matrix;
  if (F.rows() != sys2.dim() || F.cols() != sys1.dim()) {
    throw std::invalid_argument(
        "check_morphism: map must be dim(sys2) x dim(sys1)");
  }
  MorphismReport rep;
  rep.state_residual = (F * sys1.A() - sys2.A() * F).norm();
  rep.input_residual = (F * sys1.C() - sys2.C()).norm();
  rep.readout_residual = (sys1.W() - sys2.W() * F).norm();
  rep.passes = rep.state_residual < tol && rep.input_residual < tol &&
               rep.readout_residual < tol;
  return rep;
}

LinearMap find_isomorphism(const LinearSystem& sys1, const LinearSystem& sys2,
                           double tol) {
  if (!is_canonical(sys1, tol).canonical) {
    throw NotCanonical("find_isomorphism: first system is not canonical");
  }
  if (!is_canonical(sys2, tol).canonical) {
    throw NotCanonical("find_isomorphism: second system is not canonical");
  }
  const Eigen::Index n = sys1.dim();
  if (sys2.dim() != n) {
    throw NoIsomorphism("find_isomorphism: canonical dimensions differ",
                        std::numeric_limits<double>::infinity());
  }
  const std::size_t horizon = 2 * static_cast<std::size_t>(n);
  const std::vector<double> g1 = markov_parameters(sys1, horizon);
  const std::vector<double> g2 = markov_parameters(sys2, horizon);
  double gap = 0.0;
  for (std::size_t j = 0; j <= horizon; ++j) {
    gap = std::max(gap, std::abs(g1[j] - g2[j]));
  }
  if (gap > tol) {
    std::ostringstream msg;
    msg << "find_isomorphism: impulse responses differ by " << gap;
    throw NoIsomorphism(msg.str(), gap);
  }
  if (n == 0) return {Eigen::MatrixXd(0, 0)};

  // Unknown vec(B), column-major. vec(B A1) = (A1^T kron I) vec(B),
  // vec(A2 B) = (I kron A2) vec(B), and likewise for C1 and W2.
  const Eigen::Index nn = n * n;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nn + 2 * n, nn);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nn + 2 * n);
  for (Eigen::Index c = 0; c < n; ++c) {      // column of B
    for (Eigen::Index r = 0; r < n; ++r) {    // row of B
      const Eigen::Index unknown = c * n + r;
      for (Eigen::Index k = 0; k < n; ++k) {
        // (B A1)(r, k) += B(r, c) A1(c, k)
        M(k * n + r, unknown) += sys1.A()(c, k);
        // (A2 B)(k, c) += A2(k, r) B(r, c)
        M(c * n + k, unknown) -= sys2.A()(k, r);
      }
      M(nn + r, unknown) += sys1.C()(c);      // (B C1)(r)
      M(nn + n + c, unknown) += sys2.W()(r);  // (W2 B)(c)
    }
  }
  rhs.segment(nn, n) = sys2.C();
  rhs.segment(nn + n, n) = sys1.W().transpose();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  const Eigen::VectorXd b = qr.solve(rhs);
  LinearMap B{Eigen::Map<const Eigen::MatrixXd>(b.data(), n, n)};

  const MorphismReport rep = check_morphism(B, sys1, sys2, 10 * tol);
  if (!rep.passes || !std::isfinite(condition_number(B))) {
    std::ostringstream msg;
    msg << "find_isomorphism: recovered map fails the morphism check "
        << "(residuals " << rep.state_residual << ", " << rep.input_residual
        << ", " << rep.readout_residual << ")";
    throw NoIsomorphism(msg.str(), gap);
  }
  return B;
}

}  // namespace canon
