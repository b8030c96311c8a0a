#include "canon/realization.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "canon/errors.hpp"
#include "canon/subspace.hpp"

namespace canon {

double FiniteMemoryFilter::coefficient(std::size_t j) const {
  if (j >= psi.size()) return 0.0;
  return psi[psi.size() - 1 - j];
}

ImpulseResponse FiniteMemoryFilter::as_impulse_response() const {
  return {std::vector<double>(psi.rbegin(), psi.rend()), 0.0};
}

FiniteMemoryFilter FiniteMemoryFilter::from_impulse_response(
    const ImpulseResponse& psi) {
  return {std::vector<double>(psi.coefficients.rbegin(),
                              psi.coefficients.rend())};
}

LinearSystem shift_realization(const FiniteMemoryFilter& f) {
  const auto n = static_cast<Eigen::Index>(f.memory());
  if (n == 0) return LinearSystem();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  A.diagonal(1).setOnes();
  Eigen::VectorXd C = Eigen::VectorXd::Zero(n);
  C(n - 1) = 1.0;
  const Eigen::RowVectorXd W =
      Eigen::Map<const Eigen::RowVectorXd>(f.psi.data(), n);
  return LinearSystem(std::move(A), std::move(C), W);
}

ReducedRealization minimal_realization(const FiniteMemoryFilter& f,
                                       double tol) {
  return reduce(shift_realization(f), tol);
}

Eigen::MatrixXd hankel_matrix(const FiniteMemoryFilter& f) {
  const auto n = static_cast<Eigen::Index>(f.memory());
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      H(i, j) = f.coefficient(static_cast<std::size_t>(i + j));
    }
  }
  return H;
}

Eigen::Index hankel_rank(const FiniteMemoryFilter& f, double tol) {
  if (f.memory() == 0) return 0;
  return numerical_rank(
      Eigen::JacobiSVD<Eigen::MatrixXd>(hankel_matrix(f)).singularValues(),
      tol);
}

Eigen::Index hankel_rank(const LinearSystem& sys, double tol) {
  if (sys.dim() == 0) return 0;
  const Eigen::MatrixXd H =
      observability_matrix(sys) * controllability_matrix(sys);
  return numerical_rank(Eigen::JacobiSVD<Eigen::MatrixXd>(H).singularValues(),
                        tol);
}

ApproximateRealization approximate_realization(const ImpulseResponse& psi,
                                               double eps, double tol) {
  if (!(psi.tail_bound < eps)) {
    std::ostringstream msg;
    msg << "approximation budget " << eps
        << " is not above the certified tail " << psi.tail_bound;
    throw Infeasible(msg.str(), psi.tail_bound);
  }
  const std::vector<double>& c = psi.coefficients;
  // dropped[m] = l1 mass discarded when keeping the first m coefficients.
  std::vector<double> dropped(c.size() + 1);
  dropped[c.size()] = psi.tail_bound;
  for (std::size_t m = c.size(); m-- > 0;) {
    dropped[m] = dropped[m + 1] + std::abs(c[m]);
  }
  std::size_t kept = 0;
  while (dropped[kept] > eps) ++kept;

  ImpulseResponse prefix{std::vector<double>(c.begin(), c.begin() + kept),
                         0.0};
  return {minimal_realization(FiniteMemoryFilter::from_impulse_response(prefix),
                              tol),
          dropped[kept], kept};
}

}  // namespace canon
