#include "canon/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace canon {

KalmanSubspaces kalman_subspaces(const LinearSystem& sys, double tol) {
  Subspace reach = reachable_subspace(sys, tol);
  Subspace kernel = observability_kernel(sys, tol);
  Subspace inter = intersect(reach, kernel);
  return {std::move(reach), std::move(kernel), std::move(inter)};
}

ReducedRealization reduce(const LinearSystem& sys, double tol, double margin) {
  require_esp(sys, margin);
  const Eigen::Index n = sys.dim();
  const KalmanSubspaces subs = kalman_subspaces(sys, tol);
  const Eigen::MatrixXd& Q = subs.reachable.basis;
  const Eigen::Index r = Q.cols();
  const Eigen::Index k = subs.intersection.dim();

  ReducedRealization out;
  out.original_dim = n;
  out.unreliable_rank = subs.reachable.unreliable_rank ||
                        subs.kernel.unreliable_rank;

  // Coordinates of K inside V_R, then their orthogonal complement there.
  Eigen::MatrixXd Z;
  if (k == 0) {
    Z = Eigen::MatrixXd::Identity(r, r);
  } else {
    const Eigen::MatrixXd Y = Q.transpose() * subs.intersection.basis;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Y, Eigen::ComputeFullU);
    Z = svd.matrixU().rightCols(r - k);
  }
  Eigen::MatrixXd section = Q * Z;
  if (section.cols() == n) section = Eigen::MatrixXd::Identity(n, n);
  normalize_signs(section);

  out.section = section;
  out.projection = section.transpose();
  if (section.cols() == 0) {
    out.system = LinearSystem();
  } else {
    out.system = LinearSystem(out.projection * sys.A() * section,
                              out.projection * sys.C(), sys.W() * section);
  }
  return out;
}

ReductionReport verify_reduction(const LinearSystem& original,
                                 const ReducedRealization& red,
                                 std::size_t horizon, double tol) {
  ReductionReport rep;
  const LinearSystem& bar = red.system;

  const std::vector<double> g = markov_parameters(original, horizon);
  const std::vector<double> gbar = markov_parameters(bar, horizon);
  for (std::size_t j = 0; j <= horizon; ++j) {
    rep.impulse_gap = std::max(rep.impulse_gap, std::abs(g[j] - gbar[j]));
  }

  const EspCertificate esp = esp_check(bar);
  rep.reduced_rho = esp.rho;
  if (esp.holds()) {
    rep.reduced_canonical = is_canonical(bar, tol);
  } else {
    rep.reduced_canonical = {false, 0, 0, false};
  }

  const Eigen::Index n = bar.dim();
  const Eigen::Index big = original.dim();
  if (red.projection.rows() != n || red.projection.cols() != big ||
      red.section.rows() != big || red.section.cols() != n) {
    rep.section_residual = std::numeric_limits<double>::infinity();
    rep.passes = false;
    return rep;
  }
  rep.section_residual =
      (red.projection * red.section - Eigen::MatrixXd::Identity(n, n)).norm();

  const KalmanSubspaces subs = kalman_subspaces(original, tol);
  if (subs.intersection.dim() > 0) {
    rep.kernel_residual = (red.projection * subs.intersection.basis).norm();
  }
  const Eigen::MatrixXd& BR = subs.reachable.basis;
  if (BR.cols() > 0) {
    const Eigen::MatrixXd piB = red.projection * BR;
    const double state =
        (red.projection * original.A() * BR - bar.A() * piB).norm();
    const double readout = (original.W() * BR - bar.W() * piB).norm();
    rep.intertwining_residual = std::max(state, readout);
  }

  if (n > 0) {
    Eigen::EigenSolver<Eigen::MatrixXd> es_bar(bar.A(), false);
    Eigen::EigenSolver<Eigen::MatrixXd> es(original.A(), false);
    const double scale = std::max(
        1.0, Eigen::JacobiSVD<Eigen::MatrixXd>(original.A())
                 .singularValues()(0));
    const Eigen::MatrixXcd Ac = original.A().cast<std::complex<double>>();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(big, big);
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::complex<double> mu = es_bar.eigenvalues()(i);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ac - mu * I);
      rep.spectrum_residual =
          std::max(rep.spectrum_residual,
                   svd.singularValues()(big - 1) / scale);
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < big; ++j) {
        nearest = std::min(nearest, std::abs(mu - es.eigenvalues()(j)));
      }
      rep.spectrum_distance = std::max(rep.spectrum_distance, nearest);
    }
  }

  rep.passes = rep.impulse_gap <= tol && rep.reduced_canonical.canonical &&
               esp.holds() && rep.section_residual <= tol &&
               rep.kernel_residual <= 10 * tol &&
               rep.intertwining_residual <= tol &&
               rep.spectrum_residual <= tol;
  return rep;
}

}  // namespace canon
