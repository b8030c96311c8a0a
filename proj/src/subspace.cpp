#include "canon/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

namespace canon {

namespace {

// Orthonormal Krylov basis of span{v, M v, M^2 v, ...} by Arnoldi with a
// second Gram-Schmidt pass. Stops after max_cols directions or when the new
// direction falls below tol * max(||M||, 1).
Eigen::MatrixXd arnoldi_basis(const Eigen::MatrixXd& M,
                              const Eigen::VectorXd& v, double tol,
                              Eigen::Index max_cols) {
  const Eigen::Index n = M.rows();
  Eigen::MatrixXd Q(n, 0);
  const double mnorm = M.size() ? Eigen::JacobiSVD<Eigen::MatrixXd>(M)
                                      .singularValues()(0)
                                : 0.0;
  const double vnorm = v.norm();
  if (vnorm <= kRankFloor) return Q;
  Eigen::VectorXd w = v / vnorm;
  const double cutoff = std::max(tol * std::max(mnorm, 1.0), kRankFloor);
  Q.conservativeResize(n, 1);
  Q.col(0) = w;
  while (Q.cols() < std::min(n, max_cols)) {
    w = M * Q.col(Q.cols() - 1);
    for (int pass = 0; pass < 2; ++pass) {
      w -= Q * (Q.transpose() * w);
    }
    const double h = w.norm();
    if (h <= cutoff) break;
    Q.conservativeResize(n, Q.cols() + 1);
    Q.col(Q.cols() - 1) = w / h;
  }
  return Q;
}

// Column space of K via SVD, falling back to Arnoldi on (M, v) when K is
// ill-conditioned. The SVD decides the rank either way.
Subspace krylov_range(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M,
                      const Eigen::VectorXd& v, double tol) {
  const Eigen::Index n = K.rows();
  if (n == 0) return Subspace::zero(0, tol);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullU);
  const Eigen::VectorXd& s = svd.singularValues();
  const Eigen::Index rank = numerical_rank(s, tol);
  Subspace out;
  out.tol = tol;
  const double roundoff = static_cast<double>(n) *
                         std::numeric_limits<double>::epsilon() * s(0);
  Eigen::Index resolved = 0;
  while (resolved < s.size() && s(resolved) > roundoff) ++resolved;
  if (rank > 0 && s(0) / s(resolved - 1) > kKrylovConditionLimit) {
    out.basis = arnoldi_basis(M, v, tol, rank);
    out.unreliable_rank = true;
  } else if (rank == n) {
    out.basis = Eigen::MatrixXd::Identity(n, n);
    return out;
  } else {
    out.basis = svd.matrixU().leftCols(rank);
  }
  if (out.basis.cols() == n) {
    out.basis = Eigen::MatrixXd::Identity(n, n);
  }
  normalize_signs(out.basis);
  return out;
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& Q) {
  const Eigen::Index n = Q.rows();
  if (Q.cols() == 0) return Eigen::MatrixXd::Identity(n, n);
  if (Q.cols() == n) return Eigen::MatrixXd(n, 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Q, Eigen::ComputeFullU);
  return svd.matrixU().rightCols(n - Q.cols());
}

}  // namespace

Subspace Subspace::zero(Eigen::Index ambient, double tol) {
  return Subspace{Eigen::MatrixXd(ambient, 0), tol, false};
}

Subspace Subspace::full(Eigen::Index ambient, double tol) {
  return Subspace{Eigen::MatrixXd::Identity(ambient, ambient), tol, false};
}

Eigen::Index numerical_rank(const Eigen::VectorXd& singular_values,
                            double tol) {
  if (singular_values.size() == 0) return 0;
  const double threshold = std::max(tol * singular_values(0), kRankFloor);
  Eigen::Index r = 0;
  while (r < singular_values.size() && singular_values(r) > threshold) ++r;
  return r;
}

Eigen::MatrixXd controllability_matrix(const LinearSystem& sys) {
  const Eigen::Index n = sys.dim();
  Eigen::MatrixXd R(n, n);
  if (n == 0) return R;
  R.col(0) = sys.C();
  for (Eigen::Index i = 1; i < n; ++i) R.col(i) = sys.A() * R.col(i - 1);
  return R;
}

Eigen::MatrixXd observability_matrix(const LinearSystem& sys) {
  const Eigen::Index n = sys.dim();
  Eigen::MatrixXd O(n, n);
  if (n == 0) return O;
  O.row(0) = sys.W();
  for (Eigen::Index i = 1; i < n; ++i) O.row(i) = O.row(i - 1) * sys.A();
  return O;
}

Subspace reachable_subspace(const LinearSystem& sys, double tol) {
  return krylov_range(controllability_matrix(sys), sys.A(), sys.C(), tol);
}

Subspace observability_kernel(const LinearSystem& sys, double tol) {
  // The kernel is the orthogonal complement of the row space of O, which is
  // the Krylov space of (A^T, W^T).
  const Eigen::MatrixXd At = sys.A().transpose();
  Subspace rows = krylov_range(observability_matrix(sys).transpose(), At,
                               sys.W().transpose(), tol);
  Subspace out;
  out.tol = tol;
  out.unreliable_rank = rows.unreliable_rank;
  out.basis = orthogonal_complement(rows.basis);
  normalize_signs(out.basis);
  return out;
}

Subspace intersect(const Subspace& s1, const Subspace& s2) {
  if (s1.ambient_dim() != s2.ambient_dim()) {
    throw std::invalid_argument("intersect: ambient dimensions differ");
  }
  const double tol = std::max(s1.tol, s2.tol);
  const Eigen::Index n = s1.ambient_dim();
  Subspace out = Subspace::zero(n, tol);
  out.unreliable_rank = s1.unreliable_rank || s2.unreliable_rank;
  if (s1.dim() == 0 || s2.dim() == 0) return out;

  const Eigen::MatrixXd& B1 = s1.basis;
  const Eigen::MatrixXd& B2 = s2.basis;
  const Eigen::MatrixXd residual = B1 - B2 * (B2.transpose() * B1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual, Eigen::ComputeFullV);
  const Eigen::VectorXd& sines = svd.singularValues();
  const double threshold = std::max(tol, kRankFloor);
  // Singular values come sorted decreasingly; the small ones trail, and a
  // thin N x k input yields min(N, k) = k of them.
  Eigen::Index keep = 0;
  for (Eigen::Index i = sines.size() - 1; i >= 0 && sines(i) <= threshold;
       --i) {
    ++keep;
  }
  if (keep == 0) return out;
  const Eigen::MatrixXd V = svd.matrixV().rightCols(keep);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(B1 * V);
  out.basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, keep);
  normalize_signs(out.basis);
  return out;
}

double subspace_distance(const Subspace& s1, const Subspace& s2) {
  if (s1.ambient_dim() != s2.ambient_dim() || s1.dim() != s2.dim()) {
    return 1.0;
  }
  if (s1.dim() == 0) return 0.0;
  const Eigen::MatrixXd residual =
      s1.basis - s2.basis * (s2.basis.transpose() * s1.basis);
  return Eigen::JacobiSVD<Eigen::MatrixXd>(residual).singularValues()(0);
}

void normalize_signs(Eigen::MatrixXd& basis) {
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    auto col = basis.col(j);
    const double scale = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-8 * scale) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
  }
}

CanonicalityReport is_canonical(const LinearSystem& sys, double tol,
                                double margin) {
  require_esp(sys, margin);
  const Subspace reach = reachable_subspace(sys, tol);
  const Subspace kernel = observability_kernel(sys, tol);
  return {reach.dim() == sys.dim() && kernel.dim() == 0, reach.dim(),
          kernel.dim(), reach.unreliable_rank || kernel.unreliable_rank};
}

}  // namespace canon
