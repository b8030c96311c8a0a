#include "canon/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "canon/errors.hpp"

namespace canon {

namespace {

// Relative slack absorbing rounding in the computed powers A^j C.
constexpr double kBoundSlack = 1.0 + 1e-10;

// Largest eigenvalue of M^T M; relative accuracy near machine precision for
// the top singular value, which is all the tail bound needs.
double spectral_norm(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M.transpose() * M,
                                                     Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

void check_finite(const Eigen::VectorXd& v) {
  if (!v.allFinite()) {
    throw std::runtime_error("matrix power overflowed while iterating A^j");
  }
}

}  // namespace

LinearSystem::LinearSystem(Eigen::MatrixXd A, Eigen::VectorXd C,
                           Eigen::RowVectorXd W)
    : A_(std::move(A)), C_(std::move(C)), W_(std::move(W)) {
  if (A_.rows() != A_.cols()) {
    throw std::invalid_argument("LinearSystem: A must be square");
  }
  if (C_.size() != A_.rows() || W_.size() != A_.rows()) {
    throw std::invalid_argument("LinearSystem: C and W must have length N");
  }
  if (!A_.allFinite() || !C_.allFinite() || !W_.allFinite()) {
    throw std::invalid_argument("LinearSystem: non-finite entry");
  }
}

double ImpulseResponse::l1_norm() const {
  double s = tail_bound;
  for (double c : coefficients) s += std::abs(c);
  return s;
}

double spectral_radius(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("spectral_radius: A must be square");
  }
  if (A.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("spectral_radius: eigenvalue solver failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

EspCertificate esp_check(const LinearSystem& sys, double margin) {
  const double rho = spectral_radius(sys.A());
  if (rho < 1.0 - margin) return {EspStatus::kHolds, rho};
  if (rho >= 1.0) return {EspStatus::kFails, rho};
  return {EspStatus::kIndeterminate, rho};
}

void require_esp(const LinearSystem& sys, double margin) {
  const EspCertificate cert = esp_check(sys, margin);
  if (cert.holds()) return;
  std::ostringstream msg;
  msg << "echo state property "
      << (cert.status == EspStatus::kFails ? "fails" : "is indeterminate")
      << " (rho = " << cert.rho << ")";
  throw EspViolation(msg.str(), cert.rho);
}

std::vector<double> markov_parameters(const LinearSystem& sys,
                                      std::size_t horizon) {
  std::vector<double> out(horizon + 1, 0.0);
  if (sys.dim() == 0) return out;
  Eigen::VectorXd v = sys.C();
  for (std::size_t j = 0; j <= horizon; ++j) {
    out[j] = sys.W().dot(v);
    if (j < horizon) {
      v = sys.A() * v;
      if (j % 32 == 31) check_finite(v);
    }
  }
  return out;
}

double l1_tail_bound(const LinearSystem& sys, std::size_t horizon,
                     double margin) {
  const Eigen::Index n = sys.dim();
  if (n == 0) return 0.0;
  require_esp(sys, margin);
  const Eigen::MatrixXd& A = sys.A();

  Eigen::VectorXd v = sys.C();
  for (std::size_t j = 0; j <= horizon; ++j) {
    v = A * v;
    if (!v.any()) return 0.0;
    if (j % 32 == 31) check_finite(v);
  }
  check_finite(v);

  const double rho = spectral_radius(A);
  const double kmax = 10.0 * static_cast<double>(n) *
                      std::ceil(1.0 / std::max(1.0 - rho, 1e-300));
  // Computed norms are inflated by their roundoff so that 1 - ||A^k|| stays
  // a certified gap.
  const double inflate = 1.0 + 4.0 * static_cast<double>(n) *
                                   std::numeric_limits<double>::epsilon();
  // Every contracting power gives a valid bound; keep the smallest one seen
  // until some power is at most 1/2, past which the gap gains at most 2x.
  Eigen::MatrixXd power = A;
  Eigen::RowVectorXd r = sys.W();
  double block = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1;; ++k) {
    block += r.norm();
    r = r * A;
    const double power_norm = inflate * spectral_norm(power);
    if (power_norm < 1.0) {
      best = std::min(best, block / (1.0 - power_norm));
      if (power_norm <= 0.5) break;
    }
    if (!(static_cast<double>(k) < kmax)) {
      if (std::isfinite(best)) break;
      throw std::runtime_error(
          "l1_tail_bound: no contracting power of A found");
    }
    power = power * A;
    if (!power.allFinite()) {
      throw std::runtime_error("l1_tail_bound: matrix power overflowed");
    }
  }
  return kBoundSlack * best * v.norm();
}

ImpulseResponse impulse_response(const LinearSystem& sys, std::size_t horizon,
                                 double margin) {
  require_esp(sys, margin);
  return {markov_parameters(sys, horizon),
          l1_tail_bound(sys, horizon, margin)};
}

FunctionalValue evaluate_functional(const LinearSystem& sys, const Signal& z,
                                    const EvalOptions& opts) {
  require_esp(sys, opts.margin);
  if (z.empty() || sys.dim() == 0) return {0.0, 0.0};
  const std::size_t len = z.length();
  const std::vector<double> g = markov_parameters(sys, len - 1);
  double value = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    value += g[j] * z.at(-static_cast<long>(j));
  }
  return {value, l1_tail_bound(sys, len - 1, opts.margin) * sup_norm(z)};
}

Signal evaluate_filter(const LinearSystem& sys, const Signal& z,
                       std::size_t out_len, const EvalOptions& opts) {
  if (out_len == 0) {
    throw std::invalid_argument("evaluate_filter: out_len must be positive");
  }
  require_esp(sys, opts.margin);
  const std::size_t len = z.length();
  std::vector<double> out(out_len, 0.0);
  if (sys.dim() == 0) return Signal(std::move(out));
  const std::vector<double> g = markov_parameters(sys, len - 1);
  // Entry k of the output is U(z)_{-(out_len-1-k)}, i.e. H(T_tau z).
  for (std::size_t k = 0; k < out_len; ++k) {
    if (opts.stop.stop_requested()) throw Cancelled();
    const long tau = static_cast<long>(out_len - 1 - k);
    double value = 0.0;
    for (std::size_t j = 0; j + tau < len; ++j) {
      value += g[j] * z.at(-tau - static_cast<long>(j));
    }
    out[k] = value;
  }
  return Signal(std::move(out));
}

Convolution convolve(const ImpulseResponse& psi, const Signal& z) {
  const std::size_t n = std::min(psi.coefficients.size(), z.length());
  double value = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    value += psi.coefficients[j] * z.at(-static_cast<long>(j));
  }
  return {value, psi.tail_bound * sup_norm(z)};
}

double ifp_gap_bound(const ImpulseResponse& psi, std::size_t t,
                     double input_gap) {
  if (input_gap < 0.0) {
    throw std::invalid_argument("ifp_gap_bound: input_gap must be >= 0");
  }
  if (input_gap == 0.0) return 0.0;
  double remaining = psi.tail_bound;
  for (std::size_t j = t; j < psi.coefficients.size(); ++j) {
    remaining += std::abs(psi.coefficients[j]);
  }
  return remaining * input_gap;
}

}  // namespace canon
