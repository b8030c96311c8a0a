#pragma once

// Single-input single-output linear state-space systems
//
//   x_t = A x_{t-1} + C z_t,   y_t = W x_t
//
// driven by semi-infinite inputs, together with the echo state property test,
// filter evaluation and certified l1 bounds on the impulse response.

#include <cstddef>
#include <stop_token>
#include <vector>

#include <Eigen/Dense>

#include "canon/signal.hpp"

namespace canon {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultMargin = 1e-8;

class LinearSystem {
 public:
  /// The zero filter on the empty state space.
  LinearSystem() = default;
  /// Throws std::invalid_argument on inconsistent sizes or non-finite entries.
  LinearSystem(Eigen::MatrixXd A, Eigen::VectorXd C, Eigen::RowVectorXd W);

  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& C() const { return C_; }
  const Eigen::RowVectorXd& W() const { return W_; }
  Eigen::Index dim() const { return A_.rows(); }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd C_;
  Eigen::RowVectorXd W_;
};

/// Truncated kernel (Psi_0, Psi_{-1}, ..., Psi_{-T}) and a certified bound on
/// the l1 mass of everything after Psi_{-T}.
struct ImpulseResponse {
  std::vector<double> coefficients;
  double tail_bound = 0.0;

  std::size_t horizon() const {
    return coefficients.empty() ? 0 : coefficients.size() - 1;
  }
  /// Upper bound on ||Psi||_1.
  double l1_norm() const;
};

/// Max eigenvalue modulus. Throws std::runtime_error if the eigensolver fails.
double spectral_radius(const Eigen::MatrixXd& A);

enum class EspStatus { kHolds, kFails, kIndeterminate };

struct EspCertificate {
  EspStatus status;
  double rho;
  bool holds() const { return status == EspStatus::kHolds; }
};

/// Holds when rho < 1 - margin and fails when rho >= 1. The band
/// [1 - margin, 1) is reported indeterminate.
EspCertificate esp_check(const LinearSystem& sys,
                         double margin = kDefaultMargin);

/// Throws EspViolation unless esp_check holds.
void require_esp(const LinearSystem& sys, double margin = kDefaultMargin);

struct EvalOptions {
  double margin = kDefaultMargin;
  /// Checked between output samples; a requested stop raises Cancelled.
  std::stop_token stop;
};

struct FunctionalValue {
  double value;
  /// Bounds |value - H(z')| for any bounded extension z' of the window whose
  /// sup norm does not exceed that of the window.
  double truncation_bound;
};

/// H(z) = W sum_j A^j C z_{-j} over the window.
FunctionalValue evaluate_functional(const LinearSystem& sys, const Signal& z,
                                    const EvalOptions& opts = {});

/// (U(z)_{-out_len+1}, ..., U(z)_0). Entries older than the window are
/// exact zeros under the zero-tail convention. Requires out_len > 0.
Signal evaluate_filter(const LinearSystem& sys, const Signal& z,
                       std::size_t out_len, const EvalOptions& opts = {});

/// Psi_{-j} = W A^j C for j = 0..horizon, with the tail certified by
/// l1_tail_bound.
ImpulseResponse impulse_response(const LinearSystem& sys, std::size_t horizon,
                                 double margin = kDefaultMargin);

/// Markov parameters W A^j C, j = 0..horizon, without any ESP requirement.
std::vector<double> markov_parameters(const LinearSystem& sys,
                                      std::size_t horizon);

/// Certified upper bound on sum_{j > horizon} |W A^j C|.
///
/// Let v = A^{horizon+1} C. For any k with ||A^k||_2 < 1, splitting the tail
/// into blocks of length k gives
///
///   sum_{m >= 0} |W A^m v| <= (sum_{i < k} ||W A^i||) ||v|| / (1 - ||A^k||).
///
/// The smallest such bound is taken over powers up to the first one with
/// norm at most 1/2. Returns exactly 0 when A^{horizon+1} C vanishes (e.g.
/// nilpotent A with horizon >= N). Throws std::runtime_error if no
/// contracting power is found within 10 N ceil(1 / (1 - rho)) powers.
double l1_tail_bound(const LinearSystem& sys, std::size_t horizon,
                     double margin = kDefaultMargin);

struct Convolution {
  double value;
  double error_bound;
};

/// sum_{j <= min(T, L-1)} Psi_{-j} z_{-j}; error bounded by tail_bound times
/// sup_norm(z).
Convolution convolve(const ImpulseResponse& psi, const Signal& z);

/// Bound on |H(u z~_t) - H(v z~_t)| for histories with ||u - v||_inf <=
/// input_gap: (||Psi||_1 - sum_{j < t} |Psi_{-j}|) * input_gap. Nonincreasing
/// in t and equal to tail_bound * input_gap once t exceeds the horizon.
double ifp_gap_bound(const ImpulseResponse& psi, std::size_t t,
                     double input_gap);

}  // namespace canon
