#pragma once

// Semi-infinite real sequences (z_t)_{t <= 0} represented by a finite window
// of the most recent values and an implicit zero tail.

#include <cstddef>
#include <span>
#include <vector>

namespace canon {

class Signal {
 public:
  Signal() = default;
  /// `window` runs oldest to newest: (z_{-L+1}, ..., z_0). Throws
  /// std::invalid_argument on non-finite entries.
  explicit Signal(std::vector<double> window);

  static Signal zero() { return Signal(); }

  /// z_t for t <= 0; zero outside the window. Throws for t > 0.
  double at(long t) const;

  std::size_t length() const { return window_.size(); }
  bool empty() const { return window_.empty(); }
  std::span<const double> window() const { return window_; }

  /// Sequence equality under the zero-tail convention: leading zeros of the
  /// window are not significant.
  friend bool operator==(const Signal& a, const Signal& b);

 private:
  std::vector<double> window_;
};

/// w_t = decay^t, 0 < decay < 1.
class WeightingSequence {
 public:
  static WeightingSequence geometric(double decay);

  double operator()(std::size_t t) const;
  double decay() const { return decay_; }

 private:
  explicit WeightingSequence(double decay) : decay_(decay) {}
  double decay_;
};

double sup_norm(const Signal& z);
double weighted_norm(const Signal& z, const WeightingSequence& w);

/// T_tau: for tau >= 0 the value now is the value tau steps ago (the tau most
/// recent entries are dropped); for tau < 0, |tau| zeros are appended at the
/// recent end.
Signal delay(const Signal& z, long tau);

/// The history z followed by the finite continuation `tail`; the last
/// element of `tail` becomes the new time-0 value.
Signal concat(const Signal& z, std::span<const double> tail);

/// Height at time t <= 0, zero elsewhere.
Signal impulse(long t, double height);

/// Linear combination alpha * a + b over the union of both windows.
Signal axpy(double alpha, const Signal& a, const Signal& b);

}  // namespace canon
