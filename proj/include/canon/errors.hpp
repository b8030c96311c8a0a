#pragma once

#include <stdexcept>
#include <string>

namespace canon {

/// Raised when an operation that needs the echo state property is handed a
/// system for which it does not hold (or cannot be certified).
class EspViolation : public std::domain_error {
 public:
  EspViolation(const std::string& what, double rho)
      : std::domain_error(what), rho_(rho) {}
  double rho() const { return rho_; }

 private:
  double rho_;
};

class NotCanonical : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NoIsomorphism : public std::runtime_error {
 public:
  NoIsomorphism(const std::string& what, double impulse_gap)
      : std::runtime_error(what), impulse_gap_(impulse_gap) {}
  double impulse_gap() const { return impulse_gap_; }

 private:
  double impulse_gap_;
};

/// A request that cannot be met, e.g. an approximation budget below the
/// certified tail of an impulse response. `floor()` is the best achievable.
class Infeasible : public std::runtime_error {
 public:
  Infeasible(const std::string& what, double floor)
      : std::runtime_error(what), floor_(floor) {}
  double floor() const { return floor_; }

 private:
  double floor_;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Cancelled : public std::runtime_error {
 public:
  Cancelled() : std::runtime_error("operation cancelled") {}
};

}  // namespace canon
