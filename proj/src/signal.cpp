#include "canon/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace canon {

Signal::Signal(std::vector<double> window) : window_(std::move(window)) {
  for (double v : window_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("Signal: non-finite entry in window");
    }
  }
}

double Signal::at(long t) const {
  if (t > 0) throw std::out_of_range("Signal::at: t must be <= 0");
  const long len = static_cast<long>(window_.size());
  if (-t >= len) return 0.0;
  return window_[static_cast<std::size_t>(len - 1 + t)];
}

bool operator==(const Signal& a, const Signal& b) {
  const long n = static_cast<long>(std::max(a.length(), b.length()));
  for (long t = 0; t > -n; --t) {
    if (a.at(t) != b.at(t)) return false;
  }
  return true;
}

WeightingSequence WeightingSequence::geometric(double decay) {
  if (!(decay > 0.0 && decay < 1.0)) {
    throw std::invalid_argument("geometric weighting needs 0 < decay < 1");
  }
  return WeightingSequence(decay);
}

double WeightingSequence::operator()(std::size_t t) const {
  return std::pow(decay_, static_cast<double>(t));
}

double sup_norm(const Signal& z) {
  double m = 0.0;
  for (double v : z.window()) m = std::max(m, std::abs(v));
  return m;
}

double weighted_norm(const Signal& z, const WeightingSequence& w) {
  double m = 0.0;
  const long len = static_cast<long>(z.length());
  for (long t = 0; t > -len; --t) {
    m = std::max(m, std::abs(z.at(t)) * w(static_cast<std::size_t>(-t)));
  }
  return m;
}

Signal delay(const Signal& z, long tau) {
  auto win = z.window();
  if (tau >= 0) {
    const std::size_t keep =
        win.size() > static_cast<std::size_t>(tau) ? win.size() - tau : 0;
    return Signal(std::vector<double>(win.begin(), win.begin() + keep));
  }
  std::vector<double> out(win.begin(), win.end());
  out.resize(out.size() + static_cast<std::size_t>(-tau), 0.0);
  return Signal(std::move(out));
}

Signal concat(const Signal& z, std::span<const double> tail) {
  std::vector<double> out(z.window().begin(), z.window().end());
  out.insert(out.end(), tail.begin(), tail.end());
  return Signal(std::move(out));
}

Signal impulse(long t, double height) {
  if (t > 0) throw std::invalid_argument("impulse: t must be <= 0");
  std::vector<double> out(static_cast<std::size_t>(-t) + 1, 0.0);
  out.front() = height;
  return Signal(std::move(out));
}

Signal axpy(double alpha, const Signal& a, const Signal& b) {
  const std::size_t n = std::max(a.length(), b.length());
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long t = -static_cast<long>(n - 1 - k);
    out[k] = alpha * a.at(t) + b.at(t);
  }
  return Signal(std::move(out));
}

}  // namespace canon
