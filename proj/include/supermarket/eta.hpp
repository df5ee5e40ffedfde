#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace supermarket {

/// Traffic scale parameter. Either a finite real >= 1 or the infinite case
/// (used by the limiting system, where the correction term vanishes).
/// Infinity is a distinct state, not a sentinel double; callers branch on it.
class Eta {
 public:
  static Eta finite(double value) {
    if (!std::isfinite(value) || value < 1.0) {
      throw std::invalid_argument("eta must be a finite real >= 1");
    }
    return Eta(value, false);
  }

  static Eta infinite() { return Eta(0.0, true); }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  /// Finite value; throws std::logic_error for the infinite case.
  double value() const {
    if (infinite_) throw std::logic_error("eta is infinite");
    return value_;
  }

  /// eta^p, +infinity when eta is infinite (p > 0 assumed).
  double pow(double p) const {
    return infinite_ ? std::numeric_limits<double>::infinity()
                     : std::pow(value_, p);
  }

  friend bool operator==(const Eta& a, const Eta& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  Eta(double value, bool infinite) : value_(value), infinite_(infinite) {}

  double value_;
  bool infinite_;
};

}  // namespace supermarket
