#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace tubegeo {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Maps an angle to [0, 2pi).
inline double normalize_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Maps an angle difference to (-pi, pi].
inline double wrap_difference(double d) {
  double r = std::remainder(d, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// A point e^{i(anchor + offset)} on the unit circle.  Quadrature nodes near a
// singular point are stored as offsets from that point so that distances to it
// keep full relative precision even when they are far below machine epsilon.
class CirclePoint {
 public:
  CirclePoint() = default;
  explicit CirclePoint(double angle) : anchor_(normalize_angle(angle)) {}
  static CirclePoint near(double anchor, double offset) {
    CirclePoint p;
    p.anchor_ = anchor;
    p.offset_ = offset;
    return p;
  }

  double anchor() const { return anchor_; }
  double offset() const { return offset_; }
  double angle() const { return normalize_angle(anchor_ + offset_); }

  std::complex<double> value() const {
    if (offset_ == 0.0) return std::polar(1.0, anchor_);
    return std::polar(1.0, anchor_) * std::polar(1.0, offset_);
  }

  // Signed angular distance from e^{i theta} to this point, in (-pi, pi].
  // Exact in the offset when theta coincides with the anchor.
  double offset_from(double theta) const {
    double base = wrap_difference(anchor_ - theta);
    return wrap_difference(base + offset_);
  }

  // |e^{i theta} - this|
  double chord_to(double theta) const {
    return 2.0 * std::abs(std::sin(0.5 * offset_from(theta)));
  }

  bool coincides(const CirclePoint& other, double tol = 1e-12) const {
    return std::abs(offset_from(other.angle())) <= tol;
  }
  bool coincides(double theta, double tol = 1e-12) const {
    return std::abs(offset_from(theta)) <= tol;
  }

 private:
  double anchor_ = 0.0;
  double offset_ = 0.0;
};

}  // namespace tubegeo
