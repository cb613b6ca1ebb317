#pragma once

#include <cmath>
#include <compare>

#include "qcirc/error.hpp"

namespace qcirc {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// An angle on the circle, stored as radians in [0, 2*pi). Construction from
/// any finite real reduces modulo 2*pi.
class Angle {
 public:
  Angle() = default;

  explicit Angle(double radians) {
    if (!std::isfinite(radians)) {
      throw DomainError(ErrorCode::InvalidParams, "angle must be finite");
    }
    double r = std::fmod(radians, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod can round back up to 2*pi for tiny negative inputs.
    if (r >= kTwoPi) r = 0.0;
    radians_ = r;
  }

  static Angle from_degrees(double degrees) { return Angle(degrees * kPi / 180.0); }

  double radians() const { return radians_; }
  double degrees() const { return radians_ * 180.0 / kPi; }

  friend auto operator<=>(const Angle&, const Angle&) = default;

 private:
  double radians_ = 0.0;
};

/// Shortest arc length between two angles; symmetric and at most pi.
inline double circular_distance(Angle a, Angle b) {
  double d = std::fabs(a.radians() - b.radians());
  return std::min(d, kTwoPi - d);
}

inline Angle operator+(Angle a, double delta) { return Angle(a.radians() + delta); }
inline Angle operator-(Angle a, double delta) { return Angle(a.radians() - delta); }

/// Antipode of an angle.
inline Angle opposite(Angle a) { return Angle(a.radians() + kPi); }

}  // namespace qcirc
