#pragma once

#include <cmath>

#include "qcirc/angle.hpp"
#include "qcirc/error.hpp"

namespace qcirc {

/// Parameters of a quadratic cardioid distribution QC(mu1, mu2, r1, r2).
/// The density is proportional to |1 + r1 e^{i(theta-mu1)} + r2 e^{-i(theta-mu2)}|^2,
/// so it is invariant under swapping (mu1, r1) with (mu2, r2).
struct QCParams {
  Angle mu1;
  Angle mu2;
  double r1 = 0.0;
  double r2 = 0.0;

  QCParams() = default;

  QCParams(Angle mu1_in, Angle mu2_in, double r1_in, double r2_in)
      : mu1(mu1_in), mu2(mu2_in), r1(r1_in), r2(r2_in) {
    if (!std::isfinite(r1) || !std::isfinite(r2) || r1 < 0.0 || r2 < 0.0) {
      throw DomainError(ErrorCode::InvalidParams, "radii must be finite and nonnegative");
    }
  }

  QCParams(double mu1_in, double mu2_in, double r1_in, double r2_in)
      : QCParams(Angle(mu1_in), Angle(mu2_in), r1_in, r2_in) {}
};

/// Cardioid parameters C(mu, rho), density (1 + 2 rho cos(theta-mu)) / (2 pi).
/// |rho| = 1/2 is the degenerate boundary where the density touches zero;
/// |rho| > 1/2 would make the density negative and is rejected.
struct CardioidParams {
  Angle mu;
  double rho = 0.0;

  CardioidParams() = default;

  CardioidParams(Angle mu_in, double rho_in) : mu(mu_in), rho(rho_in) {
    if (!std::isfinite(rho) || std::fabs(rho) > 0.5) {
      throw DomainError(ErrorCode::InvalidParams, "cardioid requires |rho| <= 1/2");
    }
  }
};

/// Canonical representative of the parameter tuple: angles in [0, 2*pi),
/// (mu1, r1) and (mu2, r2) swapped if needed so mu1 <= mu2, radii ordered
/// r1 >= r2 when the angles coincide, and a zero radius forces its angle to
/// equal the other one (both zero gives the all-zero tuple). The density is
/// unchanged pointwise.
inline QCParams canonicalize(const QCParams& p) {
  if (p.r1 == 0.0 && p.r2 == 0.0) return QCParams(Angle(0.0), Angle(0.0), 0.0, 0.0);
  if (p.r1 == 0.0) return QCParams(p.mu2, p.mu2, p.r2, 0.0);
  if (p.r2 == 0.0) return QCParams(p.mu1, p.mu1, p.r1, 0.0);
  if (p.mu1.radians() > p.mu2.radians() ||
      (p.mu1.radians() == p.mu2.radians() && p.r1 < p.r2)) {
    return QCParams(p.mu2, p.mu1, p.r2, p.r1);
  }
  return p;
}

}  // namespace qcirc
