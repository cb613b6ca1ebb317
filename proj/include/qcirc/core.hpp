#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>

#include "qcirc/angle.hpp"
#include "qcirc/error.hpp"
#include "qcirc/params.hpp"

namespace qcirc {

using Complex = std::complex<double>;

/// Normalization constant I(r1, r2) = 2*pi*(1 + r1^2 + r2^2) of the
/// unnormalized quadratic-cardioid density.
inline double normalization_constant(const QCParams& p) {
  return kTwoPi * (1.0 + p.r1 * p.r1 + p.r2 * p.r2);
}

/// Density evaluated through its cosine expansion.
inline double pdf(const QCParams& p, Angle theta) {
  const double th = theta.radians();
  const double m1 = p.mu1.radians();
  const double m2 = p.mu2.radians();
  const double a = 1.0 + p.r1 * p.r1 + p.r2 * p.r2;
  const double value = a + 2.0 * p.r1 * std::cos(th - m1) + 2.0 * p.r2 * std::cos(th - m2) +
                       2.0 * p.r1 * p.r2 * std::cos(2.0 * th - m1 - m2);
  return value / (kTwoPi * a);
}

/// Density evaluated as |1 + r1 e^{i(theta-mu1)} + r2 e^{-i(theta-mu2)}|^2 / I.
/// Agrees with pdf() to rounding and makes nonnegativity manifest.
inline double pdf_modulus_form(const QCParams& p, Angle theta) {
  const double th = theta.radians();
  const Complex z = 1.0 + p.r1 * std::polar(1.0, th - p.mu1.radians()) +
                    p.r2 * std::polar(1.0, -(th - p.mu2.radians()));
  return std::norm(z) / normalization_constant(p);
}

namespace detail {

// Antiderivative of the density (not itself periodic; differences of it over
// an arc give probabilities).
inline double density_antiderivative(const QCParams& p, double th) {
  const double m1 = p.mu1.radians();
  const double m2 = p.mu2.radians();
  const double a = 1.0 + p.r1 * p.r1 + p.r2 * p.r2;
  return (a * th + 2.0 * p.r1 * std::sin(th - m1) + 2.0 * p.r2 * std::sin(th - m2) +
          p.r1 * p.r2 * std::sin(2.0 * th - m1 - m2)) /
         (kTwoPi * a);
}

}  // namespace detail

/// Probability of the arc from `origin` counterclockwise to `theta`.
/// cdf(p, origin, origin) = 0 and the mass of a full turn is 1.
inline double cdf(const QCParams& p, Angle theta, Angle origin = Angle(0.0)) {
  double arc = theta.radians() - origin.radians();
  if (arc < 0.0) arc += kTwoPi;
  const double lo = origin.radians();
  const double value = detail::density_antiderivative(p, lo + arc) -
                       detail::density_antiderivative(p, lo);
  return std::clamp(value, 0.0, 1.0);
}

/// Trigonometric moment E[e^{in theta}]. Nonzero only for |n| <= 2:
/// n = 1 gives (r1 e^{i mu1} + r2 e^{i mu2}) / (1 + r1^2 + r2^2) and
/// n = 2 gives r1 r2 e^{i(mu1 + mu2)} / (1 + r1^2 + r2^2); negative n
/// conjugates. The n = 2 phase follows from integrating the
/// cos(2 theta - mu1 - mu2) term and is verified against quadrature in the
/// test suite.
inline Complex trig_moment(const QCParams& p, int n) {
  const int k = n < 0 ? -n : n;
  if (k == 0) return Complex(1.0, 0.0);
  if (k > 2) return Complex(0.0, 0.0);
  const double a = 1.0 + p.r1 * p.r1 + p.r2 * p.r2;
  Complex value;
  if (k == 1) {
    value = (p.r1 * std::polar(1.0, p.mu1.radians()) + p.r2 * std::polar(1.0, p.mu2.radians())) / a;
  } else {
    value = p.r1 * p.r2 * std::polar(1.0, p.mu1.radians() + p.mu2.radians()) / a;
  }
  return n < 0 ? std::conj(value) : value;
}

struct SummaryStats {
  Angle mean_direction;
  double resultant_length = 0.0;   // |E[e^{i theta}]|, in [0, 1]
  double circular_variance = 1.0;  // 1 - resultant_length
};

/// Mean direction and mean resultant length. The resultant length is the
/// modulus of the first trigonometric moment, i.e.
/// sqrt(r1^2 + r2^2 + 2 r1 r2 cos(mu1 - mu2)) / (1 + r1^2 + r2^2); without
/// the normalizing denominator the expression could exceed 1.
/// Throws UndefinedDirection when the resultant vanishes (uniform case, and
/// the balanced case r1 = r2 with mu2 = mu1 + pi).
inline SummaryStats summary(const QCParams& p) {
  const Complex resultant =
      p.r1 * std::polar(1.0, p.mu1.radians()) + p.r2 * std::polar(1.0, p.mu2.radians());
  const double a = 1.0 + p.r1 * p.r1 + p.r2 * p.r2;
  if (std::abs(resultant) <= 1e-14 * std::max(1.0, p.r1 + p.r2)) {
    throw DomainError(ErrorCode::UndefinedDirection, "mean resultant vanishes");
  }
  SummaryStats s;
  s.mean_direction = Angle(std::arg(resultant));
  s.resultant_length = std::abs(resultant) / a;
  s.circular_variance = 1.0 - s.resultant_length;
  return s;
}

/// When one radius is zero the distribution is an ordinary cardioid
/// C(mu, rho) with rho = r / (1 + r^2), where (mu, r) is the remaining term.
/// Matching densities forces that rho (which never exceeds 1/2). Returns
/// nullopt when both radii are positive.
inline std::optional<CardioidParams> reduce_to_cardioid(const QCParams& p) {
  if (p.r1 == 0.0 && p.r2 == 0.0) return CardioidParams(Angle(0.0), 0.0);
  if (p.r2 == 0.0) return CardioidParams(p.mu1, p.r1 / (1.0 + p.r1 * p.r1));
  if (p.r1 == 0.0) return CardioidParams(p.mu2, p.r2 / (1.0 + p.r2 * p.r2));
  return std::nullopt;
}

/// Cardioid density (1 + 2 rho cos(theta - mu)) / (2 pi).
inline double cardioid_pdf(const CardioidParams& c, Angle theta) {
  return (1.0 + 2.0 * c.rho * std::cos(theta.radians() - c.mu.radians())) / kTwoPi;
}

}  // namespace qcirc
