#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "qcirc/core.hpp"
#include "qcirc/quartic.hpp"

namespace qcirc {

namespace detail {

// Scaled derivative g(theta) = r1 sin(theta-mu1) + r2 sin(theta-mu2)
//                              + 2 r1 r2 sin(2 theta - mu1 - mu2),
// related to the density by f'(theta) = -(2/I) g(theta).
inline double derivative_core(const QCParams& p, double th) {
  const double m1 = p.mu1.radians();
  const double m2 = p.mu2.radians();
  return p.r1 * std::sin(th - m1) + p.r2 * std::sin(th - m2) +
         2.0 * p.r1 * p.r2 * std::sin(2.0 * th - m1 - m2);
}

inline double pdf_second_derivative(const QCParams& p, double th) {
  const double m1 = p.mu1.radians();
  const double m2 = p.mu2.radians();
  const double i = normalization_constant(p);
  return -(2.0 / i) * (p.r1 * std::cos(th - m1) + p.r2 * std::cos(th - m2) +
                       4.0 * p.r1 * p.r2 * std::cos(2.0 * th - m1 - m2));
}

inline double pdf_third_derivative(const QCParams& p, double th) {
  const double m1 = p.mu1.radians();
  const double m2 = p.mu2.radians();
  const double i = normalization_constant(p);
  return (2.0 / i) * (p.r1 * std::sin(th - m1) + p.r2 * std::sin(th - m2) +
                      8.0 * p.r1 * p.r2 * std::sin(2.0 * th - m1 - m2));
}

inline double pdf_fourth_derivative(const QCParams& p, double th) {
  const double m1 = p.mu1.radians();
  const double m2 = p.mu2.radians();
  const double i = normalization_constant(p);
  return (2.0 / i) * (p.r1 * std::cos(th - m1) + p.r2 * std::cos(th - m2) +
                      16.0 * p.r1 * p.r2 * std::cos(2.0 * th - m1 - m2));
}

}  // namespace detail

/// All theta in [0, 2*pi) with r1 sin(theta-mu1) + r2 sin(theta-mu2)
/// + 2 r1 r2 sin(2 theta - mu1 - mu2) = 0, i.e. the stationary points of the
/// density. Solved through the quartic in z = e^{i theta} (see
/// unit_circle_trig_zeros). Throws DegenerateUniform when r1 = r2 = 0.
inline std::vector<Angle> stationary_points(const QCParams& p) {
  if (p.r1 == 0.0 && p.r2 == 0.0) {
    throw DomainError(ErrorCode::DegenerateUniform, "every point of the uniform density is stationary");
  }
  const Complex b1 = p.r1 * std::polar(1.0, -p.mu1.radians()) +
                     p.r2 * std::polar(1.0, -p.mu2.radians());
  const Complex b2 = 2.0 * p.r1 * p.r2 * std::polar(1.0, -(p.mu1.radians() + p.mu2.radians()));
  std::vector<double> zeros = unit_circle_trig_zeros(b1, b2);
  std::vector<Angle> out;
  out.reserve(zeros.size());
  for (double t : zeros) out.push_back(Angle(t));
  return out;
}

struct StationaryPoint {
  Angle theta;
  double density = 0.0;
  bool flat = false;  // classified by the fourth-derivative test (f'' ~ 0)
};

struct StationaryReport {
  std::vector<StationaryPoint> modes;
  std::vector<StationaryPoint> antimodes;
  std::vector<StationaryPoint> inflections;  // f'' ~ 0 with f''' != 0; not expected in practice
  bool unimodal = true;
};

/// Stationary points partitioned by the second-derivative test; points with
/// vanishing second derivative fall back to higher-order tests. On the
/// boundary 4 r1 r2 = r1 + r2 (with mu1 = mu2) the flat point opposite the
/// mode is a fourth-order minimum: it is reported as a flat antimode and the
/// distribution counts as unimodal.
inline StationaryReport classify_stationary(const QCParams& p) {
  StationaryReport report;
  const std::vector<Angle> points = stationary_points(p);
  const double i = normalization_constant(p);
  const double curvature_scale =
      (2.0 / i) * (p.r1 + p.r2 + 4.0 * p.r1 * p.r2);
  const double tol = 1e-9 * curvature_scale;
  for (Angle theta : points) {
    StationaryPoint sp{theta, pdf(p, theta), false};
    const double d2 = detail::pdf_second_derivative(p, theta.radians());
    if (d2 < -tol) {
      report.modes.push_back(sp);
    } else if (d2 > tol) {
      report.antimodes.push_back(sp);
    } else {
      sp.flat = true;
      const double d3 = detail::pdf_third_derivative(p, theta.radians());
      if (std::fabs(d3) > tol) {
        report.inflections.push_back(sp);
      } else if (detail::pdf_fourth_derivative(p, theta.radians()) > 0.0) {
        report.antimodes.push_back(sp);
      } else {
        report.modes.push_back(sp);
      }
    }
  }
  report.unimodal = report.modes.size() <= 1;
  return report;
}

enum class MedianRule {
  MinAbsDeviation,    // candidate minimizing the circular mean absolute deviation
  NonpositiveCosine,  // candidate with r1 cos(phi-mu1) + r2 cos(phi-mu2) <= 0
};

struct MedianResult {
  Angle selected;
  std::array<Angle, 2> candidates;        // the two antipodal roots
  std::array<double, 2> mean_abs_deviation;
  MedianRule rule = MedianRule::MinAbsDeviation;
};

/// Circular mean absolute deviation around phi, by N-node trapezoid
/// quadrature (the integrand has kinks, so this is approximate; it is only
/// used to compare the two antipodal candidates).
inline double mean_abs_deviation(const QCParams& p, Angle phi, int nodes = 256) {
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const Angle theta(kTwoPi * k / nodes);
    acc += circular_distance(theta, phi) * pdf(p, theta);
  }
  return acc * kTwoPi / nodes;
}

/// Both medians candidates phi with r1 sin(phi-mu1) + r2 sin(phi-mu2) = 0
/// (the mean direction and its antipode; each splits the mass in half), plus
/// a selected one. The default rule picks the candidate with smaller circular
/// mean absolute deviation; NonpositiveCosine instead applies the sign
/// condition r1 cos(phi-mu1) + r2 cos(phi-mu2) <= 0, which always selects the
/// antipode of the mean direction. The two rules genuinely disagree, so both
/// are exposed. Throws DegenerateUniform when r1 = r2 = 0 and
/// UndefinedDirection when the mean resultant vanishes (then every phi splits
/// the mass in half).
inline MedianResult median(const QCParams& p, MedianRule rule = MedianRule::MinAbsDeviation) {
  if (p.r1 == 0.0 && p.r2 == 0.0) {
    throw DomainError(ErrorCode::DegenerateUniform, "median of the uniform distribution is arbitrary");
  }
  const SummaryStats stats = summary(p);  // throws UndefinedDirection if resultant vanishes
  MedianResult result;
  result.rule = rule;
  result.candidates = {stats.mean_direction, opposite(stats.mean_direction)};
  result.mean_abs_deviation = {mean_abs_deviation(p, result.candidates[0]),
                               mean_abs_deviation(p, result.candidates[1])};
  if (rule == MedianRule::MinAbsDeviation) {
    result.selected = result.mean_abs_deviation[0] <= result.mean_abs_deviation[1]
                          ? result.candidates[0]
                          : result.candidates[1];
  } else {
    const auto cosine_side = [&](Angle phi) {
      return p.r1 * std::cos(phi.radians() - p.mu1.radians()) +
             p.r2 * std::cos(phi.radians() - p.mu2.radians());
    };
    result.selected =
        cosine_side(result.candidates[0]) <= 0.0 ? result.candidates[0] : result.candidates[1];
  }
  return result;
}

enum class SymmetryCase {
  None,
  Uniform,          // r1 = r2 = 0
  SingleTerm,       // exactly one radius is zero; axis at the remaining angle
  EqualAngles,      // mu1 = mu2; axis at mu1
  EqualRadii,       // r1 = r2; axis at (mu1 + mu2) / 2
  AntipodalAngles,  // mu2 = mu1 + pi; axis at mu1
};

inline const char* to_string(SymmetryCase c) {
  switch (c) {
    case SymmetryCase::None: return "None";
    case SymmetryCase::Uniform: return "Uniform";
    case SymmetryCase::SingleTerm: return "SingleTerm";
    case SymmetryCase::EqualAngles: return "EqualAngles";
    case SymmetryCase::EqualRadii: return "EqualRadii";
    case SymmetryCase::AntipodalAngles: return "AntipodalAngles";
  }
  return "None";
}

struct SymmetryReport {
  bool symmetric = false;
  SymmetryCase kind = SymmetryCase::None;
  std::optional<Angle> axis;           // present iff symmetric
  std::optional<Angle> antipodal_axis; // axis + pi defines the same reflection
  double reflection_residual = 0.0;    // max |f(axis+t) - f(axis-t)| on a 720-point grid
};

namespace detail {

inline double reflection_residual(const QCParams& p, Angle axis, int nodes = 720) {
  double worst = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double t = kTwoPi * k / nodes;
    worst = std::max(worst, std::fabs(pdf(p, Angle(axis.radians() + t)) -
                                      pdf(p, Angle(axis.radians() - t))));
  }
  return worst;
}

}  // namespace detail

/// The density is reflection-symmetric exactly when one of the structural
/// cases below holds (tolerance 1e-12 on radii, circular 1e-12 on angles).
/// The cases are checked in the listed priority order; when several hold the
/// reported axes agree up to a quarter turn that is itself an axis.
///
/// Equivalently: symmetry about theta0 means both e^{-i theta0} c1 and
/// e^{-2i theta0} c2 are real, which forces one of the cases. Note the
/// antipodal case (mu2 = mu1 + pi, any radii): there both moments are real
/// multiples of e^{i mu1} and e^{2i mu1}, so the density is even around mu1.
inline SymmetryReport detect_symmetry(const QCParams& p) {
  SymmetryReport report;
  const double m1 = p.mu1.radians();
  const double m2 = p.mu2.radians();
  const bool z1 = p.r1 <= 1e-12;
  const bool z2 = p.r2 <= 1e-12;
  if (z1 && z2) {
    report.kind = SymmetryCase::Uniform;
    report.axis = Angle(0.0);
  } else if (z1 || z2) {
    report.kind = SymmetryCase::SingleTerm;
    report.axis = z1 ? p.mu2 : p.mu1;
  } else if (circular_distance(p.mu1, p.mu2) <= 1e-12) {
    report.kind = SymmetryCase::EqualAngles;
    report.axis = p.mu1;
  } else if (std::fabs(p.r1 - p.r2) <= 1e-12) {
    report.kind = SymmetryCase::EqualRadii;
    report.axis = Angle(0.5 * (m1 + m2));
  } else if (circular_distance(opposite(p.mu1), p.mu2) <= 1e-12) {
    report.kind = SymmetryCase::AntipodalAngles;
    report.axis = p.mu1;
  }
  report.symmetric = report.kind != SymmetryCase::None;
  if (report.symmetric) {
    report.antipodal_axis = opposite(*report.axis);
    report.reflection_residual = detail::reflection_residual(p, *report.axis);
  }
  return report;
}

}  // namespace qcirc
