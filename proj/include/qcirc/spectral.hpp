#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "qcirc/core.hpp"
#include "qcirc/quartic.hpp"

namespace qcirc {

/// Normalized trigonometric moments (c0 = 1 implied; negative indices are
/// conjugates). A probability measure with Fourier degree <= 2 is determined
/// by this pair.
struct TrigMoments {
  Complex c1{0.0, 0.0};
  Complex c2{0.0, 0.0};
};

inline TrigMoments moments_from_params(const QCParams& p) {
  return TrigMoments{trig_moment(p, 1), trig_moment(p, 2)};
}

/// 2*pi times the density determined by the moments:
/// p(theta) = 1 + 2 Re(conj(c1) e^{i theta}) + 2 Re(conj(c2) e^{2i theta}).
/// The moments belong to a probability measure exactly when p >= 0.
inline double moment_polynomial(const TrigMoments& m, Angle theta) {
  const Complex z = std::polar(1.0, theta.radians());
  return 1.0 + 2.0 * std::real(std::conj(m.c1) * z) + 2.0 * std::real(std::conj(m.c2) * z * z);
}

/// Leading principal minors (orders 2, 3, 4) of the banded Toeplitz moment
/// matrix with symbol rows (1, c1, c2, 0, ...). Positive semidefiniteness of
/// that matrix is Bochner's criterion; these minors are the closed-form
/// necessary conditions. All three are real by Hermitian symmetry.
inline std::array<double, 3> toeplitz_minors(const TrigMoments& m) {
  const Complex c1 = m.c1, c2 = m.c2;
  const Complex b1 = std::conj(c1), b2 = std::conj(c2);
  const Complex d1 = 1.0 - c1 * b1;
  const Complex d2 = c1 * c1 * b2 - 2.0 * c1 * b1 + c2 * b1 * b1 - c2 * b2 + 1.0;
  const Complex d3 = c1 * c1 * b1 * b1 + 2.0 * c1 * c1 * b2 - 2.0 * c1 * c2 * b1 * b2 -
                     3.0 * c1 * b1 + c2 * c2 * b2 * b2 + 2.0 * c2 * b1 * b1 - 2.0 * c2 * b2 + 1.0;
  return {d1.real(), d2.real(), d3.real()};
}

struct MembershipReport {
  bool in_class = false;                    // member of the degree-2 probability class
  std::array<double, 3> minors{};           // Toeplitz leading minors (orders 2..4)
  double min_density = 0.0;                 // global minimum of moment_polynomial
  Angle argmin;                             // where the minimum is attained
  bool qc_representable = false;            // filled by analyze_moments
  std::optional<QCParams> qc_params;        // present iff representable
};

/// Exact membership test: the degree-2 trigonometric polynomial p must be
/// nonnegative (up to -1e-12). Its global minimum is located through the
/// stationary points of p, found with the same unit-circle quartic used for
/// density modes. The Toeplitz minors are reported alongside as the
/// necessary determinant conditions.
inline MembershipReport membership(const TrigMoments& m) {
  MembershipReport report;
  report.minors = toeplitz_minors(m);
  const double scale = std::abs(m.c1) + std::abs(m.c2);
  if (scale < 1e-15) {
    report.min_density = 1.0;
    report.argmin = Angle(0.0);
    report.in_class = true;
    return report;
  }
  std::vector<double> zeros = unit_circle_trig_zeros(std::conj(m.c1), 2.0 * std::conj(m.c2));
  if (zeros.empty()) {
    // Should not happen for a nonconstant p; scan as a safety net.
    for (int k = 0; k < 1024; ++k) zeros.push_back(kTwoPi * k / 1024);
  }
  double best = std::numeric_limits<double>::infinity();
  Angle best_at;
  for (double t : zeros) {
    const double v = moment_polynomial(m, Angle(t));
    if (v < best) {
      best = v;
      best_at = Angle(t);
    }
  }
  report.min_density = best;
  report.argmin = best_at;
  report.in_class = best >= -1e-12;
  return report;
}

/// Coefficients of an analytic factor q(z) = a0 + a1 z + a2 z^2 whose squared
/// modulus on the unit circle reproduces the unnormalized density. When
/// a1 != 0 the stored form is normalized to a1 = 1, matching
/// r2 e^{i mu2} + z + r1 e^{-i mu1} z^2.
struct SpectralFactor {
  Complex a0{0.0, 0.0};
  Complex a1{0.0, 0.0};
  Complex a2{0.0, 0.0};
};

struct Factorization {
  QCParams params;                  // selected parameter tuple
  SpectralFactor factor;            // its normalized factor
  std::vector<QCParams> candidates; // all distinct canonical tuples matching the moments
};

namespace detail {

inline std::optional<QCParams> params_from_factor(Complex a0, Complex a1, Complex a2) {
  const double scale = std::abs(a0) + std::abs(a1) + std::abs(a2);
  if (std::abs(a1) <= 1e-12 * scale) return std::nullopt;
  const Complex lead = a2 / a1;   // r1 e^{-i mu1}
  const Complex trail = a0 / a1;  // r2 e^{i mu2}
  double r1 = std::abs(lead);
  double r2 = std::abs(trail);
  if (r1 < 1e-13) r1 = 0.0;
  if (r2 < 1e-13) r2 = 0.0;
  const Angle mu1 = r1 > 0.0 ? Angle(-std::arg(lead)) : Angle(0.0);
  const Angle mu2 = r2 > 0.0 ? Angle(std::arg(trail)) : Angle(0.0);
  return canonicalize(QCParams(mu1, mu2, r1, r2));
}

inline bool same_params(const QCParams& a, const QCParams& b, double tol = 1e-9) {
  return circular_distance(a.mu1, b.mu1) <= tol && circular_distance(a.mu2, b.mu2) <= tol &&
         std::fabs(a.r1 - b.r1) <= tol && std::fabs(a.r2 - b.r2) <= tol;
}

}  // namespace detail

/// Spectral factorization of the degree <= 2 moment pair: the nonnegative
/// polynomial p equals |q(e^{i theta})|^2 up to a positive constant for an
/// analytic quadratic q, recovered from the roots of z^2 p(z) (a quartic
/// whose roots come in reflection pairs across the unit circle; roots on the
/// circle have even multiplicity and are split evenly). Reading
/// r2 e^{i mu2} = a0/a1 and r1 e^{-i mu1} = a2/a1 off each admissible factor
/// yields parameter tuples that reproduce the moments exactly.
///
/// The factor is not unique: reflecting one member of a root pair rescales
/// |q|^2 by a positive constant, so a generic moment pair has exactly two
/// canonical parameter tuples (reflecting every root is the swap symmetry and
/// collapses under canonicalize). All surviving tuples are returned in
/// `candidates`; `params` is the minimum-phase choice (roots taken inside the
/// closed unit disk where possible).
///
/// Throws NotAMeasure when the moments fail membership and
/// NotRepresentableAsQC when every admissible factor has a1 = 0 (such
/// measures exist: c1 = 0, c2 = 1/2 gives q proportional to z^2 + 1, so the
/// degree-2 moment class is strictly larger than this family).
inline Factorization factorize_moments(const TrigMoments& m) {
  if (!membership(m).in_class) {
    throw DomainError(ErrorCode::NotAMeasure, "moments do not define a positive measure");
  }
  const double scale = std::abs(m.c1) + std::abs(m.c2);
  if (scale < 1e-15) {
    Factorization uniform;
    uniform.params = QCParams(Angle(0.0), Angle(0.0), 0.0, 0.0);
    uniform.factor = SpectralFactor{Complex(0.0), Complex(1.0), Complex(0.0)};
    uniform.candidates = {uniform.params};
    return uniform;
  }

  // Factor roots come from the self-inversive polynomial z^2 p(z) (z p(z)
  // when c2 vanishes and the factor is linear). Unit-circle roots of p have
  // even multiplicity and are recovered from the stationary structure of p
  // itself -- a double zero of p is a simple, well-conditioned zero of p' --
  // rather than by clustering polynomial roots, which scrambles by
  // ~eps^(1/4) near a quadruple root. The zero's factor multiplicity is read
  // off the curvature: p'' vanishes at a quadruple zero.
  const bool quadratic_factor = std::abs(m.c2) >= 1e-14 * std::max(1.0, scale);
  const int factor_degree = quadratic_factor ? 2 : 1;

  const std::vector<double> stationary =
      unit_circle_trig_zeros(std::conj(m.c1), 2.0 * std::conj(m.c2));
  const auto p_curvature = [&](double t) {
    const Complex z = std::polar(1.0, t);
    return -2.0 * std::real(std::conj(m.c1) * z) - 8.0 * std::real(std::conj(m.c2) * z * z);
  };
  const double curvature_scale = 1.0 + 2.0 * std::abs(m.c1) + 8.0 * std::abs(m.c2);

  // Zero dips of p, grouped by angular proximity: a group of several dips is
  // a pair of nearby double zeros (with the flat center between them also
  // below the threshold); an isolated dip is a double zero, or a quadruple
  // one when the curvature vanishes too.
  std::vector<double> dips;
  for (double t : stationary) {
    if (moment_polynomial(m, Angle(t)) <= 1e-11) dips.push_back(t);
  }
  std::sort(dips.begin(), dips.end());
  std::vector<std::vector<double>> groups;
  for (double t : dips) {
    if (groups.empty() || t - groups.back().back() > 5e-3) {
      groups.push_back({t});
    } else {
      groups.back().push_back(t);
    }
  }
  if (groups.size() > 1 &&
      kTwoPi - (groups.back().back() - groups.front().front()) <= 5e-3) {
    for (double t : groups.back()) groups.front().push_back(t);  // wrap-around group
    groups.pop_back();
  }
  std::vector<Complex> forced;  // circle roots of the factor, with multiplicity
  for (const std::vector<double>& group : groups) {
    const int room = factor_degree - static_cast<int>(forced.size());
    if (room <= 0) break;
    if (group.size() >= 2) {
      forced.push_back(std::polar(1.0, group.front()));
      if (room >= 2) forced.push_back(std::polar(1.0, group.back()));
    } else {
      const double t = group.front();
      const bool quadruple = std::fabs(p_curvature(t)) <= 1e-8 * curvature_scale;
      const int copies = std::min(quadruple ? 2 : 1, room);
      for (int k = 0; k < copies; ++k) forced.push_back(std::polar(1.0, t));
    }
  }

  struct Pair {
    Complex inner;
    Complex outer;
    int multiplicity;
  };
  std::vector<Pair> pairs;
  if (static_cast<int>(forced.size()) < factor_degree) {
    std::vector<Complex> coeffs;
    if (quadratic_factor) {
      coeffs = {m.c2, m.c1, Complex(1.0), std::conj(m.c1), std::conj(m.c2)};
    } else {
      coeffs = {m.c1, Complex(1.0), std::conj(m.c1)};
    }
    std::vector<Complex> roots = polynomial_roots(coeffs);
    // Remove the root pair absorbed by each circle zero, then group what is
    // left into reflection pairs.
    for (const Complex& z0 : forced) {
      for (int drop = 0; drop < 2; ++drop) {
        std::size_t nearest = 0;
        for (std::size_t j = 1; j < roots.size(); ++j) {
          if (std::abs(roots[j] - z0) < std::abs(roots[nearest] - z0)) nearest = j;
        }
        roots.erase(roots.begin() + nearest);
      }
    }
    std::vector<detail::RootCluster> clusters = detail::cluster_roots(coeffs, roots);
    // A reflection pair straddling the circle tighter than the cluster width
    // arrives as one even-multiplicity cluster hugging the circle; its two
    // choices coincide at the centroid.
    for (std::size_t i = 0; i < clusters.size();) {
      if (clusters[i].multiplicity % 2 == 0 &&
          std::fabs(std::abs(clusters[i].centroid) - 1.0) < 1e-5) {
        pairs.push_back(Pair{clusters[i].centroid, clusters[i].centroid,
                             clusters[i].multiplicity / 2});
        clusters.erase(clusters.begin() + i);
      } else {
        ++i;
      }
    }
    // Minimum-cost perfect matching into reflection pairs. True pairs have
    // |zeta conj(zeta') - 1| at rounding level while mismatches cost O(1),
    // so a generous acceptance cap suffices; a wrong matching could only
    // produce factors that fail the moment verification below.
    const auto pair_cost = [&](std::size_t i, std::size_t j) {
      if (clusters[i].multiplicity != clusters[j].multiplicity) {
        return std::numeric_limits<double>::infinity();
      }
      return std::abs(clusters[i].centroid * std::conj(clusters[j].centroid) - 1.0);
    };
    std::vector<std::pair<std::size_t, std::size_t>> matching;
    double worst_cost = 0.0;
    if (clusters.size() == 2) {
      matching = {{0, 1}};
      worst_cost = pair_cost(0, 1);
    } else if (clusters.size() == 4) {
      const std::array<std::array<std::size_t, 4>, 3> options = {
          {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
      worst_cost = std::numeric_limits<double>::infinity();
      for (const auto& opt : options) {
        const double cost = std::max(pair_cost(opt[0], opt[1]), pair_cost(opt[2], opt[3]));
        if (cost < worst_cost) {
          worst_cost = cost;
          matching = {{opt[0], opt[1]}, {opt[2], opt[3]}};
        }
      }
    } else if (!clusters.empty()) {
      worst_cost = std::numeric_limits<double>::infinity();  // odd leftover
    }
    if (worst_cost > 1e-4) {
      throw DomainError(ErrorCode::NotAMeasure,
                        "factor roots do not pair across the unit circle");
    }
    for (const auto& [i, j] : matching) {
      Pair pr{clusters[i].centroid, clusters[j].centroid, clusters[i].multiplicity};
      if (std::abs(pr.inner) > std::abs(pr.outer)) std::swap(pr.inner, pr.outer);
      pairs.push_back(pr);
    }
  }

  // Enumerate root choices: k outer picks per pair, inner-first so the first
  // admissible combination is the minimum-phase one.
  std::vector<std::vector<int>> outer_counts{{}};
  for (const Pair& pr : pairs) {
    std::vector<std::vector<int>> next;
    for (const std::vector<int>& prefix : outer_counts) {
      for (int k = 0; k <= pr.multiplicity; ++k) {
        std::vector<int> row = prefix;
        row.push_back(k);
        next.push_back(row);
      }
    }
    outer_counts = std::move(next);
  }
  std::stable_sort(outer_counts.begin(), outer_counts.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     int sa = 0, sb = 0;
                     for (int x : a) sa += x;
                     for (int x : b) sb += x;
                     return sa < sb;
                   });

  std::vector<std::vector<Complex>> combos;
  for (const std::vector<int>& choice : outer_counts) {
    std::vector<Complex> ws = forced;
    for (std::size_t g = 0; g < pairs.size(); ++g) {
      for (int k = 0; k < pairs[g].multiplicity - choice[g]; ++k) ws.push_back(pairs[g].inner);
      for (int k = 0; k < choice[g]; ++k) ws.push_back(pairs[g].outer);
    }
    combos.push_back(std::move(ws));
  }

  // Factors whose two roots share a center phase (q = z^2 - 2u z0 z + z0^2
  // with |z0| = 1 and u real) admit a closed-form solve: the center phase is
  // half the phase of c2 and u satisfies 4k u^2 - u + 2k = 0 with
  // k = Re(-conj(c1) z0) / 4. Near-quadruple root structures scramble the
  // quartic roots by ~eps^(1/4), so these exact root sets are appended as
  // extra combinations; elsewhere they simply fail the moment verification.
  if (quadratic_factor && std::abs(m.c1) > 1e-6) {
    for (int half : {0, 1}) {
      const Complex z0 = std::polar(1.0, 0.5 * std::arg(m.c2) + kPi * half);
      const double k = std::real(-std::conj(m.c1) * z0) / 4.0;
      const double disc = 1.0 - 32.0 * k * k;
      if (std::fabs(k) < 1e-8 || disc < 0.0) continue;
      for (double sign : {-1.0, 1.0}) {
        const double u = (1.0 + sign * std::sqrt(disc)) / (8.0 * k);
        if (std::fabs(u) <= 1.0) {
          const double w = std::acos(u);
          combos.push_back({z0 * std::polar(1.0, w), z0 * std::polar(1.0, -w)});
        } else if (std::fabs(u) < 1e8) {
          // Radial pair, reciprocal form to avoid cancellation in u - sqrt(u^2-1).
          const double x = (u > 0.0 ? 1.0 : -1.0) / (std::fabs(u) + std::sqrt(u * u - 1.0));
          combos.push_back({z0 * x, z0 / x});
        }
      }
    }
  }

  Factorization result;
  bool have_selected = false;
  bool saw_middle_zero = false;
  for (const std::vector<Complex>& ws : combos) {
    Complex a0, a1, a2;
    if (ws.size() == 2) {
      a2 = Complex(1.0);
      a1 = -(ws[0] + ws[1]);
      a0 = ws[0] * ws[1];
    } else if (ws.size() == 1) {
      a2 = Complex(0.0);
      a1 = Complex(1.0);
      a0 = -ws[0];
    } else {
      continue;
    }
    const std::optional<QCParams> read = detail::params_from_factor(a0, a1, a2);
    if (!read) {
      saw_middle_zero = true;
      continue;
    }
    const TrigMoments back = moments_from_params(*read);
    if (std::abs(back.c1 - m.c1) > 1e-8 || std::abs(back.c2 - m.c2) > 1e-8) continue;
    bool known = false;
    for (const QCParams& seen : result.candidates) {
      if (detail::same_params(seen, *read)) {
        known = true;
        break;
      }
    }
    if (!known) result.candidates.push_back(*read);
    if (!have_selected) {
      result.params = *read;
      result.factor = SpectralFactor{a0 / a1, Complex(1.0), a2 / a1};
      have_selected = true;
    }
  }

  if (!have_selected) {
    if (saw_middle_zero) {
      throw DomainError(ErrorCode::NotRepresentableAsQC,
                        "every admissible factor has a vanishing middle coefficient");
    }
    throw DomainError(ErrorCode::NotAMeasure, "no admissible factor reproduces the moments");
  }
  return result;
}

/// Parameter tuple recovered from moments (minimum-phase choice; see
/// factorize_moments for the two-fold ambiguity).
inline QCParams qc_from_moments(const TrigMoments& m) { return factorize_moments(m).params; }

/// Membership report extended with the factorization outcome.
inline MembershipReport analyze_moments(const TrigMoments& m) {
  MembershipReport report = membership(m);
  if (!report.in_class) return report;
  try {
    report.qc_params = factorize_moments(m).params;
    report.qc_representable = true;
  } catch (const DomainError&) {
    report.qc_representable = false;
  }
  return report;
}

/// Moments of the convolution: coefficientwise product. Both inputs must be
/// members of the degree-2 class; the class is closed under convolution.
inline TrigMoments convolve(const TrigMoments& a, const TrigMoments& b) {
  if (!membership(a).in_class || !membership(b).in_class) {
    throw DomainError(ErrorCode::NotAMeasure, "convolve requires member moment pairs");
  }
  return TrigMoments{a.c1 * b.c1, a.c2 * b.c2};
}

/// Moments of the mixture w a + (1-w) b.
inline TrigMoments mix(const TrigMoments& a, const TrigMoments& b, double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw DomainError(ErrorCode::InvalidWeight, "mixture weight must lie in [0, 1]");
  }
  if (!membership(a).in_class || !membership(b).in_class) {
    throw DomainError(ErrorCode::NotAMeasure, "mix requires member moment pairs");
  }
  return TrigMoments{w * a.c1 + (1.0 - w) * b.c1, w * a.c2 + (1.0 - w) * b.c2};
}

struct Projection {
  TrigMoments moments;
  double shrink = 1.0;  // t = 1 means the input was already feasible
};

/// Largest t in [0, 1] such that (t c1, t^2 c2) is a member, found by
/// bisection to 1e-12. Scaling the n-th moment by t^|n| is convolution with a
/// wrapped-Cauchy-type kernel, so feasibility is monotone in t and t = 0
/// (uniform) always works.
inline Projection project_to_feasible(const TrigMoments& m) {
  const auto feasible = [&](double t) {
    return membership(TrigMoments{t * m.c1, t * t * m.c2}).in_class;
  };
  if (feasible(1.0)) return Projection{m, 1.0};
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (feasible(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Projection{TrigMoments{lo * m.c1, lo * lo * m.c2}, lo};
}

}  // namespace qcirc
