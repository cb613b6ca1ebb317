#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qcirc/angle.hpp"

namespace qcirc {

using Complex = std::complex<double>;

namespace detail {

inline Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline Complex horner_derivative(const std::vector<Complex>& c, Complex z) {
  Complex acc(0.0, 0.0);
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + double(k) * c[k];
  return acc;
}

// Relative residual of a candidate root against the coefficient scale.
inline double root_residual(const std::vector<Complex>& c, Complex z) {
  double scale = 0.0;
  double zp = 1.0;
  const double az = std::abs(z);
  for (const Complex& ck : c) {
    scale += std::abs(ck) * zp;
    zp *= std::max(az, 1.0);
  }
  return std::abs(horner(c, z)) / std::max(scale, 1e-300);
}

inline void newton_polish(const std::vector<Complex>& c, Complex& z, int steps = 6) {
  for (int i = 0; i < steps; ++i) {
    const Complex d = horner_derivative(c, z);
    if (std::abs(d) < 1e-300) return;
    const Complex step = horner(c, z) / d;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return;
    z -= step;
    if (std::abs(step) <= 1e-15 * std::abs(z)) return;
  }
}

inline void solve_quadratic(Complex a, Complex b, Complex c, std::vector<Complex>& out) {
  // Citardauq-style split to avoid cancellation.
  Complex s = std::sqrt(b * b - 4.0 * a * c);
  if (std::real(std::conj(b) * s) < 0.0) s = -s;
  const Complex q = -0.5 * (b + s);
  if (std::abs(q) > 0.0) {
    out.push_back(q / a);
    out.push_back(c / q);
  } else {
    out.push_back(std::sqrt(c / a));
    out.push_back(-out.back());
  }
}

// One root of the monic depressed cubic t^3 + p t + q.
inline Complex cubic_one_root(Complex p, Complex q) {
  const Complex disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
  Complex u = -q / 2.0 + disc;
  if (std::abs(u) < std::abs(-q / 2.0 - disc)) u = -q / 2.0 - disc;
  if (std::abs(u) == 0.0) return Complex(0.0, 0.0);
  const Complex w = std::pow(u, 1.0 / 3.0);
  return w - p / (3.0 * w);
}

inline void solve_cubic(Complex a, Complex b, Complex c, Complex d, std::vector<Complex>& out) {
  const Complex p = c / a - b * b / (3.0 * a * a);
  const Complex q = 2.0 * b * b * b / (27.0 * a * a * a) - b * c / (3.0 * a * a) + d / a;
  const Complex shift = -b / (3.0 * a);
  const Complex t0 = cubic_one_root(p, q);
  out.push_back(t0 + shift);
  // Deflate to a quadratic in t: t^2 + t0 t + (t0^2 + p).
  std::vector<Complex> rest;
  solve_quadratic(Complex(1.0), t0, t0 * t0 + p, rest);
  for (Complex t : rest) out.push_back(t + shift);
}

// Ferrari's closed form for the monic depressed quartic y^4 + p y^2 + q y + r.
inline void solve_depressed_quartic(Complex p, Complex q, Complex r, std::vector<Complex>& out) {
  if (std::abs(q) < 1e-14 * (std::abs(p) + std::sqrt(std::abs(r)) + 1.0)) {
    // Biquadratic.
    std::vector<Complex> w;
    solve_quadratic(Complex(1.0), p, r, w);
    for (Complex wk : w) {
      const Complex s = std::sqrt(wk);
      out.push_back(s);
      out.push_back(-s);
    }
    return;
  }
  // Resolvent cubic 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2; any root with
  // 2m away from zero works, so take the largest.
  std::vector<Complex> ms;
  solve_cubic(Complex(8.0), 8.0 * p, 2.0 * p * p - 8.0 * r, -q * q, ms);
  Complex m = ms[0];
  for (Complex mk : ms) {
    if (std::abs(mk) > std::abs(m)) m = mk;
  }
  const Complex s = std::sqrt(2.0 * m);
  const Complex t = q / (2.0 * s);
  solve_quadratic(Complex(1.0), -s, p / 2.0 + m + t, out);
  solve_quadratic(Complex(1.0), s, p / 2.0 + m - t, out);
}

struct RootCluster {
  Complex centroid;
  int multiplicity = 1;
};

// Greedy clustering of computed roots. A root of multiplicity m is resolved
// by the solver only to ~eps^(1/m), but the perturbations nearly cancel, so
// the cluster centroid is far more accurate; it is then polished as a simple
// root of the (m-1)-th derivative.
inline std::vector<RootCluster> cluster_roots(const std::vector<Complex>& coeffs,
                                              const std::vector<Complex>& roots,
                                              double tol = 1e-5) {
  std::vector<RootCluster> clusters;
  std::vector<char> used(roots.size(), 0);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Complex sum = roots[i];
    int count = 1;
    used[i] = 1;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!used[j] && std::abs(roots[j] - roots[i]) < tol) {
        sum += roots[j];
        ++count;
        used[j] = 1;
      }
    }
    RootCluster cl{sum / double(count), count};
    if (count > 1) {
      std::vector<Complex> d = coeffs;
      for (int k = 1; k < count; ++k) {
        std::vector<Complex> next(d.size() - 1);
        for (std::size_t t = 1; t < d.size(); ++t) next[t - 1] = double(t) * d[t];
        d = std::move(next);
      }
      newton_polish(d, cl.centroid, 4);
    }
    clusters.push_back(cl);
  }
  return clusters;
}

// Eigenvalues of the companion matrix; robust fallback for coefficient sets
// where the closed form degrades.
inline std::vector<Complex> companion_roots(const std::vector<Complex>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) m(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  std::vector<Complex> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = solver.eigenvalues()[i];
  return roots;
}

}  // namespace detail

/// Roots of a complex polynomial of degree <= 4, coefficients in ascending
/// order. Degree 3 and 4 use the closed forms (Cardano, Ferrari); roots are
/// Newton-polished and a companion-matrix eigenvalue solve backs up the
/// closed form when its residuals are poor. Leading coefficients that are
/// negligible against the coefficient scale are dropped (the corresponding
/// roots escape to infinity).
inline std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs) {
  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-14 * scale) coeffs.pop_back();
  const int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree <= 0) return {};

  // Small (but not negligible) leading coefficients send roots far out and
  // poison the closed forms, which divide through by them. Split by
  // magnitude instead: a quartic with a4, a3 both small against a2 has two
  // near roots governed by a2 z^2 + a1 z + a0 and two far ones governed by
  // a4 z^2 + a3 z + a2; with only a4 small, the single far root comes from
  // the root sum (Vieta) over the trimmed cubic. Everything is then
  // Newton-polished on the full polynomial.
  std::vector<Complex> roots;
  roots.reserve(degree);
  if (degree == 4 && std::abs(coeffs[4]) < 1e-3 * scale && std::abs(coeffs[3]) < 1e-3 * scale &&
      std::abs(coeffs[2]) >= 1e-3 * scale) {
    detail::solve_quadratic(coeffs[2], coeffs[1], coeffs[0], roots);
    detail::solve_quadratic(coeffs[4], coeffs[3], coeffs[2], roots);
  } else if (degree >= 3 && std::abs(coeffs.back()) < 1e-3 * scale) {
    std::vector<Complex> trimmed(coeffs.begin(), coeffs.end() - 1);
    roots = polynomial_roots(trimmed);
    if (static_cast<int>(roots.size()) == degree - 1) {
      Complex far = -coeffs[degree - 1] / coeffs[degree];
      for (const Complex& z : roots) far -= z;
      roots.push_back(far);
    } else {
      roots.clear();
      roots = detail::companion_roots(coeffs);
    }
  } else if (degree == 1) {
    roots.push_back(-coeffs[0] / coeffs[1]);
  } else if (degree == 2) {
    detail::solve_quadratic(coeffs[2], coeffs[1], coeffs[0], roots);
  } else if (degree == 3) {
    detail::solve_cubic(coeffs[3], coeffs[2], coeffs[1], coeffs[0], roots);
  } else {
    const Complex b = coeffs[3] / coeffs[4];
    const Complex c = coeffs[2] / coeffs[4];
    const Complex d = coeffs[1] / coeffs[4];
    const Complex e = coeffs[0] / coeffs[4];
    const Complex p = c - 3.0 * b * b / 8.0;
    const Complex q = d - b * c / 2.0 + b * b * b / 8.0;
    const Complex r = e - b * d / 4.0 + b * b * c / 16.0 - 3.0 * b * b * b * b / 256.0;
    detail::solve_depressed_quartic(p, q, r, roots);
    for (Complex& z : roots) z -= b / 4.0;
  }

  for (Complex& z : roots) detail::newton_polish(coeffs, z);

  // Residuals catch garbage roots; coincident roots with a non-vanishing
  // derivative mean two polishes collapsed onto one simple root and another
  // root was lost.
  const auto derivative_small = [&](const Complex& z) {
    double dscale = 0.0;
    double zp = 1.0;
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
      dscale += double(k) * std::abs(coeffs[k]) * zp;
      zp *= std::max(std::abs(z), 1.0);
    }
    return std::abs(detail::horner_derivative(coeffs, z)) <= 1e-6 * dscale;
  };
  bool bad = false;
  for (std::size_t i = 0; i < roots.size() && !bad; ++i) {
    const Complex& z = roots[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) ||
        detail::root_residual(coeffs, z) > 1e-10) {
      bad = true;
      break;
    }
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) <= 1e-7 * std::max(1.0, std::abs(roots[i])) &&
          !derivative_small(roots[i])) {
        bad = true;
        break;
      }
    }
  }
  if (bad && degree >= 2) {
    roots = detail::companion_roots(coeffs);
    for (Complex& z : roots) detail::newton_polish(coeffs, z);
  }
  return roots;
}

/// Zeros in [0, 2*pi) of the real trigonometric polynomial
/// F(theta) = Im(b1 e^{i theta} + b2 e^{2i theta}).
///
/// Multiplying by 2i e^{2i theta} turns F = 0 into the quartic
/// b2 z^4 + b1 z^3 - conj(b1) z - conj(b2) = 0 on |z| = 1, whose roots come
/// in reflection pairs (zeta, 1/conj(zeta)). A root of multiplicity m is
/// resolved by a polynomial solver only to ~eps^(1/m) (up to m = 3 here), so
/// candidates are clustered, admitted from a generous band around the circle,
/// Newton-polished on F itself, and kept only when the polished residual
/// vanishes; spurious candidates from near-circle reflection pairs polish
/// into genuine zeros and are removed by the final 1e-9 deduplication. Zeros
/// closer than the cluster width (5e-5) may merge into one reported angle;
/// at that separation the polynomial is flat to ~1e-18 between them.
inline std::vector<double> unit_circle_trig_zeros(Complex b1, Complex b2) {
  const double scale = std::abs(b1) + std::abs(b2);
  std::vector<double> angles;
  if (scale == 0.0) return angles;  // F identically zero; caller decides

  const auto f = [&](double t) {
    return std::imag(b1 * std::polar(1.0, t) + b2 * std::polar(1.0, 2.0 * t));
  };
  const auto fp = [&](double t) {
    return std::real(b1 * std::polar(1.0, t)) + 2.0 * std::real(b2 * std::polar(1.0, 2.0 * t));
  };

  if (std::abs(b2) < 1e-14 * scale) {
    // Single-harmonic case: Im(b1 e^{i theta}) = 0.
    const double base = Angle(-std::arg(b1)).radians();
    angles.push_back(base);
    angles.push_back(Angle(base + kPi).radians());
  } else {
    std::vector<Complex> coeffs = {-std::conj(b2), -std::conj(b1), Complex(0.0), b1, b2};
    const std::vector<Complex> roots = polynomial_roots(coeffs);
    std::vector<double> candidates;
    for (const detail::RootCluster& cl : detail::cluster_roots(coeffs, roots, 5e-5)) {
      if (std::fabs(std::abs(cl.centroid) - 1.0) < 1e-4) {
        candidates.push_back(Angle(std::arg(cl.centroid)).radians());
      }
    }
    for (double t : candidates) {
      for (int k = 0; k < 5; ++k) {
        const double d = fp(t);
        if (std::fabs(d) < 1e-12 * scale) break;
        t -= f(t) / d;
      }
      if (std::fabs(f(t)) <= 1e-10 * scale) angles.push_back(Angle(t).radians());
    }
  }

  std::sort(angles.begin(), angles.end());
  std::vector<double> unique;
  for (double t : angles) {
    if (unique.empty() || std::min(t - unique.back(), kTwoPi - (t - unique.back())) > 1e-9) {
      unique.push_back(t);
    }
  }
  while (unique.size() > 1 &&
         std::min(unique.back() - unique.front(), kTwoPi - (unique.back() - unique.front())) <= 1e-9) {
    unique.pop_back();
  }
  return unique;
}

}  // namespace qcirc
