#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "qcirc/core.hpp"
#include "qcirc/spectral.hpp"

namespace qcirc {

/// splitmix64 output function (Steele, Lea, Flood); used for seeding and for
/// deriving shard seeds.
inline std::uint64_t splitmix64_mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// xoshiro256++ (Blackman, Vigna). Pinned generator: identical seeds give
/// identical streams on every platform, which the sampling contract relies
/// on. State is seeded with four successive splitmix64 outputs.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (std::uint64_t& word : state_) {
      word = splitmix64_mix(sm);
      sm += 0x9E3779B97F4A7C15ULL;
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

/// Seed for shard `shard` of a logical stream:
/// splitmix64_mix(seed + shard * 0x9E3779B97F4A7C15). Parallel generation
/// draws shard k with Xoshiro256pp(shard_seed(seed, k)) and concatenates
/// batches in shard order, so the merged output is deterministic.
inline std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
  return splitmix64_mix(seed + shard * 0x9E3779B97F4A7C15ULL);
}

struct SampleBatch {
  std::vector<Angle> angles;
  std::uint64_t seed = 0;
  QCParams params;
  std::uint64_t proposals_used = 0;
};

/// Envelope constant for rejection from the uniform proposal:
/// 2*pi*f(theta) <= M = (1 + r1 + r2)^2 / (1 + r1^2 + r2^2) (all three
/// phasors of the modulus form aligned). The expected number of proposals
/// per accepted draw is M.
inline double envelope_constant(const QCParams& p) {
  const double s = 1.0 + p.r1 + p.r2;
  return s * s / (1.0 + p.r1 * p.r1 + p.r2 * p.r2);
}

/// n independent draws by rejection sampling, deterministic for a fixed
/// (params, n, seed) triple.
inline SampleBatch sample(const QCParams& p, std::size_t n, std::uint64_t seed) {
  if (n == 0) {
    throw DomainError(ErrorCode::InvalidCount, "sample count must be positive");
  }
  SampleBatch batch;
  batch.seed = seed;
  batch.params = p;
  batch.angles.reserve(n);
  Xoshiro256pp rng(seed);
  const double m = envelope_constant(p);
  while (batch.angles.size() < n) {
    const Angle theta(kTwoPi * rng.next_double());
    const double u = rng.next_double();
    ++batch.proposals_used;
    if (u * m <= kTwoPi * pdf(p, theta)) batch.angles.push_back(theta);
  }
  return batch;
}

/// Fraction of accepted proposals among exactly `proposals` attempts;
/// concentrates at 1 / envelope_constant.
inline double rejection_acceptance_rate(const QCParams& p, std::size_t proposals,
                                        std::uint64_t seed) {
  if (proposals == 0) {
    throw DomainError(ErrorCode::InvalidCount, "proposal count must be positive");
  }
  Xoshiro256pp rng(seed);
  const double m = envelope_constant(p);
  std::size_t accepted = 0;
  for (std::size_t k = 0; k < proposals; ++k) {
    const Angle theta(kTwoPi * rng.next_double());
    const double u = rng.next_double();
    if (u * m <= kTwoPi * pdf(p, theta)) ++accepted;
  }
  return double(accepted) / double(proposals);
}

/// Sample analogues of the trigonometric moments: c_n = mean of e^{in theta}.
inline TrigMoments empirical_moments(std::span<const Angle> angles) {
  if (angles.empty()) {
    throw DomainError(ErrorCode::EmptySample, "moments of an empty sample");
  }
  Complex s1(0.0, 0.0), s2(0.0, 0.0);
  for (const Angle& a : angles) {
    const Complex z = std::polar(1.0, a.radians());
    s1 += z;
    s2 += z * z;
  }
  const double n = double(angles.size());
  return TrigMoments{s1 / n, s2 / n};
}

struct FitResult {
  QCParams params;
  TrigMoments raw_moments;     // empirical moments before projection
  double shrink_factor = 1.0;  // t from project_to_feasible
  bool projected = false;      // shrink_factor < 1
  bool perturbed = false;      // the degenerate-factor retry was taken
};

/// Method-of-moments estimate: empirical moments, projected into the
/// feasible class, then inverted by spectral factorization. If the projected
/// moments land on the (non-representable) vanishing-middle-coefficient
/// branch, c1 is perturbed by 1e-9 toward the half-angle direction of c2 and
/// the pipeline is retried once, flagging the result.
inline FitResult fit(std::span<const Angle> angles) {
  if (angles.empty()) {
    throw DomainError(ErrorCode::EmptySample, "fit of an empty sample");
  }
  if (angles.size() < 5) {
    throw DomainError(ErrorCode::TooFewObservations, "fit needs at least 5 observations");
  }
  FitResult result;
  result.raw_moments = empirical_moments(angles);

  Projection projection = project_to_feasible(result.raw_moments);
  result.shrink_factor = projection.shrink;
  result.projected = projection.shrink < 1.0;
  try {
    result.params = qc_from_moments(projection.moments);
    return result;
  } catch (const DomainError& err) {
    if (err.code() != ErrorCode::NotRepresentableAsQC) throw;
  }

  TrigMoments nudged = result.raw_moments;
  nudged.c1 += 1e-9 * std::polar(1.0, 0.5 * std::arg(result.raw_moments.c2));
  projection = project_to_feasible(nudged);
  result.shrink_factor = projection.shrink;
  result.projected = projection.shrink < 1.0;
  result.perturbed = true;
  try {
    result.params = qc_from_moments(projection.moments);
  } catch (const DomainError&) {
    throw DomainError(ErrorCode::Unfittable, "degenerate moments resisted the perturbed retry");
  }
  return result;
}

}  // namespace qcirc
