// Copyright 2026 The priorlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIORLAB_NUMERICS_HPP_
#define PRIORLAB_NUMERICS_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace priorlab::numerics {

/// Seed for the repo-wide RNG. Identical seeds give bit-identical streams.
struct Seed {
  std::uint64_t value = 0;
};

/// Combined absolute/relative tolerance. At least one must be positive.
struct Tolerance {
  double abs = 0.0;
  double rel = 0.0;

  void validate() const {
    if (!(abs >= 0.0) || !(rel >= 0.0) || (abs == 0.0 && rel == 0.0)) {
      throw std::domain_error("Tolerance: need abs >= 0, rel >= 0, one positive");
    }
  }

  bool accepts(double expected, double actual) const {
    return std::fabs(actual - expected) <= abs + rel * std::fabs(expected);
  }
};

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// ln(1+x), accurate for |x| << 1. Domain: x > -1.
inline double log1p_stable(double x) {
  if (!(x > -1.0)) {
    throw std::domain_error("log1p_stable: x must be > -1, got " + std::to_string(x));
  }
  return std::log1p(x);
}

/// ln Gamma(x) for x > 0 via the 14-coefficient Lanczos expansion.
/// Relative accuracy is around 1e-15 over the whole positive axis.
inline double ln_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("ln_gamma: x must be > 0, got " + std::to_string(x));
  }
  static const double cof[14] = {
      57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
      -0.491913816097620199,   0.339946499848118887e-4, 0.465236289270485756e-4,
      -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
      0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
      -0.261908384015814087e-4, 0.368991826595316234e-5};
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (int j = 0; j < 14; ++j) ser += cof[j] / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

/// ln B(a,b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b), for a, b > 0.
inline double ln_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("ln_beta: arguments must be positive");
  }
  return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

namespace detail {

// Lower regularized incomplete gamma by power series, for x < a+1.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 1000; ++n) {
    ++ap;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * std::numeric_limits<double>::epsilon()) break;
  }
  return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Upper regularized incomplete gamma by Lentz continued fraction, for x >= a+1.
inline double gamma_q_contfrac(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double fpmin = std::numeric_limits<double>::min() / eps;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) <= eps) break;
  }
  return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a,x), a > 0, x >= 0.
/// Series for x < a+1, continued fraction otherwise.
inline double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? detail::gamma_p_series(a, x) : 1.0 - detail::gamma_q_contfrac(a, x);
}

/// P(chi^2_k <= x) for x >= 0 and integer k >= 1.
inline double chisq_cdf(double x, int k) {
  if (k < 1) throw std::domain_error("chisq_cdf: k must be >= 1");
  if (!(x >= 0.0)) {
    throw std::domain_error("chisq_cdf: x must be >= 0, got " + std::to_string(x));
  }
  return gamma_p(0.5 * k, 0.5 * x);
}

/// Inverse of chisq_cdf in its first argument, for p in (0,1).
/// Bisection on chisq_cdf; bracket [0, k + 40*sqrt(k) + 100], width 1e-12.
inline double chisq_quantile(double p, int k) {
  if (k < 1) throw std::domain_error("chisq_quantile: k must be >= 1");
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("chisq_quantile: p must be in (0,1), got " + std::to_string(p));
  }
  double lo = 0.0;
  double hi = k + 40.0 * std::sqrt(static_cast<double>(k)) + 100.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (chisq_cdf(mid, k) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Seeded random generation
// ---------------------------------------------------------------------------

namespace detail {

// splitmix64 finalizer; also used to derive unrelated stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl64(std::uint64_t x, int r) {
  return (x << r) | (x >> (64 - r));
}

}  // namespace detail

/// xoshiro256** stream (Blackman & Vigna). One owner per stream; parallel
/// work derives independent streams from (Seed, replicate index) instead of
/// sharing state across threads.
class RngStream {
 public:
  explicit RngStream(Seed seed) : RngStream(seed, 0) {}

  RngStream(Seed seed, std::uint64_t stream) {
    // Avalanche the stream index before combining so (seed, r) pairs map to
    // well-separated splitmix sequences.
    std::uint64_t x = seed.value ^ detail::mix64(stream + 0x633D5D8FA4A6A9D1ull);
    for (auto& s : state_) s = detail::mix64(x++);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  static RngStream derive(Seed seed, std::uint64_t replicate) {
    return RngStream(seed, replicate);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl64(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl64(state_[3], 45);
    return result;
  }

  /// Uniform double in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Unbiased uniform integer in [0, bound), bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::domain_error("uniform_below: bound must be >= 1");
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Exact normal variate by the Marsaglia polar method (the second variate
  /// of each accepted pair is discarded). sd == 0 returns mean and consumes
  /// no randomness.
  double normal(double mean, double sd) {
    if (!(sd >= 0.0)) throw std::domain_error("normal: sd must be >= 0");
    if (sd == 0.0) return mean;
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    return mean + sd * u * std::sqrt(-2.0 * std::log(s) / s);
  }

  /// Bernoulli(p) draw as {0,1}; always consumes exactly one uniform.
  int bernoulli(double p) {
    if (!(p >= 0.0) || !(p <= 1.0)) {
      throw std::domain_error("bernoulli: p must be in [0,1], got " + std::to_string(p));
    }
    return next_double() < p ? 1 : 0;
  }

  /// Gamma(shape, 1) by Marsaglia-Tsang, exact for all shape > 0.
  double gamma(double shape) {
    if (!(shape > 0.0)) throw std::domain_error("gamma: shape must be > 0");
    if (shape < 1.0) {
      // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
      const double g = gamma(shape + 1.0);
      const double u = next_double();
      return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal(0.0, 1.0);
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_double();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Beta(a,b) from two gamma draws.
  double beta(double a, double b) {
    for (;;) {
      const double x = gamma(a);
      const double y = gamma(b);
      if (x + y > 0.0) return x / (x + y);
    }
  }

 private:
  std::array<std::uint64_t, 4> state_;
};

}  // namespace priorlab::numerics

#endif  // PRIORLAB_NUMERICS_HPP_
