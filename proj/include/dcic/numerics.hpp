#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dcic/error.hpp"

// Deterministic numeric kernels. Everything here is pure: same inputs, same
// bits, regardless of thread count or call order. The PRNG is a fixed bit
// mixer rather than <random> so that streams are reproducible across standard
// library implementations.

namespace dcic {

// ---------------------------------------------------------------------------
// PRNG: splitmix64 stream. Passes standard statistical batteries, one 64-bit
// word of state, trivially splittable (derive a child seed by hashing).
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stateless hash of (seed, index): used to give each bootstrap replicate and
// each simulated unit its own stream, independent of evaluation order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  return splitmix64_next(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform on the open interval (0,1): 53 random bits, offset by half an ulp
  // so 0 and 1 are unreachable and downstream inverse-CDF maps stay finite.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform index in [0, n). Lemire's multiply-shift with rejection: unbiased
  // and avoids the modulo bias of next_u64() % n.
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Regularized incomplete beta I_x(a,b) via the Lentz continued fraction, with
// the usual symmetry switch for convergence. Relative accuracy ~1e-14.
// ---------------------------------------------------------------------------

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace detail {

inline double incbeta_cf(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-15;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
    d = 1.0 + num * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + num / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

inline double incbeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    fail(ErrorCode::ConfigError, "beta shape parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * detail::incbeta_cf(a, b, x) / a;
  }
  return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                   detail::incbeta_cf(b, a, 1.0 - x) / b;
}

// Inverse of I_x(a,b): Newton iterations clamped by a shrinking bisection
// bracket, so convergence is guaranteed even where the density vanishes.
inline double incbeta_inv(double a, double b, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorCode::InvalidProbability,
         "beta inverse expects a probability in [0,1], got " + std::to_string(p));
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double lb = log_beta(a, b);
  double lo = 0.0, hi = 1.0;
  double x = a / (a + b);
  for (int it = 0; it < 200; ++it) {
    const double f = incbeta(a, b, x) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double log_pdf =
        (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - lb;
    double next = x - f * std::exp(-log_pdf);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-16 + 1e-14 * x) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Standard normal CDF and quantile. The quantile is Wichura's PPND16 rational
// approximation (absolute error below 1e-15 over the full open interval).
// ---------------------------------------------------------------------------

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0x1.6a09e667f3bcdp-1); }

inline double norm_ppf(double p) {
  if (!(p > 0.0 && p < 1.0))
    fail(ErrorCode::InvalidProbability,
         "normal quantile expects a probability in (0,1), got " + std::to_string(p));
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature on [0,1]. Nodes found by Newton iteration on the
// Legendre recurrence; the 512-point rule used by the oracle is cached.
// ---------------------------------------------------------------------------

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline Quadrature gauss_legendre_01(int n) {
  if (n < 2) fail(ErrorCode::ConfigError, "quadrature order must be at least 2");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const int half = (n + 1) / 2;
  constexpr double pi = 3.141592653589793238462643383279502884;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] -> [0,1]; fill symmetric pair.
    q.nodes[i] = 0.5 * (1.0 - x);
    q.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    q.weights[i] = 0.5 * w;
    q.weights[n - 1 - i] = 0.5 * w;
  }
  return q;
}

inline const Quadrature& gauss_legendre_512() {
  static const Quadrature q = gauss_legendre_01(512);
  return q;
}

}  // namespace dcic
