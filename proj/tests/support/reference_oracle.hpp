#pragma once

// Independent reference oracle for simulated DGPs, used only by tests. It
// shares no numeric machinery with the library: Beta probabilities come from
// adaptive Simpson integration of the density, quantiles from bisection, and
// the normal quantile (for the gauss map) from bisection on erfc. Shape
// parameters must be >= 1 so the density stays bounded.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace refo {

inline double simpson_step(const std::function<double(double)>& f, double lo, double hi,
                           double flo, double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                               double flo, double fmid, double fhi, double whole,
                               double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lmid = 0.5 * (lo + mid);
  const double rmid = 0.5 * (mid + hi);
  const double flmid = f(lmid);
  const double frmid = f(rmid);
  const double left = simpson_step(f, lo, mid, flo, flmid, fmid);
  const double right = simpson_step(f, mid, hi, fmid, frmid, fhi);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, lo, mid, flo, flmid, fmid, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, mid, hi, fmid, frmid, fhi, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-12) {
  if (hi <= lo) return 0.0;
  const double flo = f(lo);
  const double fhi = f(hi);
  const double fmid = f(0.5 * (lo + hi));
  const double whole = simpson_step(f, lo, hi, flo, fmid, fhi);
  return adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, tol, 40);
}

struct BetaLaw {
  double alpha = 1.0;
  double beta = 1.0;

  double density_unnormalized(double u) const {
    if (u <= 0.0 || u >= 1.0)
      return (alpha == 1.0 && u == 0.0) || (beta == 1.0 && u == 1.0) ? 1.0 : 0.0;
    return std::pow(u, alpha - 1.0) * std::pow(1.0 - u, beta - 1.0);
  }

  double normalization() const {
    return integrate([this](double u) { return density_unnormalized(u); }, 0.0, 1.0);
  }

  double cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double z = normalization();
    return integrate([this](double u) { return density_unnormalized(u); }, 0.0, x) / z;
  }

  double inv(double p) const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p outside (0,1)");
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) >= p ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // E[g(V)] by integrating g against the density, no inverse needed.
  double expect(const std::function<double(double)>& g) const {
    const double z = normalization();
    return integrate([&](double u) { return g(u) * density_unnormalized(u); }, 0.0, 1.0) /
           z;
  }
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double normal_inv(double p) {
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) >= p ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Map {
  enum class Kind { affine, exp_affine, power, gauss };
  Kind kind = Kind::affine;
  double a = 1.0;
  double b = 0.0;

  double operator()(double u) const {
    switch (kind) {
      case Kind::affine: return a * u + b;
      case Kind::exp_affine: return std::exp(a * u + b);
      case Kind::power: return std::pow(u, a);
      case Kind::gauss: return b + a * normal_inv(u);
    }
    return u;
  }

  double inverse(double y) const {
    switch (kind) {
      case Kind::affine: return (y - b) / a;
      case Kind::exp_affine: return y <= 0.0 ? -1.0 : (std::log(y) - b) / a;
      case Kind::power: return y <= 0.0 ? -1.0 : std::pow(y, 1.0 / a);
      case Kind::gauss: return normal_cdf((y - b) / a);
    }
    return y;
  }
};

// A DGP mirror: group probabilities, one Beta rank law per group (optionally
// a different one in period 1), and structural maps per (period, arm).
struct Dgp {
  std::vector<double> probs;
  std::vector<BetaLaw> laws;
  std::vector<BetaLaw> laws_period1;  // empty means same as laws
  std::vector<std::vector<Map>> maps;  // maps[t][arm]

  const BetaLaw& law(int t, std::size_t g) const {
    if (t == 1 && !laws_period1.empty()) return laws_period1[g];
    return laws[g];
  }

  double cdf_cond(int t, std::size_t arm, std::size_t group, double y) const {
    return law(t, group).cdf(maps[t][arm].inverse(y));
  }

  double cdf_uncond(int t, std::size_t arm, double y) const {
    double total = 0.0;
    for (std::size_t g = 0; g < probs.size(); ++g)
      total += probs[g] * cdf_cond(t, arm, g, y);
    return total;
  }

  double quantile_cond(int t, std::size_t arm, std::size_t group, double tau) const {
    return maps[t][arm](law(t, group).inv(tau));
  }

  double quantile_uncond(int t, std::size_t arm, double tau) const {
    // Bisect the rank mixture, then push through the arm's map.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      double mix = 0.0;
      for (std::size_t g = 0; g < probs.size(); ++g) mix += probs[g] * law(t, g).cdf(mid);
      (mix >= tau ? hi : lo) = mid;
    }
    return maps[t][arm](0.5 * (lo + hi));
  }

  double mean_cond(int t, std::size_t arm, std::size_t group) const {
    const Map& map = maps[t][arm];
    return law(t, group).expect([&](double u) { return map(u); });
  }

  double mean_uncond(int t, std::size_t arm) const {
    double total = 0.0;
    for (std::size_t g = 0; g < probs.size(); ++g)
      total += probs[g] * mean_cond(t, arm, g);
    return total;
  }

  double qte(double tau, std::size_t d, std::size_t d_prime) const {
    return quantile_uncond(1, d, tau) - quantile_uncond(1, d_prime, tau);
  }

  double ate(std::size_t d, std::size_t d_prime) const {
    return mean_uncond(1, d) - mean_uncond(1, d_prime);
  }

  double qtt(double tau, std::size_t d, std::size_t d_prime, std::size_t cond) const {
    return quantile_cond(1, d, cond, tau) - quantile_cond(1, d_prime, cond, tau);
  }

  double att(std::size_t d, std::size_t d_prime, std::size_t cond) const {
    return mean_cond(1, d, cond) - mean_cond(1, d_prime, cond);
  }

  double did_att(std::size_t d) const {
    const double treated_trend = mean_cond(1, d, d) - mean_cond(0, 0, d);
    const double control_trend = mean_cond(1, 0, 0) - mean_cond(0, 0, 0);
    return treated_trend - control_trend;
  }
};

}  // namespace refo
