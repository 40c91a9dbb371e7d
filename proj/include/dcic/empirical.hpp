#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dcic/error.hpp"

namespace dcic {

// Exact step-function empirical distributions. Conventions, pinned once here
// and relied on everywhere else:
//
//   F(y)   = #{x in sample : x <= y} / n            (right-continuous)
//   Q(tau) = inf{x in sample : F(x) >= tau}         (left-continuous inverse)
//   Q(0)   = sample minimum                          (keeps compositions total)
//
// Q is evaluated by binary search on the index k with the predicate
// double(k)/double(n) >= tau, i.e. with the *same* floating-point division
// that F uses. That makes the Galois pair F(Q(tau)) >= tau and Q(F(y)) <= y
// hold exactly in floating point, not just in real arithmetic.

class SortedSample {
 public:
  // Sorts and validates. Input order is irrelevant; ties are kept.
  static SortedSample build(std::vector<double> values) {
    if (values.empty()) fail(ErrorCode::EmptyCell, "sample has no observations");
    for (double v : values) {
      if (!std::isfinite(v))
        fail(ErrorCode::InvalidValue,
             "sample contains a non-finite value (" + std::to_string(v) + ")");
    }
    std::sort(values.begin(), values.end());
    return SortedSample(std::move(values));
  }

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }

  // #{x : x <= y}
  std::size_t count_leq(double y) const {
    return static_cast<std::size_t>(
        std::upper_bound(values_.begin(), values_.end(), y) - values_.begin());
  }

  double cdf(double y) const {
    return static_cast<double>(count_leq(y)) / static_cast<double>(size());
  }

  // Smallest 1-based index k with k/n >= tau, for tau in (0, 1].
  std::size_t quantile_index(double tau) const {
    const double n = static_cast<double>(size());
    std::size_t lo = 1, hi = size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (static_cast<double>(mid) / n >= tau) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

  double quantile(double tau) const {
    if (!(tau >= 0.0 && tau <= 1.0))
      fail(ErrorCode::InvalidProbability,
           "quantile level must lie in [0,1], got " + std::to_string(tau));
    if (tau == 0.0) return min();
    return values_[quantile_index(tau) - 1];
  }

  // Arithmetic mean; equal to the integral of the step quantile function.
  // Summed in sorted order so that mean(s) == (1/n) * sum_i Q(i/n) bit-exactly.
  double mean() const {
    double total = 0.0;
    for (double v : values_) total += v;
    return total / static_cast<double>(size());
  }

 private:
  explicit SortedSample(std::vector<double> sorted) : values_(std::move(sorted)) {}

  std::vector<double> values_;
};

inline SortedSample build_sorted(std::vector<double> values) {
  return SortedSample::build(std::move(values));
}

// Thin non-owning views naming the two roles a sample plays in a composition.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(const SortedSample& base) : base_(&base) {}
  double operator()(double y) const { return base_->cdf(y); }
  const SortedSample& base() const { return *base_; }

 private:
  const SortedSample* base_;
};

class QuantileFunction {
 public:
  explicit QuantileFunction(const SortedSample& base) : base_(&base) {}
  double operator()(double tau) const { return base_->quantile(tau); }
  const SortedSample& base() const { return *base_; }

 private:
  const SortedSample* base_;
};

// Q_to(F_from(y)): carries a value's rank in one distribution onto another.
// A rank of zero (y below the source support) resolves to the target minimum.
inline double rank_map(double y, const EmpiricalCdf& from, const QuantileFunction& to) {
  return to(from(y));
}

inline double mean(const SortedSample& s) { return s.mean(); }

}  // namespace dcic
