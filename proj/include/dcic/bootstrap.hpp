#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "dcic/dataset.hpp"
#include "dcic/estimators.hpp"
#include "dcic/numerics.hpp"

namespace dcic {

// Stratified nonparametric bootstrap. Each replicate resamples every
// (period, level) cell with replacement at its own size, so cell membership
// and group shares are fixed and every replicate is estimable whenever the
// original request is. Replicate r draws from a stream seeded by (seed, r)
// and results are reduced by replicate index, which makes the output
// byte-identical across thread counts.

struct BootstrapConfig {
  std::size_t replicates = 999;
  double level = 0.95;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct BootstrapSummary {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> replicate_values;
};

namespace detail {

inline void validate(const BootstrapConfig& cfg) {
  if (cfg.replicates < 1)
    fail(ErrorCode::ConfigError, "bootstrap needs at least one replicate");
  if (!(cfg.level > 0.0 && cfg.level < 1.0))
    fail(ErrorCode::ConfigError, "confidence level must lie in (0,1), got " +
                                     std::to_string(cfg.level));
  if (cfg.threads < 1)
    fail(ErrorCode::ConfigError, "thread count must be at least 1");
}

inline PanelDataset resample(const PanelDataset& ds, Rng& rng) {
  const std::size_t m = ds.levels().count();
  std::vector<std::vector<double>> cells(2 * m);
  for (int t = 0; t <= 1; ++t) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& source = ds.cell_at(t, j).values();
      auto& target = cells[static_cast<std::size_t>(t) * m + j];
      target.resize(source.size());
      for (double& v : target) v = source[rng.below(source.size())];
    }
  }
  return PanelDataset::from_cells(ds.levels(), std::move(cells));
}

}  // namespace detail

// Runs all requests against the same replicate datasets. Estimator errors are
// surfaced by evaluating on the original data first; replicates cannot then
// fail (scope depends only on the request and the level set, and cell sizes
// are preserved).
inline std::vector<BootstrapSummary> bootstrap_many(
    const PanelDataset& ds, const std::vector<EffectRequest>& requests,
    const BootstrapConfig& cfg) {
  detail::validate(cfg);
  {
    Evaluator probe(ds);
    for (const auto& req : requests) probe.effect(req);
  }

  const std::size_t b = cfg.replicates;
  std::vector<std::vector<double>> values(requests.size(), std::vector<double>(b));

  auto run_range = [&](std::size_t first, std::size_t last) {
    for (std::size_t r = first; r < last; ++r) {
      Rng rng(mix_seed(cfg.seed, r));
      const PanelDataset replicate = detail::resample(ds, rng);
      Evaluator ev(replicate);
      for (std::size_t q = 0; q < requests.size(); ++q)
        values[q][r] = ev.effect(requests[q]).value;
    }
  };

  const std::size_t threads = std::min<std::size_t>(cfg.threads, b);
  if (threads <= 1) {
    run_range(0, b);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t k = 0; k < threads; ++k) {
      const std::size_t first = k * b / threads;
      const std::size_t last = (k + 1) * b / threads;
      pool.emplace_back([&, k, first, last] {
        try {
          run_range(first, last);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const double alpha = 1.0 - cfg.level;
  std::vector<BootstrapSummary> out;
  out.reserve(requests.size());
  for (auto& replicate_values : values) {
    BootstrapSummary summary;
    const SortedSample sorted = SortedSample::build(replicate_values);
    summary.lower = sorted.quantile(alpha / 2.0);
    summary.upper = sorted.quantile(1.0 - alpha / 2.0);
    summary.replicate_values = std::move(replicate_values);
    out.push_back(std::move(summary));
  }
  return out;
}

inline BootstrapSummary bootstrap_ci(const PanelDataset& ds, const EffectRequest& request,
                                     const BootstrapConfig& cfg) {
  return std::move(bootstrap_many(ds, {request}, cfg).front());
}

// Point estimate plus percentile interval, ready for reporting.
inline EffectEstimate estimate_with_ci(const PanelDataset& ds, const EffectRequest& request,
                                       const BootstrapConfig& cfg) {
  EffectEstimate est = estimate(ds, request);
  const BootstrapSummary summary = bootstrap_ci(ds, request, cfg);
  ConfidenceInterval ci;
  ci.lower = summary.lower;
  ci.upper = summary.upper;
  ci.level = cfg.level;
  ci.replicates = cfg.replicates;
  est.ci = ci;
  return est;
}

}  // namespace dcic
