#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcic/dataset.hpp"
#include "dcic/empirical.hpp"
#include "dcic/error.hpp"

namespace dcic {

// ---------------------------------------------------------------------------
// Counterfactual distributions. Every identification formula here is one
// instance of the same kernel: map each value y of a base cell C through
// T(y) = Q_B(F_A(y)) and keep the transformed sample as the canonical
// representation. Quantiles and means are then exact empirical functionals
// of that sample.
// ---------------------------------------------------------------------------

struct CellRef {
  int period = 0;
  std::string level;  // "<pooled>" for the pooled period-0 sample
  std::size_t n = 0;
};

struct Composition {
  std::string kind;     // weak_conditional | strong_unconditional | strong_conditional
  std::string arm;      // the potential-outcome level d
  std::string group;    // conditioning group d' (empty when unconditional)
  CellRef cdf_cell;      // A: supplies F
  CellRef quantile_cell; // B: supplies Q
  CellRef base_cell;     // C: the sample being transported
};

class CounterfactualDistribution {
 public:
  static CounterfactualDistribution build(const SortedSample& cdf_source,
                                          const SortedSample& quantile_target,
                                          const SortedSample& base, Composition meta) {
    CounterfactualDistribution out;
    out.meta_ = std::move(meta);
    out.q_values_ = quantile_target.values();

    std::vector<double> transformed;
    transformed.reserve(base.size());
    out.base_ranks_.reserve(base.size());
    const auto na = static_cast<double>(cdf_source.size());
    for (double y : base.values()) {
      const std::size_t c = cdf_source.count_leq(y);
      const double tau = static_cast<double>(c) / na;
      out.base_ranks_.push_back(tau);
      if (c == 0) {
        // Below the CDF source's support: tau=0 resolves to the target
        // minimum. Counted as support-condition stress.
        ++out.out_of_range_;
        transformed.push_back(quantile_target.min());
      } else {
        transformed.push_back(
            quantile_target.values()[quantile_target.quantile_index(tau) - 1]);
      }
    }
    std::sort(out.base_ranks_.begin(), out.base_ranks_.end());
    out.transformed_.emplace(SortedSample::build(std::move(transformed)));
    return out;
  }

  const SortedSample& transformed() const { return *transformed_; }
  const Composition& composition() const { return meta_; }
  std::size_t out_of_range_count() const { return out_of_range_; }

  double quantile(double tau) const { return transformed_->quantile(tau); }
  double mean() const { return transformed_->mean(); }
  double cdf(double y) const { return transformed_->cdf(y); }

  // Direct evaluation of F_C(Q_A(F_B(y))) without the transformed sample,
  // using the generalized-inverse duality Q_B(tau) <= y iff tau <= F_B(y)
  // (and tau=0 resolving to the target minimum). The duality form is exact
  // at every y including ties and rank coincidences, where composing the
  // three step functions naively loses the boundary cases.
  double composition_cdf(double y) const {
    const auto q = static_cast<std::size_t>(
        std::upper_bound(q_values_.begin(), q_values_.end(), y) - q_values_.begin());
    if (q == 0) return 0.0;
    const double tau = static_cast<double>(q) / static_cast<double>(q_values_.size());
    const auto count = static_cast<std::size_t>(
        std::upper_bound(base_ranks_.begin(), base_ranks_.end(), tau) -
        base_ranks_.begin());
    return static_cast<double>(count) / static_cast<double>(base_ranks_.size());
  }

 private:
  CounterfactualDistribution() = default;

  std::optional<SortedSample> transformed_;
  std::vector<double> base_ranks_;  // sorted F_A(y) over the base cell
  std::vector<double> q_values_;    // copy of the quantile target cell
  Composition meta_;
  std::size_t out_of_range_ = 0;
};

namespace detail {

inline CellRef ref(int period, const std::string& level, const SortedSample& s) {
  return {period, level, s.size()};
}

}  // namespace detail

// F_{Y_10|D=d}: the period-1 untreated outcome distribution of group d,
// transported along the control group's time map.
inline CounterfactualDistribution counterfactual_weak(const PanelDataset& ds,
                                                      const std::string& d) {
  const std::string& control = ds.levels().control();
  if (d == control)
    fail(ErrorCode::SelfCounterfactual,
         "the untreated counterfactual of the control group is its observed "
         "period-1 cell; no composition is needed");
  const SortedSample& a = ds.cell(0, control);
  const SortedSample& b = ds.cell(1, control);
  const SortedSample& c = ds.cell(0, d);
  Composition meta{"weak_conditional", d, d, detail::ref(0, control, a),
                   detail::ref(1, control, b), detail::ref(0, d, c)};
  return CounterfactualDistribution::build(a, b, c, std::move(meta));
}

// F_{Y_1d}: the unconditional period-1 outcome distribution under arm d,
// transporting the pooled period-0 sample along group d's time map.
inline CounterfactualDistribution counterfactual_strong_unconditional(
    const PanelDataset& ds, const std::string& d) {
  const SortedSample& a = ds.cell(0, d);
  const SortedSample& b = ds.cell(1, d);
  const SortedSample& c = ds.pooled_period0();
  Composition meta{"strong_unconditional", d, "", detail::ref(0, d, a),
                   detail::ref(1, d, b), detail::ref(0, "<pooled>", c)};
  return CounterfactualDistribution::build(a, b, c, std::move(meta));
}

// F_{Y_1d|D=d'}: arm d's period-1 outcome distribution for group d'.
inline CounterfactualDistribution counterfactual_strong_conditional(
    const PanelDataset& ds, const std::string& d, const std::string& d_prime) {
  const SortedSample& a = ds.cell(0, d);
  const SortedSample& b = ds.cell(1, d);
  const SortedSample& c = ds.cell(0, d_prime);
  Composition meta{"strong_conditional", d, d_prime, detail::ref(0, d, a),
                   detail::ref(1, d, b), detail::ref(0, d_prime, c)};
  return CounterfactualDistribution::build(a, b, c, std::move(meta));
}

// ---------------------------------------------------------------------------
// Effect parameters.
// ---------------------------------------------------------------------------

enum class Parameter { qte, ate, qtt, att, acr, acrt, did_att };

inline std::string to_string(Parameter p) {
  switch (p) {
    case Parameter::qte: return "qte";
    case Parameter::ate: return "ate";
    case Parameter::qtt: return "qtt";
    case Parameter::att: return "att";
    case Parameter::acr: return "acr";
    case Parameter::acrt: return "acrt";
    case Parameter::did_att: return "did";
  }
  return "?";
}

inline Parameter parse_parameter(const std::string& s) {
  if (s == "qte") return Parameter::qte;
  if (s == "ate") return Parameter::ate;
  if (s == "qtt") return Parameter::qtt;
  if (s == "att") return Parameter::att;
  if (s == "acr") return Parameter::acr;
  if (s == "acrt") return Parameter::acrt;
  if (s == "did" || s == "did_att") return Parameter::did_att;
  fail(ErrorCode::ConfigError,
       "unknown parameter '" + s + "' (expected qte, ate, qtt, att, acr, acrt, did)");
}

inline bool is_quantile_type(Parameter p) {
  return p == Parameter::qte || p == Parameter::qtt;
}

struct EffectRequest {
  Parameter param = Parameter::att;
  Mode mode = Mode::weak;
  std::optional<double> tau;  // quantile-type only, in (0,1)
  std::string d;              // arm of interest
  std::string d_prime;        // comparison arm (qte/ate/qtt/att)
  std::string cond;           // conditioning group (qtt/att/acrt)
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
  std::size_t replicates = 0;
  // Percentile bootstrap is a heuristic here: no formal coverage guarantee
  // is available for these plug-in functionals.
  std::string method = "bootstrap-percentile (heuristic, no formal coverage guarantee)";
};

struct EffectEstimate {
  Parameter param = Parameter::att;
  Mode mode = Mode::weak;
  std::optional<double> tau;
  std::string d;
  std::string d_prime;
  std::string cond;
  double value = 0.0;
  std::optional<ConfidenceInterval> ci;
};

namespace detail {

[[noreturn]] inline void not_identified(const std::string& request_desc) {
  fail(ErrorCode::NotIdentified,
       request_desc +
           " is not identified under weak rank stability; the identified set is "
           "QTT(tau, d, control | d) and ATT(d, control | d) for each level d, plus "
           "ACRT for the first ordered step above control on its own treated group. "
           "Unconditional and cross-group parameters require strong rank stability "
           "(mode=strong).");
}

inline void require_tau(const std::optional<double>& tau, Parameter p) {
  if (!tau)
    fail(ErrorCode::ConfigError,
         "parameter " + to_string(p) + " requires a quantile level tau");
  if (!(*tau > 0.0 && *tau < 1.0))
    fail(ErrorCode::InvalidProbability,
         "tau must lie strictly inside (0,1), got " + std::to_string(*tau));
}

inline void forbid_tau(const std::optional<double>& tau, Parameter p) {
  if (tau)
    fail(ErrorCode::ConfigError,
         "parameter " + to_string(p) + " is average-type and takes no tau");
}

}  // namespace detail

// Evaluates effect requests against one dataset, caching every counterfactual
// distribution it constructs. Reusing one Evaluator across a tau grid or a
// request batch amortizes the O(n log n) transport cost.
class Evaluator {
 public:
  explicit Evaluator(const PanelDataset& ds) : ds_(&ds) {}

  EffectEstimate effect(const EffectRequest& req) {
    switch (req.param) {
      case Parameter::qte:
      case Parameter::ate:
        return unconditional_effect(req);
      case Parameter::qtt:
      case Parameter::att:
        return conditional_effect(req);
      case Parameter::acr:
      case Parameter::acrt:
        return causal_response(req);
      case Parameter::did_att:
        return did(req);
    }
    fail(ErrorCode::ConfigError, "unhandled parameter");
  }

  std::vector<std::pair<double, double>> curve(EffectRequest req,
                                               const std::vector<double>& taus) {
    if (!is_quantile_type(req.param))
      fail(ErrorCode::ConfigError,
           "tau-grid curves only apply to quantile-type parameters, not " +
               to_string(req.param));
    std::vector<std::pair<double, double>> points;
    points.reserve(taus.size());
    for (double tau : taus) {
      req.tau = tau;
      points.emplace_back(tau, effect(req).value);
    }
    return points;
  }

  // Counterfactuals constructed so far, keyed by composition; for audit.
  const std::map<std::string, CounterfactualDistribution>& counterfactuals() const {
    return cache_;
  }

  std::size_t total_out_of_range() const {
    std::size_t n = 0;
    for (const auto& [key, cf] : cache_) n += cf.out_of_range_count();
    return n;
  }

  const PanelDataset& dataset() const { return *ds_; }

 private:
  const std::string& control() const { return ds_->levels().control(); }

  // Distribution of the arm-d period-1 outcome, unconditional on group.
  const SortedSample& arm_unconditional(Mode mode, const std::string& d) {
    if (mode == Mode::weak)
      detail::not_identified("an unconditional counterfactual distribution");
    ds_->levels().index_of(d);
    const std::string key = "strong_unconditional|" + d;
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, counterfactual_strong_unconditional(*ds_, d)).first;
    return it->second.transformed();
  }

  // Distribution of the arm-d period-1 outcome conditional on group g. When
  // the arm is the group's realized treatment this is the observed cell.
  const SortedSample& arm_given_group(Mode mode, const std::string& d,
                                      const std::string& g) {
    ds_->levels().index_of(d);
    ds_->levels().index_of(g);
    if (d == g) return ds_->cell(1, d);
    if (mode == Mode::weak) {
      if (d != control())
        detail::not_identified("the arm-" + d + " distribution for group " + g);
      const std::string key = "weak_conditional|" + g;
      auto it = cache_.find(key);
      if (it == cache_.end())
        it = cache_.emplace(key, counterfactual_weak(*ds_, g)).first;
      return it->second.transformed();
    }
    const std::string key = "strong_conditional|" + d + "|" + g;
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, counterfactual_strong_conditional(*ds_, d, g)).first;
    return it->second.transformed();
  }

  EffectEstimate unconditional_effect(const EffectRequest& req) {
    if (!req.cond.empty())
      fail(ErrorCode::ConfigError,
           to_string(req.param) + " is unconditional and takes no conditioning group");
    if (req.param == Parameter::qte) {
      detail::require_tau(req.tau, req.param);
    } else {
      detail::forbid_tau(req.tau, req.param);
    }
    if (req.mode == Mode::weak)
      detail::not_identified(to_string(req.param) + "(" + req.d + ", " + req.d_prime + ")");
    const SortedSample& lhs = arm_unconditional(req.mode, req.d);
    const SortedSample& rhs = arm_unconditional(req.mode, req.d_prime);
    EffectEstimate est = echo(req);
    est.value = req.param == Parameter::qte ? lhs.quantile(*req.tau) - rhs.quantile(*req.tau)
                                            : lhs.mean() - rhs.mean();
    return est;
  }

  EffectEstimate conditional_effect(const EffectRequest& req) {
    if (req.param == Parameter::qtt) {
      detail::require_tau(req.tau, req.param);
    } else {
      detail::forbid_tau(req.tau, req.param);
    }
    if (req.cond.empty())
      fail(ErrorCode::ConfigError,
           to_string(req.param) + " requires a conditioning group (cond)");
    ds_->levels().index_of(req.d);
    ds_->levels().index_of(req.d_prime);
    ds_->levels().index_of(req.cond);
    if (req.mode == Mode::weak && !(req.d_prime == control() && req.cond == req.d)) {
      detail::not_identified(to_string(req.param) + "(" + req.d + ", " + req.d_prime +
                             " | " + req.cond + ")");
    }
    const SortedSample& lhs = arm_given_group(req.mode, req.d, req.cond);
    const SortedSample& rhs = arm_given_group(req.mode, req.d_prime, req.cond);
    EffectEstimate est = echo(req);
    est.value = req.param == Parameter::qtt ? lhs.quantile(*req.tau) - rhs.quantile(*req.tau)
                                            : lhs.mean() - rhs.mean();
    return est;
  }

  EffectEstimate causal_response(const EffectRequest& req) {
    const auto& levels = ds_->levels();
    if (!levels.ordered())
      fail(ErrorCode::OrderingRequired,
           to_string(req.param) +
               " needs an ordered treatment; supply an explicit level ordering");
    const std::size_t j = levels.index_of(req.d);
    if (j == 0)
      fail(ErrorCode::NoLowerLevel,
           to_string(req.param) + "(" + req.d +
               "): the lowest ordered level has no adjacent level below it");
    const std::string& lower = levels.label(j - 1);
    if (!req.d_prime.empty() && req.d_prime != lower)
      fail(ErrorCode::ConfigError,
           to_string(req.param) + " compares adjacent ordered levels; comparison is " +
               lower + ", not " + req.d_prime);

    EffectRequest delegated = req;
    delegated.param = req.param == Parameter::acr ? Parameter::ate : Parameter::att;
    delegated.d_prime = lower;
    EffectEstimate est = req.param == Parameter::acr ? unconditional_effect(delegated)
                                                     : conditional_effect(delegated);
    est.param = req.param;
    return est;
  }

  EffectEstimate did(const EffectRequest& req) {
    detail::forbid_tau(req.tau, req.param);
    if (!req.d_prime.empty() || !req.cond.empty())
      fail(ErrorCode::ConfigError, "did takes only the treated level d");
    ds_->levels().index_of(req.d);
    EffectEstimate est = echo(req);
    est.value = (ds_->cell(1, req.d).mean() - ds_->cell(0, req.d).mean()) -
                (ds_->cell(1, control()).mean() - ds_->cell(0, control()).mean());
    return est;
  }

  static EffectEstimate echo(const EffectRequest& req) {
    EffectEstimate est;
    est.param = req.param;
    est.mode = req.mode;
    est.tau = req.tau;
    est.d = req.d;
    est.d_prime = req.d_prime;
    est.cond = req.cond;
    return est;
  }

  const PanelDataset* ds_;
  std::map<std::string, CounterfactualDistribution> cache_;
};

inline EffectEstimate estimate(const PanelDataset& ds, const EffectRequest& req) {
  Evaluator ev(ds);
  return ev.effect(req);
}

inline EffectEstimate qtt(const PanelDataset& ds, double tau, const std::string& d,
                          const std::string& d_prime, const std::string& cond, Mode mode) {
  return estimate(ds, {Parameter::qtt, mode, tau, d, d_prime, cond});
}

inline EffectEstimate att(const PanelDataset& ds, const std::string& d,
                          const std::string& d_prime, const std::string& cond, Mode mode) {
  return estimate(ds, {Parameter::att, mode, std::nullopt, d, d_prime, cond});
}

inline EffectEstimate qte(const PanelDataset& ds, double tau, const std::string& d,
                          const std::string& d_prime, Mode mode) {
  return estimate(ds, {Parameter::qte, mode, tau, d, d_prime, ""});
}

inline EffectEstimate ate(const PanelDataset& ds, const std::string& d,
                          const std::string& d_prime, Mode mode) {
  return estimate(ds, {Parameter::ate, mode, std::nullopt, d, d_prime, ""});
}

inline EffectEstimate acr(const PanelDataset& ds, const std::string& d_j, Mode mode) {
  return estimate(ds, {Parameter::acr, mode, std::nullopt, d_j, "", ""});
}

inline EffectEstimate acrt(const PanelDataset& ds, const std::string& d_j,
                           const std::string& cond, Mode mode) {
  return estimate(ds, {Parameter::acrt, mode, std::nullopt, d_j, "", cond});
}

inline EffectEstimate did_att(const PanelDataset& ds, const std::string& d,
                              Mode mode = Mode::weak) {
  return estimate(ds, {Parameter::did_att, mode, std::nullopt, d, "", ""});
}

}  // namespace dcic
