#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcic/bootstrap.hpp"
#include "dcic/dataset.hpp"
#include "dcic/estimators.hpp"
#include "dcic/version.hpp"

namespace dcic {

// Result documents are fully value-determined: no timestamps, no hostnames,
// shortest round-trip number formatting. Re-running with the same input
// bytes and flags reproduces the document bit for bit.

using ordered_json = nlohmann::ordered_json;

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest_hex(std::uint64_t h) {
  static const char* hex = "0123456789abcdef";
  std::string out = "fnv1a64:";
  for (int shift = 60; shift >= 0; shift -= 4) out.push_back(hex[(h >> shift) & 0xF]);
  return out;
}

struct CurveRecord {
  Parameter param = Parameter::qtt;
  Mode mode = Mode::weak;
  std::string d;
  std::string d_prime;
  std::string cond;
  std::vector<double> taus;
  std::vector<double> values;
};

struct CompositionDiagnostic {
  std::string kind;
  std::string arm;
  std::string group;
  std::size_t base_n = 0;
  std::size_t out_of_range = 0;
};

struct ResultDocument {
  std::string command;  // estimate | validate
  std::string input_path;
  std::string input_digest;
  Mode mode = Mode::weak;
  std::vector<std::string> level_labels;
  std::string control;
  bool ordered = false;
  std::optional<BootstrapConfig> bootstrap;
  std::vector<EffectEstimate> estimates;
  std::vector<CurveRecord> curves;
  std::vector<SupportFinding> support_findings;
  std::vector<CompositionDiagnostic> compositions;
  struct CellInfo {
    int period = 0;
    std::string level;
    std::size_t n = 0;
  };
  std::vector<CellInfo> cells;
  std::vector<double> group_shares_period1;  // aligned with level_labels
  std::vector<double> group_shares_period0;
  std::vector<std::string> warnings;
};

namespace detail {

inline ordered_json estimate_json(const EffectEstimate& est) {
  ordered_json j;
  j["param"] = to_string(est.param);
  j["mode"] = to_string(est.mode);
  if (est.tau) {
    j["tau"] = *est.tau;
  } else {
    j["tau"] = nullptr;
  }
  j["d"] = est.d;
  j["d_prime"] = est.d_prime;
  j["cond"] = est.cond;
  j["value"] = est.value;
  if (est.ci) {
    ordered_json ci;
    ci["lower"] = est.ci->lower;
    ci["upper"] = est.ci->upper;
    ci["level"] = est.ci->level;
    ci["replicates"] = est.ci->replicates;
    ci["method"] = est.ci->method;
    j["ci"] = std::move(ci);
  } else {
    j["ci"] = nullptr;
  }
  return j;
}

}  // namespace detail

inline ordered_json to_json(const ResultDocument& doc) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["tool"] = {{"name", "dcic"}, {"version", kVersion}};
  j["command"] = doc.command;
  j["input"] = {{"path", doc.input_path}, {"digest", doc.input_digest}};
  j["mode"] = to_string(doc.mode);
  j["levels"] = {{"labels", doc.level_labels},
                 {"control", doc.control},
                 {"ordered", doc.ordered}};

  if (doc.bootstrap) {
    // Thread count is an execution detail, not part of the result: documents
    // must stay byte-identical across --threads settings.
    j["bootstrap"] = {{"replicates", doc.bootstrap->replicates},
                      {"level", doc.bootstrap->level},
                      {"seed", doc.bootstrap->seed},
                      {"scheme", "stratified-by-cell"},
                      {"method", ConfidenceInterval{}.method}};
  } else {
    j["bootstrap"] = nullptr;
  }

  j["estimates"] = ordered_json::array();
  for (const auto& est : doc.estimates) j["estimates"].push_back(detail::estimate_json(est));

  j["curves"] = ordered_json::array();
  for (const auto& curve : doc.curves) {
    ordered_json c;
    c["param"] = to_string(curve.param);
    c["mode"] = to_string(curve.mode);
    c["d"] = curve.d;
    c["d_prime"] = curve.d_prime;
    c["cond"] = curve.cond;
    c["taus"] = curve.taus;
    c["values"] = curve.values;
    j["curves"].push_back(std::move(c));
  }

  ordered_json diag;
  diag["cells"] = ordered_json::array();
  for (const auto& cell : doc.cells)
    diag["cells"].push_back(
        {{"period", cell.period}, {"level", cell.level}, {"n", cell.n}});
  ordered_json shares1, shares0;
  for (std::size_t i = 0; i < doc.level_labels.size(); ++i) {
    shares1[doc.level_labels[i]] = doc.group_shares_period1[i];
    shares0[doc.level_labels[i]] = doc.group_shares_period0[i];
  }
  diag["group_shares_period1"] = std::move(shares1);
  diag["group_shares_period0"] = std::move(shares0);
  diag["support_findings"] = ordered_json::array();
  for (const auto& f : doc.support_findings)
    diag["support_findings"].push_back({{"severity", f.severity},
                                        {"level", f.level},
                                        {"reference", f.reference},
                                        {"message", f.message}});
  diag["compositions"] = ordered_json::array();
  std::size_t oor_total = 0;
  for (const auto& c : doc.compositions) {
    diag["compositions"].push_back({{"kind", c.kind},
                                    {"arm", c.arm},
                                    {"group", c.group},
                                    {"base_n", c.base_n},
                                    {"out_of_range", c.out_of_range}});
    oor_total += c.out_of_range;
  }
  diag["out_of_range_total"] = oor_total;
  j["diagnostics"] = std::move(diag);

  j["warnings"] = doc.warnings;
  return j;
}

// CSV export flattens the estimates only; curves and diagnostics are
// JSON-shaped data.
inline std::string to_csv(const ResultDocument& doc) {
  std::ostringstream out;
  auto fmt = [](double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  };
  out << "param,mode,tau,d,d_prime,cond,value,ci_lower,ci_upper,ci_level,ci_replicates\n";
  for (const auto& est : doc.estimates) {
    out << to_string(est.param) << ',' << to_string(est.mode) << ','
        << (est.tau ? fmt(*est.tau) : "") << ',' << est.d << ',' << est.d_prime << ','
        << est.cond << ',' << fmt(est.value) << ',';
    if (est.ci) {
      out << fmt(est.ci->lower) << ',' << fmt(est.ci->upper) << ','
          << fmt(est.ci->level) << ',' << est.ci->replicates;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dcic
