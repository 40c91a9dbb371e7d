#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <istream>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dcic/empirical.hpp"
#include "dcic/error.hpp"

namespace dcic {

enum class Mode { weak, strong };

inline std::string to_string(Mode m) { return m == Mode::weak ? "weak" : "strong"; }

inline Mode parse_mode(const std::string& s) {
  if (s == "weak") return Mode::weak;
  if (s == "strong") return Mode::strong;
  fail(ErrorCode::ConfigError, "mode must be 'weak' or 'strong', got '" + s + "'");
}

struct Observation {
  double outcome = 0.0;
  std::string treatment;
  int period = 0;  // 0 or 1
};

// Treatment levels are opaque labels. The control level always sits first.
// An ordering (for ACR/ACRT) is only ever supplied explicitly, never inferred
// from label sort order.
class TreatmentLevels {
 public:
  static TreatmentLevels build(std::vector<std::string> labels, bool ordered) {
    if (labels.size() < 2)
      fail(ErrorCode::ConfigError, "need at least two treatment levels, got " +
                                       std::to_string(labels.size()));
    TreatmentLevels out;
    out.labels_ = std::move(labels);
    out.ordered_ = ordered;
    for (std::size_t i = 0; i < out.labels_.size(); ++i) {
      if (!out.index_.emplace(out.labels_[i], i).second)
        fail(ErrorCode::ConfigError,
             "duplicate treatment level '" + out.labels_[i] + "'");
    }
    return out;
  }

  std::size_t count() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::string& control() const { return labels_.front(); }
  bool ordered() const { return ordered_; }

  bool contains(const std::string& label) const { return index_.count(label) > 0; }

  std::size_t index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
      fail(ErrorCode::UnknownCell, "unknown treatment level '" + label + "'");
    return it->second;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  bool ordered_ = false;
};

struct DatasetOptions {
  std::string control = "0";
  // When set, fixes the level list (and its order); must start with control
  // and cover exactly the labels present in the data.
  std::optional<std::vector<std::string>> levels;
  bool ordered = false;
  std::size_t min_cell_size = 2;
};

struct SupportFinding {
  std::string severity;  // always WARNING: empirical ranges are proxies
  std::string level;     // the level whose range escapes
  std::string reference; // the level whose range should contain it
  std::string message;
};

// Immutable after build; cells are shareable across threads.
class PanelDataset {
 public:
  static PanelDataset build(std::vector<Observation> observations,
                            const DatasetOptions& options = {}) {
    PanelDataset ds;
    for (const auto& obs : observations) {
      if (obs.period != 0 && obs.period != 1)
        fail(ErrorCode::InvalidValue,
             "period must be 0 or 1, got " + std::to_string(obs.period));
      if (!std::isfinite(obs.outcome))
        fail(ErrorCode::InvalidValue, "non-finite outcome value");
    }

    ds.levels_ = resolve_levels(observations, options);
    const std::size_t m = ds.levels_.count();

    std::vector<std::vector<double>> buckets(2 * m);
    std::vector<double> pooled0;
    std::size_t n1 = 0;
    std::vector<std::size_t> counts1(m, 0), counts0(m, 0);
    for (const auto& obs : observations) {
      const std::size_t j = ds.levels_.index_of(obs.treatment);
      buckets[static_cast<std::size_t>(obs.period) * m + j].push_back(obs.outcome);
      if (obs.period == 0) {
        pooled0.push_back(obs.outcome);
        ++counts0[j];
      } else {
        ++counts1[j];
        ++n1;
      }
    }

    for (int t = 0; t <= 1; ++t) {
      for (std::size_t j = 0; j < m; ++j) {
        auto& bucket = buckets[static_cast<std::size_t>(t) * m + j];
        if (bucket.empty())
          fail(ErrorCode::EmptyCell, "no observations in cell (period=" +
                                         std::to_string(t) + ", level=" +
                                         ds.levels_.label(j) + ")");
        if (bucket.size() < options.min_cell_size)
          ds.warnings_.push_back(
              "cell (period=" + std::to_string(t) + ", level=" +
              ds.levels_.label(j) + ") has only " + std::to_string(bucket.size()) +
              " observation(s), below the minimum of " +
              std::to_string(options.min_cell_size));
        ds.cells_.push_back(SortedSample::build(std::move(bucket)));
      }
    }
    ds.pooled_period0_.emplace(SortedSample::build(std::move(pooled0)));

    // Group shares from period 1, where treatment is realized; period-0
    // shares kept as a composition-stability diagnostic.
    for (std::size_t j = 0; j < m; ++j) {
      ds.p_hat_.push_back(static_cast<double>(counts1[j]) / static_cast<double>(n1));
      ds.period0_share_.push_back(static_cast<double>(counts0[j]) /
                                  static_cast<double>(pooled_size(counts0)));
    }

    ds.observations_ = std::move(observations);
    return ds;
  }

  // Assembles a dataset straight from per-cell value vectors (indexed
  // period * m + level). Used by resampling, where cell membership is fixed
  // and only values change; carries no row-level observation list.
  static PanelDataset from_cells(const TreatmentLevels& levels,
                                 std::vector<std::vector<double>> cell_values) {
    const std::size_t m = levels.count();
    if (cell_values.size() != 2 * m)
      fail(ErrorCode::ConfigError, "expected " + std::to_string(2 * m) +
                                       " cells, got " + std::to_string(cell_values.size()));
    PanelDataset ds;
    ds.levels_ = levels;
    std::vector<double> pooled0;
    for (int t = 0; t <= 1; ++t) {
      for (std::size_t j = 0; j < m; ++j) {
        auto& bucket = cell_values[static_cast<std::size_t>(t) * m + j];
        if (bucket.empty())
          fail(ErrorCode::EmptyCell, "no observations in cell (period=" +
                                         std::to_string(t) + ", level=" +
                                         levels.label(j) + ")");
        if (t == 0) pooled0.insert(pooled0.end(), bucket.begin(), bucket.end());
        ds.cells_.push_back(SortedSample::build(std::move(bucket)));
      }
    }
    ds.pooled_period0_.emplace(SortedSample::build(std::move(pooled0)));
    const double n1 = static_cast<double>(ds.period_total(1));
    const double n0 = static_cast<double>(ds.period_total(0));
    for (std::size_t j = 0; j < m; ++j) {
      ds.p_hat_.push_back(static_cast<double>(ds.cell_at(1, j).size()) / n1);
      ds.period0_share_.push_back(static_cast<double>(ds.cell_at(0, j).size()) / n0);
    }
    return ds;
  }

  const TreatmentLevels& levels() const { return levels_; }
  const std::vector<Observation>& observations() const { return observations_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  const SortedSample& cell(int period, const std::string& level) const {
    if (period != 0 && period != 1)
      fail(ErrorCode::UnknownCell,
           "unknown cell: period must be 0 or 1, got " + std::to_string(period));
    return cell_at(period, levels_.index_of(level));
  }

  const SortedSample& cell_at(int period, std::size_t level_index) const {
    return cells_[static_cast<std::size_t>(period) * levels_.count() + level_index];
  }

  const SortedSample& pooled_period0() const { return *pooled_period0_; }

  double p_hat(const std::string& level) const { return p_hat_[levels_.index_of(level)]; }
  const std::vector<double>& p_hat_all() const { return p_hat_; }
  const std::vector<double>& period0_shares() const { return period0_share_; }

  std::size_t period_total(int period) const {
    std::size_t n = 0;
    for (std::size_t j = 0; j < levels_.count(); ++j) n += cell_at(period, j).size();
    return n;
  }

 private:
  static std::size_t pooled_size(const std::vector<std::size_t>& counts) {
    std::size_t n = 0;
    for (auto c : counts) n += c;
    return n;
  }

  static TreatmentLevels resolve_levels(const std::vector<Observation>& observations,
                                        const DatasetOptions& options) {
    std::vector<std::string> seen;
    std::unordered_map<std::string, bool> have;
    for (const auto& obs : observations) {
      if (have.emplace(obs.treatment, true).second) seen.push_back(obs.treatment);
    }

    if (options.levels) {
      auto levels = TreatmentLevels::build(*options.levels, options.ordered);
      if (levels.control() != options.control)
        fail(ErrorCode::ConfigError, "level list must start with the control level '" +
                                         options.control + "', starts with '" +
                                         levels.control() + "'");
      for (const auto& label : seen)
        if (!levels.contains(label))
          fail(ErrorCode::ConfigError,
               "data contains treatment level '" + label + "' absent from the level list");
      if (levels.count() != seen.size())
        for (const auto& label : levels.labels())
          if (!have.count(label))
            fail(ErrorCode::EmptyCell,
                 "no observations for declared treatment level '" + label + "'");
      return levels;
    }

    // Discovered levels: control first, the rest in label sort order so the
    // result is independent of row order. This order carries no semantics.
    if (!have.count(options.control))
      fail(ErrorCode::ConfigError,
           "control level '" + options.control + "' not present in the data");
    std::vector<std::string> labels;
    labels.push_back(options.control);
    std::sort(seen.begin(), seen.end());
    for (auto& label : seen)
      if (label != options.control) labels.push_back(std::move(label));
    return TreatmentLevels::build(std::move(labels), options.ordered);
  }

  std::vector<Observation> observations_;
  TreatmentLevels levels_;
  std::vector<SortedSample> cells_;  // index: period * m + level
  std::optional<SortedSample> pooled_period0_;
  std::vector<double> p_hat_;
  std::vector<double> period0_share_;
  std::vector<std::string> warnings_;
};

// Range containment diagnostics for the support conditions. Always WARNING
// severity: sample ranges understate population supports, so a violation is
// evidence of stress, not proof of failure.
inline std::vector<SupportFinding> support_check(const PanelDataset& ds, Mode mode) {
  std::vector<SupportFinding> findings;
  const auto& levels = ds.levels();

  auto check_pair = [&](const std::string& inner, const std::string& outer) {
    const auto& si = ds.cell(0, inner);
    const auto& so = ds.cell(0, outer);
    auto flag = [&](double bound, double limit, const char* side) {
      std::ostringstream msg;
      msg << "period-0 range of level " << inner << " escapes level " << outer
          << " " << side << " (" << bound << (side[0] == 'b' ? " < " : " > ")
          << limit << ")";
      findings.push_back({"WARNING", inner, outer, msg.str()});
    };
    if (si.min() < so.min()) flag(si.min(), so.min(), "below");
    if (si.max() > so.max()) flag(si.max(), so.max(), "above");
  };

  if (mode == Mode::weak) {
    for (std::size_t j = 1; j < levels.count(); ++j)
      check_pair(levels.label(j), levels.control());
  } else {
    for (std::size_t a = 0; a < levels.count(); ++a)
      for (std::size_t b = 0; b < levels.count(); ++b)
        if (a != b) check_pair(levels.label(b), levels.label(a));
  }
  return findings;
}

// ---------------------------------------------------------------------------
// CSV ingest. Header row required; column names and period labels are
// configurable. Minimal dialect: comma separator, no quoting, whitespace and
// trailing carriage returns trimmed.
// ---------------------------------------------------------------------------

struct CsvOptions {
  std::string outcome_column = "outcome";
  std::string treatment_column = "treatment";
  std::string period_column = "period";
  std::string period0_label = "0";
  std::string period1_label = "1";
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

}  // namespace detail

inline std::vector<Observation> read_csv_observations(std::istream& in,
                                                      const CsvOptions& csv = {}) {
  std::string header;
  if (!std::getline(in, header))
    fail(ErrorCode::SchemaError, "input is empty: no header row");
  const auto names = detail::split_csv_line(header);

  auto find_column = [&](const std::string& wanted) -> std::size_t {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == wanted) return i;
    fail(ErrorCode::SchemaError, "missing required column '" + wanted + "'");
  };
  const std::size_t col_y = find_column(csv.outcome_column);
  const std::size_t col_d = find_column(csv.treatment_column);
  const std::size_t col_t = find_column(csv.period_column);

  std::vector<Observation> observations;
  std::string line;
  std::size_t row = 1;  // header was row 1
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != names.size())
      fail(ErrorCode::ParseError, "row " + std::to_string(row) + ": expected " +
                                      std::to_string(names.size()) + " fields, got " +
                                      std::to_string(fields.size()));

    Observation obs;
    const std::string& ystr = fields[col_y];
    const char* begin = ystr.data();
    const char* end = begin + ystr.size();
    auto [ptr, ec] = std::from_chars(begin, end, obs.outcome);
    if (ec != std::errc() || ptr != end || !std::isfinite(obs.outcome))
      fail(ErrorCode::ParseError, "row " + std::to_string(row) +
                                      ": cannot parse outcome value '" + ystr + "'");

    const std::string& tstr = fields[col_t];
    if (tstr == csv.period0_label) {
      obs.period = 0;
    } else if (tstr == csv.period1_label) {
      obs.period = 1;
    } else {
      fail(ErrorCode::ParseError, "row " + std::to_string(row) + ": period label '" +
                                      tstr + "' is neither '" + csv.period0_label +
                                      "' nor '" + csv.period1_label + "'");
    }

    obs.treatment = fields[col_d];
    if (obs.treatment.empty())
      fail(ErrorCode::ParseError,
           "row " + std::to_string(row) + ": empty treatment label");
    observations.push_back(std::move(obs));
  }
  return observations;
}

inline PanelDataset load_csv(std::istream& in, const CsvOptions& csv = {},
                             const DatasetOptions& options = {}) {
  return PanelDataset::build(read_csv_observations(in, csv), options);
}

inline PanelDataset load_csv_file(const std::string& path, const CsvOptions& csv = {},
                                  const DatasetOptions& options = {}) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open input file '" + path + "'");
  return load_csv(in, csv, options);
}

}  // namespace dcic
