#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcic/bootstrap.hpp"
#include "dcic/dataset.hpp"
#include "dcic/error.hpp"
#include "dcic/estimators.hpp"
#include "dcic/report.hpp"
#include "dcic/simulation.hpp"
#include "dcic/version.hpp"

namespace {

int exit_code_for(dcic::ErrorCode code) {
  switch (code) {
    case dcic::ErrorCode::NotIdentified: return 3;
    case dcic::ErrorCode::IoError: return 4;
    default: return 2;  // validation / configuration problems
  }
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "START:STOP:STEP" or a comma list; every tau must lie strictly in (0,1).
std::vector<double> parse_taus(const std::string& spec) {
  std::vector<double> taus;
  auto parse_one = [&](const std::string& s) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      dcic::fail(dcic::ErrorCode::ConfigError, "cannot parse tau value '" + s + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    const auto parts = split_list([&] {
      std::string with_commas = spec;
      for (char& c : with_commas)
        if (c == ':') c = ',';
      return with_commas;
    }());
    if (parts.size() != 3)
      dcic::fail(dcic::ErrorCode::ConfigError,
                 "tau grid must be START:STOP:STEP, got '" + spec + "'");
    const double start = parse_one(parts[0]);
    const double stop = parse_one(parts[1]);
    const double step = parse_one(parts[2]);
    if (!(step > 0.0))
      dcic::fail(dcic::ErrorCode::ConfigError, "tau grid step must be positive");
    for (int k = 0;; ++k) {
      const double tau = start + k * step;
      if (tau > stop + step * 1e-9) break;
      taus.push_back(tau);
    }
  } else {
    for (const auto& piece : split_list(spec)) taus.push_back(parse_one(piece));
  }
  if (taus.empty())
    dcic::fail(dcic::ErrorCode::ConfigError, "tau grid '" + spec + "' is empty");
  for (double tau : taus)
    if (!(tau > 0.0 && tau < 1.0))
      dcic::fail(dcic::ErrorCode::InvalidProbability,
                 "tau must lie strictly inside (0,1), got " + std::to_string(tau));
  return taus;
}

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) dcic::fail(dcic::ErrorCode::IoError, "cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) dcic::fail(dcic::ErrorCode::IoError, "cannot open output file '" + path + "'");
  out << text;
  if (!out) dcic::fail(dcic::ErrorCode::IoError, "failed writing output file '" + path + "'");
}

struct DataFlags {
  std::string input;
  std::string outcome_column = "outcome";
  std::string treatment_column = "treatment";
  std::string period_column = "period";
  std::string period0_label = "0";
  std::string period1_label = "1";
  std::string control = "0";
  std::string ordered_list;  // comma-separated explicit ordering
  std::size_t min_cell_size = 2;
};

void add_data_flags(CLI::App* cmd, DataFlags& flags) {
  cmd->add_option("--input", flags.input, "input CSV path")->required();
  cmd->add_option("--outcome", flags.outcome_column, "outcome column name");
  cmd->add_option("--treatment", flags.treatment_column, "treatment column name");
  cmd->add_option("--period", flags.period_column, "period column name");
  cmd->add_option("--period0-label", flags.period0_label, "label of the pre period");
  cmd->add_option("--period1-label", flags.period1_label, "label of the post period");
  cmd->add_option("--control", flags.control, "control treatment level");
  cmd->add_option("--ordered", flags.ordered_list,
                  "comma-separated level ordering, control first (enables acr/acrt)");
  cmd->add_option("--min-cell-size", flags.min_cell_size,
                  "cells smaller than this raise a warning");
}

struct LoadedData {
  dcic::PanelDataset dataset;
  std::string digest;
};

LoadedData load(const DataFlags& flags) {
  const std::string bytes = read_file_bytes(flags.input);
  dcic::CsvOptions csv;
  csv.outcome_column = flags.outcome_column;
  csv.treatment_column = flags.treatment_column;
  csv.period_column = flags.period_column;
  csv.period0_label = flags.period0_label;
  csv.period1_label = flags.period1_label;
  dcic::DatasetOptions options;
  options.control = flags.control;
  options.min_cell_size = flags.min_cell_size;
  if (!flags.ordered_list.empty()) {
    options.levels = split_list(flags.ordered_list);
    options.ordered = true;
  }
  std::istringstream in(bytes);
  return {dcic::load_csv(in, csv, options), dcic::digest_hex(dcic::fnv1a64(bytes))};
}

void fill_common(dcic::ResultDocument& doc, const dcic::PanelDataset& ds,
                 const DataFlags& flags, const std::string& digest, dcic::Mode mode) {
  doc.input_path = flags.input;
  doc.input_digest = digest;
  doc.mode = mode;
  doc.level_labels = ds.levels().labels();
  doc.control = ds.levels().control();
  doc.ordered = ds.levels().ordered();
  for (int t = 0; t <= 1; ++t)
    for (std::size_t j = 0; j < ds.levels().count(); ++j)
      doc.cells.push_back({t, ds.levels().label(j), ds.cell_at(t, j).size()});
  doc.group_shares_period1 = ds.p_hat_all();
  doc.group_shares_period0 = ds.period0_shares();
  doc.warnings = ds.warnings();
  doc.support_findings = dcic::support_check(ds, mode);
}

void fill_compositions(dcic::ResultDocument& doc, const dcic::Evaluator& ev) {
  for (const auto& [key, cf] : ev.counterfactuals()) {
    const auto& meta = cf.composition();
    doc.compositions.push_back(
        {meta.kind, meta.arm, meta.group, meta.base_cell.n, cf.out_of_range_count()});
  }
}

struct EstimateFlags {
  DataFlags data;
  std::string mode = "weak";
  std::string params;
  std::string taus;
  std::string d, d_prime, cond;
  std::size_t bootstrap = 0;
  double level = 0.95;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string output = "-";
  std::string format = "json";
};

int run_estimate(const EstimateFlags& flags) {
  const dcic::Mode mode = dcic::parse_mode(flags.mode);
  if (flags.format != "json" && flags.format != "csv")
    dcic::fail(dcic::ErrorCode::ConfigError,
               "format must be 'json' or 'csv', got '" + flags.format + "'");
  LoadedData loaded = load(flags.data);
  const dcic::PanelDataset& ds = loaded.dataset;

  if (flags.params.empty())
    dcic::fail(dcic::ErrorCode::ConfigError, "no parameters requested (--params)");
  if (flags.d.empty())
    dcic::fail(dcic::ErrorCode::ConfigError, "a treatment level of interest is required (--d)");

  std::vector<double> taus;
  if (!flags.taus.empty()) taus = parse_taus(flags.taus);

  // Request construction. Comparison level defaults to the control and the
  // conditioning group defaults to the level of interest, matching the
  // on-the-treated reading of qtt/att.
  std::vector<dcic::EffectRequest> requests;
  std::vector<std::size_t> curve_start;  // index into requests per curve
  dcic::ResultDocument doc;
  doc.command = "estimate";

  for (const auto& name : split_list(flags.params)) {
    const dcic::Parameter param = dcic::parse_parameter(name);
    dcic::EffectRequest req;
    req.param = param;
    req.mode = mode;
    req.d = flags.d;
    switch (param) {
      case dcic::Parameter::qte:
      case dcic::Parameter::ate:
        req.d_prime = flags.d_prime.empty() ? ds.levels().control() : flags.d_prime;
        break;
      case dcic::Parameter::qtt:
      case dcic::Parameter::att:
        req.d_prime = flags.d_prime.empty() ? ds.levels().control() : flags.d_prime;
        req.cond = flags.cond.empty() ? flags.d : flags.cond;
        break;
      case dcic::Parameter::acrt:
        req.cond = flags.cond.empty() ? flags.d : flags.cond;
        break;
      case dcic::Parameter::acr:
      case dcic::Parameter::did_att:
        break;
    }
    if (dcic::is_quantile_type(param)) {
      if (taus.empty())
        dcic::fail(dcic::ErrorCode::ConfigError,
                   "parameter " + name + " needs a tau grid (--taus)");
      dcic::CurveRecord curve;
      curve.param = param;
      curve.mode = mode;
      curve.d = req.d;
      curve.d_prime = req.d_prime;
      curve.cond = req.cond;
      curve.taus = taus;
      curve_start.push_back(requests.size());
      doc.curves.push_back(std::move(curve));
      for (double tau : taus) {
        req.tau = tau;
        requests.push_back(req);
      }
    } else {
      req.tau.reset();
      requests.push_back(req);
    }
  }

  dcic::Evaluator ev(ds);
  for (const auto& req : requests) doc.estimates.push_back(ev.effect(req));

  if (flags.bootstrap > 0) {
    dcic::BootstrapConfig cfg;
    cfg.replicates = flags.bootstrap;
    cfg.level = flags.level;
    cfg.seed = flags.seed;
    cfg.threads = flags.threads;
    doc.bootstrap = cfg;
    const auto summaries = dcic::bootstrap_many(ds, requests, cfg);
    for (std::size_t i = 0; i < summaries.size(); ++i) {
      dcic::ConfidenceInterval ci;
      ci.lower = summaries[i].lower;
      ci.upper = summaries[i].upper;
      ci.level = cfg.level;
      ci.replicates = cfg.replicates;
      doc.estimates[i].ci = ci;
    }
  }

  for (std::size_t c = 0; c < doc.curves.size(); ++c) {
    auto& curve = doc.curves[c];
    for (std::size_t k = 0; k < curve.taus.size(); ++k)
      curve.values.push_back(doc.estimates[curve_start[c] + k].value);
  }

  fill_common(doc, ds, flags.data, loaded.digest, mode);
  fill_compositions(doc, ev);

  if (flags.format == "csv") {
    write_text(flags.output, dcic::to_csv(doc));
  } else {
    write_text(flags.output, dcic::to_json(doc).dump(2) + "\n");
  }
  return 0;
}

struct ValidateFlags {
  DataFlags data;
  std::string mode = "weak";
  std::string output = "-";
};

int run_validate(const ValidateFlags& flags) {
  const dcic::Mode mode = dcic::parse_mode(flags.mode);
  LoadedData loaded = load(flags.data);
  const dcic::PanelDataset& ds = loaded.dataset;

  dcic::ResultDocument doc;
  doc.command = "validate";
  fill_common(doc, ds, flags.data, loaded.digest, mode);

  // Dry-run every composition the mode would use, to count support stress.
  const auto& levels = ds.levels();
  auto record = [&](const dcic::CounterfactualDistribution& cf) {
    const auto& meta = cf.composition();
    doc.compositions.push_back(
        {meta.kind, meta.arm, meta.group, meta.base_cell.n, cf.out_of_range_count()});
  };
  if (mode == dcic::Mode::weak) {
    for (std::size_t j = 1; j < levels.count(); ++j)
      record(dcic::counterfactual_weak(ds, levels.label(j)));
  } else {
    for (std::size_t j = 0; j < levels.count(); ++j)
      record(dcic::counterfactual_strong_unconditional(ds, levels.label(j)));
    for (std::size_t a = 0; a < levels.count(); ++a)
      for (std::size_t g = 0; g < levels.count(); ++g)
        if (a != g)
          record(dcic::counterfactual_strong_conditional(ds, levels.label(a),
                                                         levels.label(g)));
  }

  write_text(flags.output, dcic::to_json(doc).dump(2) + "\n");
  return 0;
}

struct SimulateFlags {
  std::string config;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string output;
  std::string latent_output;  // default: derived from output
};

std::string derive_latent_path(const std::string& output) {
  const std::size_t slash = output.find_last_of('/');
  const std::size_t dot = output.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return output + "_latent";
  return output.substr(0, dot) + "_latent" + output.substr(dot);
}

int run_simulate(const SimulateFlags& flags) {
  if (flags.output == "-")
    dcic::fail(dcic::ErrorCode::ConfigError,
               "simulate writes a dataset and a latent table; --output must be a file path");
  const dcic::DgpConfig cfg = dcic::load_dgp_config(flags.config);
  const dcic::SimulationResult result = dcic::simulate(cfg, flags.n, flags.seed);

  std::ostringstream data_csv;
  dcic::write_dataset_csv(data_csv, result.observations);
  write_text(flags.output, data_csv.str());

  const std::string latent_path =
      flags.latent_output.empty() ? derive_latent_path(flags.output) : flags.latent_output;
  std::ostringstream latent_csv;
  dcic::write_latent_csv(latent_csv, result);
  write_text(latent_path, latent_csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dcic: counterfactual distributions and treatment effects for discrete "
      "multi-valued treatments in two-period repeated cross-sections"};
  app.set_version_flag("--version", dcic::kVersion);
  app.require_subcommand(1);
  // Repeated scalar flags take the last occurrence, as in most Unix tools.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  EstimateFlags est;
  CLI::App* cmd_estimate =
      app.add_subcommand("estimate", "estimate effects from a CSV dataset");
  add_data_flags(cmd_estimate, est.data);
  cmd_estimate->add_option("--mode", est.mode, "identification mode: weak|strong");
  cmd_estimate->add_option("--params", est.params,
                           "comma list from qte,ate,qtt,att,acr,acrt,did")->required();
  cmd_estimate->add_option("--taus", est.taus, "tau grid: START:STOP:STEP or comma list");
  cmd_estimate->add_option("--d", est.d, "treatment level of interest");
  cmd_estimate->add_option("--dprime", est.d_prime,
                           "comparison level (default: control)");
  cmd_estimate->add_option("--cond", est.cond,
                           "conditioning group for qtt/att/acrt (default: --d)");
  cmd_estimate->add_option("--bootstrap", est.bootstrap,
                           "bootstrap replicate count (0 disables)");
  cmd_estimate->add_option("--level", est.level, "confidence level, in (0,1)");
  cmd_estimate->add_option("--seed", est.seed, "bootstrap master seed");
  cmd_estimate->add_option("--threads", est.threads, "bootstrap worker threads");
  cmd_estimate->add_option("--output", est.output, "output path, '-' for stdout");
  cmd_estimate->add_option("--format", est.format, "output format: json|csv");

  ValidateFlags val;
  CLI::App* cmd_validate =
      app.add_subcommand("validate", "run dataset and support diagnostics");
  add_data_flags(cmd_validate, val.data);
  cmd_validate->add_option("--mode", val.mode, "identification mode: weak|strong");
  cmd_validate->add_option("--output", val.output, "output path, '-' for stdout");

  SimulateFlags sim;
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "generate a synthetic dataset from a DGP config");
  cmd_simulate->add_option("--config", sim.config, "DGP config (JSON)")->required();
  cmd_simulate->add_option("--n", sim.n, "observations per period")->required();
  cmd_simulate->add_option("--seed", sim.seed, "simulation seed");
  cmd_simulate->add_option("--output", sim.output, "dataset CSV path")->required();
  cmd_simulate->add_option("--latent-output", sim.latent_output,
                           "latent potential-outcome CSV path (default: derived)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the parser's message to stderr
    return 2;     // command-line problems are validation failures
  }

  try {
    if (cmd_estimate->parsed()) return run_estimate(est);
    if (cmd_validate->parsed()) return run_validate(val);
    if (cmd_simulate->parsed()) return run_simulate(sim);
  } catch (const dcic::Error& e) {
    std::cerr << "dcic: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "dcic: internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
