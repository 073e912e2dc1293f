// bcreg command-line front end: fit / predict / simulate / report.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bcreg/data.hpp"
#include "bcreg/ensemble.hpp"
#include "bcreg/error.hpp"
#include "bcreg/report.hpp"
#include "bcreg/serialize.hpp"
#include "bcreg/simbench.hpp"

namespace {

using namespace bcreg;
using nlohmann::json;

enum Exit : int { kOk = 0, kInput = 2, kFit = 3, kDimension = 4, kConfig = 5 };

int exit_code_for(ErrorCode c) {
  if (is_input_error(c)) return kInput;
  switch (c) {
    case ErrorCode::DimensionMismatch:
      return kDimension;
    case ErrorCode::InvalidSpec:
    case ErrorCode::InvalidArgument:
    case ErrorCode::WindowEmpty:
    case ErrorCode::UnknownScenario:
      return kConfig;
    default:
      return kFit;
  }
}

// Everything a subcommand may read. Unset optionals fall back to the
// config file and then to library defaults.
struct Options {
  std::optional<std::string> config;
  std::optional<std::string> data;
  std::optional<std::string> response;
  std::optional<std::string> model;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::size_t> m_min;
  std::optional<std::size_t> m_max;
  std::optional<std::size_t> s;
  std::optional<double> psi_low;
  std::optional<double> psi_high;
  std::optional<double> level;
  std::optional<double> prior_variance;
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> hd_p;
  std::vector<std::string> scenarios;
  std::vector<std::string> methods;
  std::vector<std::string> inputs;
  bool no_header = false;
  char delimiter = ',';
};

std::string normalize_key(std::string k) {
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

template <class T>
void fill(std::optional<T>& slot, const json& cfg, const char* key) {
  if (slot || !cfg.contains(key)) return;
  try {
    slot = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("config key '") + key + "': " + e.what());
  }
}

std::vector<std::string> string_list(const json& v) {
  if (v.is_string()) return {v.get<std::string>()};
  return v.get<std::vector<std::string>>();
}

// Applies a JSON config file underneath the command-line flags.
void merge_config(Options& o) {
  if (!o.config) return;
  json raw;
  try {
    raw = json::parse(read_text_file(*o.config));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, "config file is not valid JSON: " + std::string(e.what()));
  }
  if (!raw.is_object()) throw Error(ErrorCode::InvalidSpec, "config file must hold a JSON object");
  json cfg = json::object();
  for (const auto& [k, v] : raw.items()) cfg[normalize_key(k)] = v;
  static const std::vector<std::string> known{"data", "response", "model", "out", "seed", "threads",
                                              "m_min", "m_max", "s", "psi_low", "psi_high", "level",
                                              "prior_variance", "replicates", "hd_p", "scenario", "method"};
  for (const auto& [k, v] : cfg.items()) {
    if (std::find(known.begin(), known.end(), k) == known.end()) {
      throw Error(ErrorCode::InvalidSpec, "unknown config key '" + k + "'");
    }
  }
  fill(o.data, cfg, "data");
  fill(o.response, cfg, "response");
  fill(o.model, cfg, "model");
  fill(o.out, cfg, "out");
  fill(o.seed, cfg, "seed");
  fill(o.threads, cfg, "threads");
  fill(o.m_min, cfg, "m_min");
  fill(o.m_max, cfg, "m_max");
  fill(o.s, cfg, "s");
  fill(o.psi_low, cfg, "psi_low");
  fill(o.psi_high, cfg, "psi_high");
  fill(o.level, cfg, "level");
  fill(o.prior_variance, cfg, "prior_variance");
  fill(o.replicates, cfg, "replicates");
  fill(o.hd_p, cfg, "hd_p");
  try {
    if (o.scenarios.empty() && cfg.contains("scenario")) o.scenarios = string_list(cfg["scenario"]);
    if (o.methods.empty() && cfg.contains("method")) o.methods = string_list(cfg["method"]);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidSpec, std::string("config scenario/method: ") + e.what());
  }
}

EnsembleConfig ensemble_config(const Options& o) {
  EnsembleConfig cfg;
  cfg.m_min = o.m_min;
  cfg.m_max = o.m_max;
  cfg.s = o.s;
  if (o.psi_low) cfg.psi_low = *o.psi_low;
  if (o.psi_high) cfg.psi_high = *o.psi_high;
  if (o.level) cfg.interval_level = *o.level;
  if (o.prior_variance) cfg.prior_variance = *o.prior_variance;
  cfg.master_seed = o.seed.value_or(0);
  cfg.threads = o.threads.value_or(1);
  return cfg;
}

const std::string& required(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw Error(ErrorCode::InvalidSpec, std::string("missing required option ") + flag);
  return *v;
}

CsvOptions csv_options(const Options& o) { return CsvOptions{!o.no_header, o.delimiter}; }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int cmd_fit(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset raw = load_csv(required(o.data, "--data"), parse_response_selector(required(o.response, "--response")),
                               csv_options(o));
  const std::string& out = required(o.out, "--out");
  const EnsembleConfig cfg = ensemble_config(o);
  resolve_window(cfg, raw.n(), raw.p());
  StandardizeResult st = standardize(raw);
  for (const auto& w : st.warnings) std::cerr << "warning: " << w << "\n";
  const Ensemble ens = fit_ensemble(st.data.X, st.data.y, cfg, st.stats);
  save_ensemble(ens, cfg, out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const ModelWindow& w = ens.window();
  std::cout << "fitted " << ens.size() << " models on n=" << raw.n() << ", p=" << raw.p() << "\n";
  std::cout << "window: m_min=" << w.m_min << " m_max=" << w.m_max << " s=" << w.s << "\n";
  if (!ens.dropped().empty()) std::cout << "dropped members: " << ens.dropped().size() << "\n";
  std::vector<std::size_t> order(ens.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ens.weights()[a] > ens.weights()[b]; });
  std::cout << "top weights:\n";
  for (std::size_t k = 0; k < std::min<std::size_t>(5, order.size()); ++k) {
    const auto& mem = ens.members()[order[k]];
    char line[128];
    std::snprintf(line, sizeof line, "  member %zu (m=%zu, psi=%.3f): %.6g\n", mem.index, mem.projection.m(),
                  mem.projection.spec().psi, ens.weights()[order[k]]);
    std::cout << line;
  }
  char tline[64];
  std::snprintf(tline, sizeof tline, "wall time: %.3f s\n", secs);
  std::cout << tline << "artifact: " << out << "\n";
  return kOk;
}

int cmd_predict(const Options& o) {
  const Artifact art = load_ensemble(required(o.model, "--model"));
  const CsvTable table = read_csv(required(o.data, "--data"), csv_options(o));
  Eigen::MatrixXd X = table.values;
  if (o.response) {
    // Drop the response column when the file still carries one.
    const std::size_t col = resolve_column(table, parse_response_selector(*o.response));
    Eigen::MatrixXd kept(X.rows(), X.cols() - 1);
    for (Eigen::Index j = 0, k = 0; j < X.cols(); ++j) {
      if (static_cast<std::size_t>(j) != col) kept.col(k++) = X.col(j);
    }
    X = std::move(kept);
  }
  if (static_cast<std::size_t>(X.cols()) != art.ensemble.p()) {
    throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(art.ensemble.p()) +
                                                  " predictors, data has " + std::to_string(X.cols()));
  }
  const double level = o.level.value_or(art.config.interval_level);
  const auto preds = predict_raw(art.ensemble, X, level, o.threads.value_or(1));
  std::ostringstream os;
  os << "mean,lo,hi\n";
  for (const auto& p : preds) os << fmt17(p.mean) << ',' << fmt17(p.lo) << ',' << fmt17(p.hi) << '\n';
  if (o.out) {
    write_text_file(*o.out, os.str());
  } else {
    std::cout << os.str();
  }
  return kOk;
}

int cmd_simulate(const Options& o) {
  if (o.scenarios.empty()) throw Error(ErrorCode::InvalidSpec, "missing required option --scenario");
  const std::string& out = required(o.out, "--out");
  std::vector<ScenarioId> ids;
  for (const auto& s : o.scenarios) ids.push_back(parse_scenario_id(s));
  std::vector<Method> methods;
  for (const auto& m : o.methods.empty() ? std::vector<std::string>{"BCR"} : o.methods) {
    try {
      methods.push_back(parse_method(m));
    } catch (const Error&) {
      throw Error(ErrorCode::InvalidSpec, "unknown method '" + m + "'");
    }
  }
  SimulationOptions sim;
  sim.replicates = o.replicates.value_or(100);
  sim.seed = o.seed.value_or(0);
  sim.threads = o.threads.value_or(1);
  sim.ensemble = ensemble_config(o);
  std::vector<MetricsReport> reports;
  for (ScenarioId id : ids) {
    const Scenario sc = scenario(id, o.hd_p.value_or(kDefaultHighDimP));
    for (Method m : methods) {
      reports.push_back(run_replicates(sc, m, sim));
      const auto& r = reports.back();
      char line[200];
      std::snprintf(line, sizeof line, "%s %s: mspe=%.4f (se %.4f) coverage=%.3f pi_len=%.3f [%.1f s]\n",
                    r.scenario.c_str(), r.method.c_str(), r.mspe_mean, r.mspe_boot_se, r.coverage,
                    r.pi_len_median, r.wall_time_s);
      std::cerr << line;
    }
  }
  std::string csv = report_csv_header() + "\n";
  for (const auto& r : reports) csv += report_csv_row(r) + "\n";
  write_text_file(out + ".json", reports_to_json(reports));
  write_text_file(out + ".csv", csv);
  std::cout << format_report_table(reports);
  return kOk;
}

int cmd_report(const Options& o) {
  std::vector<std::string> files = o.inputs;
  if (o.data) files.insert(files.begin(), *o.data);
  if (files.empty()) throw Error(ErrorCode::InvalidSpec, "report needs at least one JSON report (--data)");
  std::vector<MetricsReport> all;
  for (const auto& f : files) {
    auto part = reports_from_json(read_text_file(f));
    all.insert(all.end(), part.begin(), part.end());
  }
  const std::string table = format_report_table(all);
  if (o.out) {
    write_text_file(*o.out, table);
  } else {
    std::cout << table;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian compressed regression"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON file with option defaults (flags win)");
    sub->add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  };
  auto add_ensemble = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--m-min", o.m_min, "smallest compressed dimension");
    sub->add_option("--m-max", o.m_max, "largest compressed dimension");
    sub->add_option("--s", o.s, "number of averaged models");
    sub->add_option("--psi-low", o.psi_low, "lower end of the psi range");
    sub->add_option("--psi-high", o.psi_high, "upper end of the psi range");
    sub->add_option("--level", o.level, "predictive interval level");
    sub->add_option("--prior-variance", o.prior_variance, "prior variance of compressed coefficients");
  };
  auto add_csv = [&](CLI::App* sub) {
    sub->add_flag("--no-header", o.no_header, "CSV has no header row");
    sub->add_option("--delimiter", o.delimiter, "CSV field delimiter");
  };

  CLI::App* fit = app.add_subcommand("fit", "fit a model-averaged ensemble to a CSV");
  add_common(fit);
  add_ensemble(fit);
  add_csv(fit);
  fit->add_option("--data", o.data, "training CSV");
  fit->add_option("--response", o.response, "response column name or zero-based index");
  fit->add_option("--out", o.out, "artifact path");

  CLI::App* predict = app.add_subcommand("predict", "predict mean and interval for new rows");
  add_common(predict);
  add_csv(predict);
  predict->add_option("--model", o.model, "artifact written by fit");
  predict->add_option("--data", o.data, "feature CSV");
  predict->add_option("--response", o.response, "column to ignore if present");
  predict->add_option("--level", o.level, "interval level (default: the level used at fit time)");
  predict->add_option("--out", o.out, "output CSV (default stdout)");

  CLI::App* simulate = app.add_subcommand("simulate", "run benchmark scenarios");
  add_common(simulate);
  add_ensemble(simulate);
  simulate->add_option("--scenario", o.scenarios, "M1..M6, HD1, HD2")->delimiter(',');
  simulate->add_option("--method", o.methods, "BCR and/or ridge")->delimiter(',');
  simulate->add_option("--replicates", o.replicates, "replicates per scenario");
  simulate->add_option("--hd-p", o.hd_p, "predictor count for HD scenarios");
  simulate->add_option("--out", o.out, "output prefix; writes <out>.json and <out>.csv");

  CLI::App* report = app.add_subcommand("report", "tabulate JSON reports");
  add_common(report);
  report->add_option("--data", o.data, "report JSON");
  report->add_option("inputs", o.inputs, "more report JSON files");
  report->add_option("--out", o.out, "output text file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    merge_config(o);
    if (fit->parsed()) return cmd_fit(o);
    if (predict->parsed()) return cmd_predict(o);
    if (simulate->parsed()) return cmd_simulate(o);
    return cmd_report(o);
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFit;
  }
}
