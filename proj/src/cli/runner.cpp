#include "conformal/cli/runner.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "conformal/cli/csv.hpp"
#include "conformal/core/rng.hpp"
#include "conformal/core/split_conformal.hpp"
#include "conformal/lab/forecasters.hpp"
#include "conformal/lab/metrics.hpp"
#include "conformal/multihorizon/copula.hpp"
#include "conformal/online/aci.hpp"
#include "conformal/online/enbpi.hpp"

#ifndef CONFORMAL_VERSION
#define CONFORMAL_VERSION "0.0.0"
#endif

namespace conformal::cli {

namespace {

using nlohmann::json;

// Non-finite doubles have no JSON number form; emit them as strings so
// the files stay parseable.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::shared_ptr<const core::Forecaster> fit_model(const ModelConfig& model,
                                                  const core::Dataset& train,
                                                  double alpha) {
  if (model.kind == "linear") {
    return std::make_shared<lab::LinearForecaster>(
        lab::LinearForecaster::fit(train, model.ridge));
  }
  if (model.kind == "knn") {
    if (model.k > train.size()) {
      throw DataError("model.k exceeds the number of training rows");
    }
    return std::make_shared<lab::KnnForecaster>(lab::KnnForecaster::fit(train, model.k));
  }
  if (model.kind == "quantile") {
    return std::make_shared<lab::LinearQuantileForecaster>(
        lab::LinearQuantileForecaster::fit(train, model.lower.value_or(alpha / 2.0),
                                           model.upper.value_or(1.0 - alpha / 2.0)));
  }
  return std::make_shared<lab::ConstantForecaster>(lab::ConstantForecaster::fit(train));
}

online::ForecasterRecipe recipe_for(const ModelConfig& model) {
  if (model.kind == "linear") return lab::linear_recipe(model.ridge);
  if (model.kind == "knn") return lab::knn_recipe(model.k);
  return lab::constant_recipe();
}

core::ScoreFunction score_for(const ExperimentConfig& cfg,
                              const std::shared_ptr<const core::Forecaster>& model,
                              const core::Dataset& train) {
  if (cfg.score == "normalized") {
    const std::size_t k = std::min(cfg.scale_k, train.size());
    return core::ScoreFunction::normalized_residual(
        std::make_shared<lab::KnnScaleEstimator>(model, train, k));
  }
  if (cfg.score == "quantile_band") return core::ScoreFunction::quantile_band();
  return core::ScoreFunction::absolute_residual();
}

core::Dataset load_tabular(const ExperimentConfig& cfg) {
  if (cfg.data.path) return read_series_csv(*cfg.data.path);
  return lab::generate_tabular(*cfg.data.generator);
}

core::Dataset load_windows(const ExperimentConfig& cfg) {
  if (cfg.data.path) {
    return windows_from_series(read_multi_series_csv(*cfg.data.path), cfg.t_in,
                               cfg.horizon);
  }
  return lab::generate_series_windows(*cfg.data.generator);
}

std::vector<safety::SafetyRecord> load_safety(const ExperimentConfig& cfg) {
  if (cfg.data.path) return read_safety_csv(*cfg.data.path);
  return lab::generate_safety(*cfg.data.generator);
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

struct OutputBundle {
  json metrics;
  std::string intervals_csv;
  json intervals_json = json::array();
  std::string plot_csv;
};

// --- split -----------------------------------------------------------

OutputBundle run_split(const ExperimentConfig& cfg) {
  const core::Dataset data = load_tabular(cfg);
  if (data.size() < 4) throw DataError("split needs at least 4 rows");

  const auto order = shuffled_indices(data.size(), core::derive_seed(cfg.seed, 101));
  auto n_test = static_cast<std::size_t>(
      std::llround(cfg.test_fraction * static_cast<double>(data.size())));
  n_test = std::clamp<std::size_t>(n_test, 1, data.size() - 2);
  const std::span<const std::size_t> idx(order);
  const core::Dataset test = data.rows(idx.subspan(0, n_test));
  const core::Dataset rest = data.rows(idx.subspan(n_test));

  const auto sd =
      core::split_dataset(rest, cfg.train_fraction, core::derive_seed(cfg.seed, 102));
  const auto model = fit_model(cfg.model, sd.train, cfg.alpha);
  const auto score = score_for(cfg, model, sd.train);
  const double threshold =
      core::calibrate(sd.cal, *model, score, core::ConfidenceLevel(cfg.alpha));

  std::vector<core::PredictionInterval> intervals;
  intervals.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    intervals.push_back(core::predict_interval(test.x(i), *model, score, threshold));
  }

  const std::size_t m = data.target_dim();
  OutputBundle out;
  out.metrics = {{"method", cfg.method},
                 {"alpha", cfg.alpha},
                 {"coverage", lab::coverage(intervals, test)},
                 {"mean_width", json_number(lab::mean_width(intervals))},
                 {"threshold", json_number(threshold)},
                 {"n_train", sd.train.size()},
                 {"n_cal", sd.cal.size()},
                 {"n_test", test.size()}};

  std::string& csv = out.intervals_csv;
  csv += "t";
  const auto suffix = [m](const char* base, std::size_t j) {
    return m == 1 ? std::string(base) : std::string(base) + std::to_string(j + 1);
  };
  for (std::size_t j = 0; j < m; ++j) csv += "," + suffix("lo", j);
  for (std::size_t j = 0; j < m; ++j) csv += "," + suffix("hi", j);
  for (std::size_t j = 0; j < m; ++j) csv += "," + suffix("y", j);
  csv += ",covered\n";
  std::string plot = "t,width,covered\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    const bool covered = intervals[i].contains(test.y(i));
    csv += std::to_string(i);
    for (std::size_t j = 0; j < m; ++j) csv += "," + format_double(intervals[i].lo(j));
    for (std::size_t j = 0; j < m; ++j) csv += "," + format_double(intervals[i].hi(j));
    for (std::size_t j = 0; j < m; ++j) csv += "," + format_double(test.y(i)[j]);
    csv += covered ? ",1\n" : ",0\n";

    json rec;
    rec["t"] = i;
    rec["lo"] = json::array();
    rec["hi"] = json::array();
    rec["y"] = json::array();
    for (std::size_t j = 0; j < m; ++j) {
      rec["lo"].push_back(json_number(intervals[i].lo(j)));
      rec["hi"].push_back(json_number(intervals[i].hi(j)));
      rec["y"].push_back(test.y(i)[j]);
    }
    rec["covered"] = covered;
    out.intervals_json.push_back(rec);

    plot += std::to_string(i) + "," + format_double(intervals[i].width()) +
            (covered ? ",1\n" : ",0\n");
  }
  out.plot_csv = std::move(plot);
  return out;
}

// --- online methods ---------------------------------------------------

std::size_t carve_train_length(const ExperimentConfig& cfg, std::size_t n) {
  std::size_t t0 = cfg.train_length == 0 ? n / 2 : cfg.train_length;
  if (t0 < 2 || t0 >= n) {
    throw DataError("train_length must leave at least one stream row (2 <= T0 < n)");
  }
  return t0;
}

json stream_metrics(const ExperimentConfig& cfg,
                    const std::vector<online::StreamRecord>& records) {
  double misses = 0.0;
  double width = 0.0;
  for (const auto& r : records) {
    misses += r.err ? 1.0 : 0.0;
    width += r.hi - r.lo;
  }
  const auto n = static_cast<double>(records.size());
  return {{"method", cfg.method},
          {"alpha", cfg.alpha},
          {"coverage", 1.0 - misses / n},
          {"mean_width", json_number(width / n)},
          {"n_stream", records.size()}};
}

std::string stream_csv(const std::vector<online::StreamRecord>& records) {
  std::string csv = "t,lo,hi,y,err,alpha\n";
  for (const auto& r : records) {
    csv += std::to_string(r.t) + "," + format_double(r.lo) + "," + format_double(r.hi) +
           "," + format_double(r.y) + (r.err ? ",1," : ",0,") + format_double(r.alpha) +
           "\n";
  }
  return csv;
}

json stream_json(const std::vector<online::StreamRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) {
    arr.push_back({{"t", r.t},
                   {"lo", json_number(r.lo)},
                   {"hi", json_number(r.hi)},
                   {"y", r.y},
                   {"err", r.err},
                   {"alpha", r.alpha}});
  }
  return arr;
}

std::string stream_plot(const ExperimentConfig& cfg,
                        const std::vector<online::StreamRecord>& records) {
  std::vector<std::uint8_t> errs(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) errs[i] = records[i].err ? 1 : 0;
  const std::size_t w = std::min(cfg.plot_window, errs.size());
  const auto rolling = lab::rolling_coverage(errs, w);
  std::string plot = "t,rolling_cov,alpha_t,target\n";
  const double target = 1.0 - cfg.alpha;
  for (std::size_t i = 0; i < rolling.size(); ++i) {
    const std::size_t t = i + w - 1;
    plot += std::to_string(records[t].t) + "," + format_double(rolling[i]) + "," +
            format_double(records[t].alpha) + "," + format_double(target) + "\n";
  }
  return plot;
}

OutputBundle run_enbpi(const ExperimentConfig& cfg) {
  const core::Dataset data = load_tabular(cfg);
  if (data.target_dim() != 1) throw DataError("enbpi stream needs a scalar target");
  const std::size_t t0 = carve_train_length(cfg, data.size());
  core::Dataset train = data.rows(0, t0);
  core::Dataset stream = data.rows(t0, data.size());

  auto state = online::enbpi_fit(
      train, recipe_for(cfg.model), cfg.ensemble,
      cfg.aggregation == "median" ? online::Aggregation::median
                                  : online::Aggregation::mean,
      cfg.window, core::derive_seed(cfg.seed, 103));
  const auto records = online::enbpi_run(state, stream, core::ConfidenceLevel(cfg.alpha));

  OutputBundle out;
  out.metrics = stream_metrics(cfg, records);
  out.metrics["ensemble"] = cfg.ensemble;
  out.metrics["aggregation"] = cfg.aggregation;
  out.metrics["window"] = cfg.window;
  out.metrics["n_train"] = t0;
  out.metrics["never_left_out"] = state.never_left_out;
  out.intervals_csv = stream_csv(records);
  out.intervals_json = stream_json(records);
  out.plot_csv = stream_plot(cfg, records);
  return out;
}

OutputBundle run_aci(const ExperimentConfig& cfg) {
  const core::Dataset data = load_tabular(cfg);
  if (data.target_dim() != 1) throw DataError("aci stream needs a scalar target");
  const std::size_t t0 = carve_train_length(cfg, data.size());
  core::Dataset train = data.rows(0, t0);
  core::Dataset stream = data.rows(t0, data.size());

  const auto model = fit_model(cfg.model, train, cfg.alpha);
  const auto score = score_for(cfg, model, train);

  auto state = online::make_aci_state(cfg.alpha, cfg.gamma, cfg.aci_window);
  // Warm the score window with in-sample residuals from the training
  // tail: the most recent scores available before the stream starts.
  const std::size_t warm = std::min(cfg.aci_window, t0);
  for (std::size_t i = t0 - warm; i < t0; ++i) {
    online::aci_observe_score(
        state, score.evaluate(train.y(i), score.context_for(*model, train.x(i))));
  }
  const auto records = online::aci_run(state, stream, *model, score);
  const auto [bound_lhs, bound_rhs] = online::aci_bound_check(state);

  OutputBundle out;
  out.metrics = stream_metrics(cfg, records);
  out.metrics["gamma"] = cfg.gamma;
  out.metrics["window"] = cfg.aci_window;
  out.metrics["n_train"] = t0;
  out.metrics["alpha_final"] = state.alpha;
  out.metrics["bound_lhs"] = json_number(bound_lhs);
  out.metrics["bound_rhs"] = json_number(bound_rhs);
  out.intervals_csv = stream_csv(records);
  out.intervals_json = stream_json(records);
  out.plot_csv = stream_plot(cfg, records);
  return out;
}

// --- multi-horizon ----------------------------------------------------

OutputBundle run_multihorizon(const ExperimentConfig& cfg) {
  const core::Dataset data = load_windows(cfg);
  const std::size_t n = data.size();
  const std::size_t n_train = cfg.n_train == 0 ? n / 2 : cfg.n_train;
  const std::size_t n_cal =
      cfg.n_cal == 0 ? (n > n_train ? (n - n_train) / 2 : 0) : cfg.n_cal;
  if (n_train < 1 || n_cal < 2 || n_train + n_cal >= n) {
    throw DataError("need n_train >= 1, n_cal >= 2, and at least one test series");
  }
  const core::Dataset train = data.rows(0, n_train);
  const core::Dataset cal = data.rows(n_train, n_train + n_cal);
  const core::Dataset test = data.rows(n_train + n_cal, n);

  const auto model = fit_model(cfg.model, train, cfg.alpha);
  const auto scores = multi::collect_horizon_scores(cal, *model);

  std::vector<double> thresholds;
  double epsilon = 0.0;
  json extra;
  if (cfg.method == "cfrnn") {
    epsilon = cfg.alpha;
    thresholds =
        multi::independent_step_calibrate(scores, core::ConfidenceLevel(cfg.alpha));
    extra["per_step_level"] =
        multi::per_step_level(core::ConfidenceLevel(cfg.alpha), scores.horizon());
  } else {
    epsilon = cfg.epsilon;
    const auto calib = multi::copula_calibrate(scores, cfg.epsilon);
    thresholds = calib.thresholds;
    extra["achieved"] = calib.achieved;
    extra["shared_rank"] = calib.shared_rank;
    extra["escalated"] = calib.escalated;
  }

  std::vector<multi::RegionSet> regions;
  regions.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    regions.push_back(multi::predict_regions(test.x(i), *model, thresholds, epsilon));
  }

  OutputBundle out;
  out.metrics = {{"method", cfg.method},
                 {"joint_coverage", lab::joint_coverage(regions, test)},
                 {"mean_total_width", json_number(lab::mean_total_width(regions))},
                 {"horizon", scores.horizon()},
                 {"n_train", n_train},
                 {"n_cal", n_cal},
                 {"n_test", test.size()}};
  out.metrics[cfg.method == "cfrnn" ? "alpha" : "epsilon"] = epsilon;
  json jt = json::array();
  for (double t : thresholds) jt.push_back(json_number(t));
  out.metrics["thresholds"] = jt;
  for (auto& [k, v] : extra.items()) out.metrics[k] = v;

  std::string csv = "series,step,lo,hi,y\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    for (std::size_t h = 0; h < thresholds.size(); ++h) {
      csv += std::to_string(i) + "," + std::to_string(h) + "," +
             format_double(regions[i].steps[h].lo(0)) + "," +
             format_double(regions[i].steps[h].hi(0)) + "," +
             format_double(test.y(i)[h]) + "\n";
      out.intervals_json.push_back({{"series", i},
                                    {"step", h},
                                    {"lo", json_number(regions[i].steps[h].lo(0))},
                                    {"hi", json_number(regions[i].steps[h].hi(0))},
                                    {"y", test.y(i)[h]}});
    }
  }
  out.intervals_csv = std::move(csv);

  std::string plot = "step,threshold,mean_step_width\n";
  for (std::size_t h = 0; h < thresholds.size(); ++h) {
    double w = 0.0;
    for (const auto& r : regions) w += r.steps[h].width();
    plot += std::to_string(h) + "," + format_double(thresholds[h]) + "," +
            format_double(w / static_cast<double>(regions.size())) + "\n";
  }
  out.plot_csv = std::move(plot);
  return out;
}

// --- warning ----------------------------------------------------------

OutputBundle run_warning(const ExperimentConfig& cfg) {
  const auto records = load_safety(cfg);
  if (records.size() < 2) throw DataError("warning needs at least 2 records");
  const auto order = shuffled_indices(records.size(), core::derive_seed(cfg.seed, 104));
  auto n_cal = static_cast<std::size_t>(
      std::llround(cfg.cal_fraction * static_cast<double>(records.size())));
  n_cal = std::clamp<std::size_t>(n_cal, 1, records.size() - 1);
  std::vector<safety::SafetyRecord> cal, test;
  cal.reserve(n_cal);
  test.reserve(records.size() - n_cal);
  for (std::size_t i = 0; i < records.size(); ++i) {
    (i < n_cal ? cal : test).push_back(records[order[i]]);
  }

  safety::WarningSystem system;
  try {
    system = safety::calibrate_warning(cal, cfg.epsilon, cfg.phi_threshold);
  } catch (const std::invalid_argument& e) {
    // No unsafe calibration episodes is a property of the data.
    throw DataError(e.what());
  }
  const auto m = safety::evaluate_warning(system, test);

  OutputBundle out;
  out.metrics = {{"method", cfg.method},
                 {"epsilon", cfg.epsilon},
                 {"phi_threshold", cfg.phi_threshold},
                 {"alert_threshold", json_number(system.alert_threshold)},
                 {"detection_rate", json_number(m.detection_rate)},
                 {"false_alert_rate", json_number(m.false_alert_rate)},
                 {"unsafe_test", m.unsafe_count},
                 {"safe_test", m.safe_count},
                 {"alerts", m.alert_count},
                 {"n_cal", cal.size()},
                 {"n_test", test.size()}};

  std::string csv = "idx,phi,phi_hat,unsafe,alert\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    const bool uns = safety::unsafe(test[i], cfg.phi_threshold);
    const bool alert = safety::warn(system, test[i].phi_hat);
    csv += std::to_string(i) + "," + format_double(test[i].phi) + "," +
           format_double(test[i].phi_hat) + (uns ? ",1" : ",0") +
           (alert ? ",1\n" : ",0\n");
    out.intervals_json.push_back({{"idx", i},
                                  {"phi", test[i].phi},
                                  {"phi_hat", test[i].phi_hat},
                                  {"unsafe", uns},
                                  {"alert", alert}});
  }
  out.intervals_csv = csv;
  out.plot_csv = csv;  // the per-episode table is already plot-ready
  return out;
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
  OutputBundle out;
  if (cfg.method == "split") out = run_split(cfg);
  else if (cfg.method == "enbpi") out = run_enbpi(cfg);
  else if (cfg.method == "aci") out = run_aci(cfg);
  else if (cfg.method == "cfrnn" || cfg.method == "copulacpts") out = run_multihorizon(cfg);
  else if (cfg.method == "warning") out = run_warning(cfg);
  else throw ConfigError({"method '" + cfg.method + "' is not runnable"});

  const std::filesystem::path dir(cfg.out);
  json manifest;
  manifest["tool"] = "conformal";
  manifest["version"] = CONFORMAL_VERSION;
  manifest["config"] = config_to_json(cfg);
  write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
  write_text_atomic(dir / "metrics.json", out.metrics.dump(2) + "\n");
  if (cfg.format == "json") {
    write_text_atomic(dir / "intervals.json", out.intervals_json.dump(2) + "\n");
  } else {
    write_text_atomic(dir / "intervals.csv", out.intervals_csv);
  }
  write_text_atomic(dir / "plotdata.csv", out.plot_csv);
}

namespace {

void print_error(int code, const std::string& kind, const std::string& message,
                 const std::vector<std::string>& diagnostics) {
  json err;
  err["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
  if (!diagnostics.empty()) err["error"]["diagnostics"] = diagnostics;
  std::cerr << err.dump() << "\n";
}

json load_config_json(const std::string& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const std::exception& e) {
    throw ConfigError({std::string("cannot read config: ") + e.what()});
  }
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError({"config is not valid JSON: " + path});
  return j;
}

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Distribution-free prediction intervals and calibrated warnings"};
  app.require_subcommand(1);

  static const char* kRunMethods[] = {"split", "enbpi",      "aci",
                                      "cfrnn", "copulacpts", "warning"};
  std::map<std::string, CliOptions> opts;
  for (const char* name : kRunMethods) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " method");
    auto& o = opts[name];
    sub->add_option("--config", o.config_path, "experiment config (JSON)")->required();
    sub->add_option("--seed", o.seed, "override the config seed");
    sub->add_option("--out", o.out, "override the output directory");
    sub->add_option("--format", o.format, "intervals file format: csv or json");
  }
  auto& vo = opts["validate"];
  app.add_subcommand("validate", "check a config and report diagnostics")
      ->add_option("--config", vo.config_path, "experiment config (JSON)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(kExitConfigError, "config", e.what(), {});
    return kExitConfigError;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  const CliOptions& o = opts[sub];
  try {
    json j = load_config_json(o.config_path);
    if (sub == "validate") {
      const auto diags = validate_config(j);
      json report;
      report["valid"] = diags.empty();
      report["diagnostics"] = diags;
      std::cout << report.dump(2) << "\n";
      return diags.empty() ? kExitOk : kExitConfigError;
    }
    if (j.is_object()) {
      if (o.seed) j["seed"] = *o.seed;
      if (o.out) j["out"] = *o.out;
      if (o.format) j["format"] = *o.format;
    }
    ExperimentConfig cfg = parse_config(j);
    if (cfg.method != sub) {
      throw ConfigError({"config method '" + cfg.method + "' does not match subcommand '" +
                         sub + "'"});
    }
    run_experiment(cfg);
    json done;
    done["method"] = cfg.method;
    done["out"] = cfg.out;
    std::cout << done.dump() << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    print_error(kExitConfigError, "config", e.what(), e.diagnostics());
    return kExitConfigError;
  } catch (const DataError& e) {
    print_error(kExitDataError, "data", e.what(), {});
    return kExitDataError;
  } catch (const std::exception& e) {
    print_error(kExitNumericError, "numeric", e.what(), {});
    return kExitNumericError;
  }
}

}  // namespace conformal::cli
