#include "conformal/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace conformal::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kMethods = {"split", "enbpi",      "aci",
                                        "cfrnn", "copulacpts", "warning"};

bool is_tabular_method(const std::string& m) {
  return m == "split" || m == "enbpi" || m == "aci";
}
bool is_multihorizon_method(const std::string& m) {
  return m == "cfrnn" || m == "copulacpts";
}
bool uses_epsilon(const std::string& m) { return m == "copulacpts" || m == "warning"; }

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed, std::vector<std::string>& diags) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      diags.push_back(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
struct Field {
  std::optional<T> value;
  bool present = false;
};

Field<double> get_number(const json& obj, const std::string& where, const char* key,
                         std::vector<std::string>& diags) {
  Field<double> f;
  if (!obj.contains(key)) return f;
  f.present = true;
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    diags.push_back(where + "." + key + " must be a number");
    return f;
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    diags.push_back(where + "." + key + " must be finite");
    return f;
  }
  f.value = d;
  return f;
}

Field<std::uint64_t> get_uint(const json& obj, const std::string& where, const char* key,
                              std::vector<std::string>& diags) {
  Field<std::uint64_t> f;
  if (!obj.contains(key)) return f;
  f.present = true;
  const auto& v = obj.at(key);
  if (v.is_number_unsigned()) {
    f.value = v.get<std::uint64_t>();
  } else if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    f.value = static_cast<std::uint64_t>(v.get<std::int64_t>());
  } else {
    diags.push_back(where + "." + key + " must be a nonnegative integer");
  }
  return f;
}

Field<std::string> get_string(const json& obj, const std::string& where, const char* key,
                              std::vector<std::string>& diags) {
  Field<std::string> f;
  if (!obj.contains(key)) return f;
  f.present = true;
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    diags.push_back(where + "." + key + " must be a string");
    return f;
  }
  f.value = v.get<std::string>();
  return f;
}

void check_unit_interval(const Field<double>& f, const std::string& name,
                         std::vector<std::string>& diags) {
  if (f.value && (!(*f.value > 0.0) || !(*f.value < 1.0))) {
    diags.push_back(name + " must lie in (0, 1)");
  }
}

lab::GeneratorSpec::Kind parse_kind(const std::string& s, bool& ok) {
  using Kind = lab::GeneratorSpec::Kind;
  ok = true;
  if (s == "iid_regression") return Kind::iid_regression;
  if (s == "ar1") return Kind::ar1;
  if (s == "shift_series") return Kind::shift_series;
  if (s == "multi_horizon") return Kind::multi_horizon;
  if (s == "heteroscedastic") return Kind::heteroscedastic;
  if (s == "safety_scores") return Kind::safety_scores;
  ok = false;
  return Kind::iid_regression;
}

const char* kind_name(lab::GeneratorSpec::Kind kind) {
  using Kind = lab::GeneratorSpec::Kind;
  switch (kind) {
    case Kind::iid_regression: return "iid_regression";
    case Kind::ar1: return "ar1";
    case Kind::shift_series: return "shift_series";
    case Kind::multi_horizon: return "multi_horizon";
    case Kind::heteroscedastic: return "heteroscedastic";
    case Kind::safety_scores: return "safety_scores";
  }
  return "?";
}

std::optional<lab::GeneratorSpec> build_generator(const json& g,
                                                  const std::string& method,
                                                  std::uint64_t default_seed,
                                                  std::vector<std::string>& diags) {
  using Kind = lab::GeneratorSpec::Kind;
  const std::string where = "data.generator";
  if (!g.is_object()) {
    diags.push_back(where + " must be an object");
    return std::nullopt;
  }
  const auto kind_str = get_string(g, where, "kind", diags);
  if (!kind_str.value) {
    if (!kind_str.present) diags.push_back(where + ".kind is required");
    return std::nullopt;
  }
  bool ok = false;
  lab::GeneratorSpec spec;
  spec.kind = parse_kind(*kind_str.value, ok);
  if (!ok) {
    diags.push_back(where + ".kind '" + *kind_str.value + "' is not a generator kind");
    return std::nullopt;
  }

  std::set<std::string> allowed = {"kind", "n", "seed", "noise_scale"};
  switch (spec.kind) {
    case Kind::iid_regression: allowed.insert("feature_dim"); break;
    case Kind::ar1: allowed.insert({"rho", "order"}); break;
    case Kind::shift_series: allowed.insert({"rho", "order", "changepoints", "shift"}); break;
    case Kind::multi_horizon: allowed.insert({"t_in", "horizon", "correlation"}); break;
    case Kind::heteroscedastic: break;
    case Kind::safety_scores: allowed.insert("predictor_noise"); break;
  }
  check_keys(g, where, allowed, diags);

  const bool multih = is_multihorizon_method(method);
  if (multih && spec.kind != Kind::multi_horizon) {
    diags.push_back(method + " needs a multi_horizon generator, got " +
                    kind_name(spec.kind));
  }
  if (!multih && method != "warning" && spec.kind == Kind::multi_horizon) {
    diags.push_back("multi_horizon generator requires a multi-horizon method");
  }
  if (method == "warning" && spec.kind != Kind::safety_scores) {
    diags.push_back(std::string("warning needs a safety_scores generator, got ") +
                    kind_name(spec.kind));
  }
  if (method != "warning" && spec.kind == Kind::safety_scores) {
    diags.push_back("safety_scores generator requires the warning method");
  }

  const auto n = get_uint(g, where, "n", diags);
  if (!n.value || *n.value == 0) {
    diags.push_back(where + ".n must be a positive integer");
  } else {
    spec.n = *n.value;
  }
  spec.seed = get_uint(g, where, "seed", diags).value.value_or(default_seed);

  const auto noise = get_number(g, where, "noise_scale", diags);
  if (noise.value) {
    if (*noise.value < 0.0) diags.push_back(where + ".noise_scale must be >= 0");
    else spec.noise_scale = *noise.value;
  }

  if (const auto v = get_uint(g, where, "feature_dim", diags); v.value) {
    if (*v.value == 0) diags.push_back(where + ".feature_dim must be >= 1");
    else spec.feature_dim = *v.value;
  }
  if (const auto v = get_number(g, where, "rho", diags); v.value) {
    if (!(std::abs(*v.value) < 1.0)) diags.push_back(where + ".rho must satisfy |rho| < 1");
    else spec.rho = *v.value;
  }
  if (const auto v = get_uint(g, where, "order", diags); v.value) {
    if (*v.value == 0) diags.push_back(where + ".order must be >= 1");
    else spec.order = *v.value;
  }
  if (g.contains("changepoints")) {
    const auto& cp = g.at("changepoints");
    if (!cp.is_array()) {
      diags.push_back(where + ".changepoints must be an array of row indices");
    } else {
      for (const auto& e : cp) {
        if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0)) {
          diags.push_back(where + ".changepoints entries must be nonnegative integers");
          break;
        }
        spec.changepoints.push_back(e.get<std::uint64_t>());
      }
      if (!std::is_sorted(spec.changepoints.begin(), spec.changepoints.end())) {
        diags.push_back(where + ".changepoints must be ascending");
      }
    }
  }
  if (const auto v = get_number(g, where, "shift", diags); v.value) spec.shift = *v.value;
  if (const auto v = get_uint(g, where, "t_in", diags); v.value) {
    if (*v.value < 2) diags.push_back(where + ".t_in must be >= 2");
    else spec.t_in = *v.value;
  }
  if (const auto v = get_uint(g, where, "horizon", diags); v.value) {
    if (*v.value == 0) diags.push_back(where + ".horizon must be >= 1");
    else spec.horizon = *v.value;
  }
  if (const auto v = get_number(g, where, "correlation", diags); v.value) {
    if (*v.value < 0.0 || *v.value > 1.0) {
      diags.push_back(where + ".correlation must lie in [0, 1]");
    } else {
      spec.correlation = *v.value;
    }
  }
  if (const auto v = get_number(g, where, "predictor_noise", diags); v.value) {
    if (*v.value < 0.0) diags.push_back(where + ".predictor_noise must be >= 0");
    else spec.predictor_noise = *v.value;
  }
  return spec;
}

void build_model(const json& j, const std::string& method, ExperimentConfig& cfg,
                 std::vector<std::string>& diags) {
  if (!j.contains("model")) return;
  if (method == "warning") {
    diags.push_back("warning takes no model (the predictor is part of the data)");
    return;
  }
  const auto& m = j.at("model");
  if (!m.is_object()) {
    diags.push_back("model must be an object");
    return;
  }
  check_keys(m, "model", {"kind", "k", "ridge", "lower", "upper"}, diags);
  if (const auto kind = get_string(m, "model", "kind", diags); kind.value) {
    cfg.model.kind = *kind.value;
  }
  static const std::set<std::string> kKinds = {"linear", "knn", "quantile", "constant"};
  if (!kKinds.contains(cfg.model.kind)) {
    diags.push_back("model.kind '" + cfg.model.kind + "' is not a model kind");
  }
  if (cfg.model.kind == "quantile" && method != "split" && method != "aci") {
    diags.push_back("model.kind 'quantile' is only usable with split or aci");
  }
  if (const auto k = get_uint(m, "model", "k", diags); k.present) {
    if (cfg.model.kind != "knn") {
      diags.push_back("model.k applies only to kind 'knn'");
    } else if (!k.value || *k.value == 0) {
      diags.push_back("model.k must be >= 1");
    } else {
      cfg.model.k = *k.value;
    }
  }
  if (const auto r = get_number(m, "model", "ridge", diags); r.present) {
    if (cfg.model.kind != "linear") {
      diags.push_back("model.ridge applies only to kind 'linear'");
    } else if (!r.value || *r.value < 0.0) {
      diags.push_back("model.ridge must be >= 0");
    } else {
      cfg.model.ridge = *r.value;
    }
  }
  const auto lower = get_number(m, "model", "lower", diags);
  const auto upper = get_number(m, "model", "upper", diags);
  if ((lower.present || upper.present) && cfg.model.kind != "quantile") {
    diags.push_back("model.lower/upper apply only to kind 'quantile'");
  }
  check_unit_interval(lower, "model.lower", diags);
  check_unit_interval(upper, "model.upper", diags);
  cfg.model.lower = lower.value;
  cfg.model.upper = upper.value;
  if (lower.value && upper.value && !(*lower.value < *upper.value)) {
    diags.push_back("model.lower must be < model.upper");
  }
}

ExperimentConfig build(const json& j, std::vector<std::string>& diags) {
  ExperimentConfig cfg;
  if (!j.is_object()) {
    diags.push_back("config root must be a JSON object");
    return cfg;
  }

  const auto method = get_string(j, "config", "method", diags);
  if (!method.value) {
    if (!method.present) diags.push_back("method is required");
    return cfg;
  }
  cfg.method = *method.value;
  if (!kMethods.contains(cfg.method)) {
    diags.push_back("method '" + cfg.method + "' is not one of split, enbpi, aci, "
                    "cfrnn, copulacpts, warning");
    return cfg;
  }

  std::set<std::string> allowed = {"method", "seed", "out", "format", "data"};
  if (uses_epsilon(cfg.method)) allowed.insert("epsilon");
  else allowed.insert("alpha");
  if (cfg.method != "warning") allowed.insert("model");
  if (cfg.method == "split" || cfg.method == "aci") allowed.insert({"score", "scale_k"});
  if (cfg.method == "split") allowed.insert("split");
  if (cfg.method == "enbpi") allowed.insert("enbpi");
  if (cfg.method == "aci") allowed.insert("aci");
  if (is_multihorizon_method(cfg.method)) allowed.insert("multihorizon");
  if (cfg.method == "warning") allowed.insert("warning");
  if (is_tabular_method(cfg.method)) allowed.insert("plot_window");
  check_keys(j, "config", allowed, diags);

  const auto alpha = get_number(j, "config", "alpha", diags);
  check_unit_interval(alpha, "alpha", diags);
  if (alpha.value) cfg.alpha = *alpha.value;
  const auto epsilon = get_number(j, "config", "epsilon", diags);
  check_unit_interval(epsilon, "epsilon", diags);
  if (epsilon.value) cfg.epsilon = *epsilon.value;

  if (const auto v = get_uint(j, "config", "seed", diags); v.value) cfg.seed = *v.value;
  if (const auto v = get_string(j, "config", "out", diags); v.value) {
    if (v.value->empty()) diags.push_back("out must be a nonempty path");
    else cfg.out = *v.value;
  }
  if (const auto v = get_string(j, "config", "format", diags); v.value) {
    if (*v.value != "csv" && *v.value != "json") {
      diags.push_back("format must be 'csv' or 'json'");
    } else {
      cfg.format = *v.value;
    }
  }
  if (const auto v = get_uint(j, "config", "plot_window", diags); v.value) {
    if (*v.value == 0) diags.push_back("plot_window must be >= 1");
    else cfg.plot_window = *v.value;
  }

  build_model(j, cfg.method, cfg, diags);

  if (const auto v = get_string(j, "config", "score", diags); v.value) {
    if (*v.value != "absolute" && *v.value != "normalized" && *v.value != "quantile_band") {
      diags.push_back("score must be absolute, normalized, or quantile_band");
    } else {
      cfg.score = *v.value;
    }
  }
  if (cfg.score == "quantile_band" && cfg.model.kind != "quantile") {
    diags.push_back("score 'quantile_band' requires model.kind 'quantile'");
  }
  if (const auto v = get_uint(j, "config", "scale_k", diags); v.present) {
    if (cfg.score != "normalized") {
      diags.push_back("scale_k applies only to the normalized score");
    } else if (!v.value || *v.value == 0) {
      diags.push_back("scale_k must be >= 1");
    } else {
      cfg.scale_k = *v.value;
    }
  }

  if (j.contains("split")) {
    const auto& s = j.at("split");
    if (!s.is_object()) {
      diags.push_back("split must be an object");
    } else {
      check_keys(s, "split", {"train_fraction", "test_fraction"}, diags);
      const auto tf = get_number(s, "split", "train_fraction", diags);
      check_unit_interval(tf, "split.train_fraction", diags);
      if (tf.value) cfg.train_fraction = *tf.value;
      const auto ef = get_number(s, "split", "test_fraction", diags);
      check_unit_interval(ef, "split.test_fraction", diags);
      if (ef.value) cfg.test_fraction = *ef.value;
    }
  }

  if (j.contains("enbpi")) {
    const auto& s = j.at("enbpi");
    if (!s.is_object()) {
      diags.push_back("enbpi must be an object");
    } else {
      check_keys(s, "enbpi", {"ensemble", "aggregation", "window", "train_length"}, diags);
      if (const auto v = get_uint(s, "enbpi", "ensemble", diags); v.present) {
        if (!v.value || *v.value == 0) diags.push_back("enbpi.ensemble must be >= 1");
        else cfg.ensemble = *v.value;
      }
      if (const auto v = get_string(s, "enbpi", "aggregation", diags); v.value) {
        if (*v.value != "mean" && *v.value != "median") {
          diags.push_back("enbpi.aggregation must be 'mean' or 'median'");
        } else {
          cfg.aggregation = *v.value;
        }
      }
      if (const auto v = get_uint(s, "enbpi", "window", diags); v.present) {
        if (!v.value || *v.value == 0) diags.push_back("enbpi.window must be >= 1");
        else cfg.window = *v.value;
      }
      if (const auto v = get_uint(s, "enbpi", "train_length", diags); v.present) {
        if (!v.value || *v.value < 2) diags.push_back("enbpi.train_length must be >= 2");
        else cfg.train_length = *v.value;
      }
    }
  }

  if (j.contains("aci")) {
    const auto& s = j.at("aci");
    if (!s.is_object()) {
      diags.push_back("aci must be an object");
    } else {
      check_keys(s, "aci", {"gamma", "window", "train_length"}, diags);
      if (const auto v = get_number(s, "aci", "gamma", diags); v.present) {
        if (!v.value || *v.value < 0.0) diags.push_back("aci.gamma must be >= 0");
        else cfg.gamma = *v.value;
      }
      if (const auto v = get_uint(s, "aci", "window", diags); v.present) {
        if (!v.value || *v.value == 0) diags.push_back("aci.window must be >= 1");
        else cfg.aci_window = *v.value;
      }
      if (const auto v = get_uint(s, "aci", "train_length", diags); v.present) {
        if (!v.value || *v.value < 2) diags.push_back("aci.train_length must be >= 2");
        else cfg.train_length = *v.value;
      }
    }
  }

  const bool generator_multih =
      j.contains("data") && j.at("data").is_object() &&
      j.at("data").contains("generator") && j.at("data").at("generator").is_object();
  if (j.contains("multihorizon")) {
    const auto& s = j.at("multihorizon");
    if (!s.is_object()) {
      diags.push_back("multihorizon must be an object");
    } else {
      check_keys(s, "multihorizon", {"t_in", "horizon", "n_train", "n_cal"}, diags);
      const auto ti = get_uint(s, "multihorizon", "t_in", diags);
      const auto hz = get_uint(s, "multihorizon", "horizon", diags);
      if (generator_multih && (ti.present || hz.present)) {
        diags.push_back("multihorizon.t_in/horizon come from the generator; "
                        "set them there");
      }
      if (ti.value) {
        if (*ti.value == 0) diags.push_back("multihorizon.t_in must be >= 1");
        else cfg.t_in = *ti.value;
      }
      if (hz.present) {
        if (!hz.value || *hz.value == 0) diags.push_back("multihorizon.horizon must be >= 1");
        else cfg.horizon = *hz.value;
      }
      if (const auto v = get_uint(s, "multihorizon", "n_train", diags); v.value) {
        cfg.n_train = *v.value;
      }
      if (const auto v = get_uint(s, "multihorizon", "n_cal", diags); v.value) {
        cfg.n_cal = *v.value;
      }
    }
  }

  if (j.contains("warning")) {
    const auto& s = j.at("warning");
    if (!s.is_object()) {
      diags.push_back("warning must be an object");
    } else {
      check_keys(s, "warning", {"phi_threshold", "cal_fraction"}, diags);
      if (const auto v = get_number(s, "warning", "phi_threshold", diags); v.value) {
        cfg.phi_threshold = *v.value;
      }
      const auto cf = get_number(s, "warning", "cal_fraction", diags);
      check_unit_interval(cf, "warning.cal_fraction", diags);
      if (cf.value) cfg.cal_fraction = *cf.value;
    }
  }

  if (!j.contains("data")) {
    diags.push_back("data is required");
    return cfg;
  }
  const auto& d = j.at("data");
  if (!d.is_object()) {
    diags.push_back("data must be an object");
    return cfg;
  }
  check_keys(d, "data", {"path", "generator"}, diags);
  const bool has_path = d.contains("path");
  const bool has_gen = d.contains("generator");
  if (has_path == has_gen) {
    diags.push_back("data needs exactly one of 'path' or 'generator'");
    return cfg;
  }
  if (has_path) {
    const auto p = get_string(d, "data", "path", diags);
    if (p.value && !p.value->empty()) {
      cfg.data.path = *p.value;
    } else {
      diags.push_back("data.path must be a nonempty string");
    }
    if (is_multihorizon_method(cfg.method)) {
      if (!j.contains("multihorizon") || !j.at("multihorizon").is_object() ||
          !j.at("multihorizon").contains("t_in") ||
          !j.at("multihorizon").contains("horizon")) {
        diags.push_back("file-based " + cfg.method +
                        " requires multihorizon.t_in and multihorizon.horizon");
      }
    }
  } else {
    cfg.data.generator = build_generator(d.at("generator"), cfg.method, cfg.seed, diags);
    if (cfg.data.generator) {
      if (cfg.data.generator->kind == lab::GeneratorSpec::Kind::multi_horizon) {
        cfg.t_in = cfg.data.generator->t_in;
        cfg.horizon = cfg.data.generator->horizon;
      }
    }
  }
  return cfg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(diagnostics.empty() ? "invalid configuration"
                                             : diagnostics.front()),
      diagnostics_(std::move(diagnostics)) {}

std::vector<std::string> validate_config(const nlohmann::json& j) {
  std::vector<std::string> diags;
  (void)build(j, diags);
  return diags;
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  std::vector<std::string> diags;
  ExperimentConfig cfg = build(j, diags);
  if (!diags.empty()) throw ConfigError(std::move(diags));
  return cfg;
}

nlohmann::json generator_to_json(const lab::GeneratorSpec& spec) {
  using Kind = lab::GeneratorSpec::Kind;
  json g;
  g["kind"] = kind_name(spec.kind);
  g["n"] = spec.n;
  g["seed"] = spec.seed;
  g["noise_scale"] = spec.noise_scale;
  switch (spec.kind) {
    case Kind::iid_regression:
      g["feature_dim"] = spec.feature_dim;
      break;
    case Kind::ar1:
      g["rho"] = spec.rho;
      g["order"] = spec.order;
      break;
    case Kind::shift_series:
      g["rho"] = spec.rho;
      g["order"] = spec.order;
      g["changepoints"] = spec.changepoints;
      g["shift"] = spec.shift;
      break;
    case Kind::multi_horizon:
      g["t_in"] = spec.t_in;
      g["horizon"] = spec.horizon;
      g["correlation"] = spec.correlation;
      break;
    case Kind::heteroscedastic:
      break;
    case Kind::safety_scores:
      g["predictor_noise"] = spec.predictor_noise;
      break;
  }
  return g;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["method"] = cfg.method;
  if (uses_epsilon(cfg.method)) j["epsilon"] = cfg.epsilon;
  else j["alpha"] = cfg.alpha;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out;
  j["format"] = cfg.format;

  json d;
  if (cfg.data.path) d["path"] = *cfg.data.path;
  if (cfg.data.generator) d["generator"] = generator_to_json(*cfg.data.generator);
  j["data"] = d;

  if (cfg.method != "warning") {
    json m;
    m["kind"] = cfg.model.kind;
    if (cfg.model.kind == "knn") m["k"] = cfg.model.k;
    if (cfg.model.kind == "linear") m["ridge"] = cfg.model.ridge;
    if (cfg.model.kind == "quantile") {
      m["lower"] = cfg.model.lower.value_or(cfg.alpha / 2.0);
      m["upper"] = cfg.model.upper.value_or(1.0 - cfg.alpha / 2.0);
    }
    j["model"] = m;
  }
  if (cfg.method == "split" || cfg.method == "aci") {
    j["score"] = cfg.score;
    if (cfg.score == "normalized") j["scale_k"] = cfg.scale_k;
  }
  if (cfg.method == "split") {
    j["split"] = {{"train_fraction", cfg.train_fraction},
                  {"test_fraction", cfg.test_fraction}};
  }
  // train_length 0 means "half the series"; validation only accepts
  // explicit values >= 2, so the auto default is expressed by omission.
  if (cfg.method == "enbpi") {
    json e = {{"ensemble", cfg.ensemble},
              {"aggregation", cfg.aggregation},
              {"window", cfg.window}};
    if (cfg.train_length != 0) e["train_length"] = cfg.train_length;
    j["enbpi"] = e;
  }
  if (cfg.method == "aci") {
    json a = {{"gamma", cfg.gamma}, {"window", cfg.aci_window}};
    if (cfg.train_length != 0) a["train_length"] = cfg.train_length;
    j["aci"] = a;
  }
  if (is_multihorizon_method(cfg.method)) {
    json mh = {{"n_train", cfg.n_train}, {"n_cal", cfg.n_cal}};
    // With a generator the window shape lives in the generator spec;
    // repeating it here would make the emitted config self-reject.
    if (cfg.data.path) {
      mh["t_in"] = cfg.t_in;
      mh["horizon"] = cfg.horizon;
    }
    j["multihorizon"] = mh;
  }
  if (cfg.method == "warning") {
    j["warning"] = {{"phi_threshold", cfg.phi_threshold},
                    {"cal_fraction", cfg.cal_fraction}};
  }
  if (is_tabular_method(cfg.method)) j["plot_window"] = cfg.plot_window;
  return j;
}

}  // namespace conformal::cli
