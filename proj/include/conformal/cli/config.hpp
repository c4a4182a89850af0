#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conformal/lab/generators.hpp"

namespace conformal::cli {

// Invalid experiment configuration (exit code 2 at the CLI).  Carries
// one diagnostic per problem found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  [[nodiscard]] const std::vector<std::string>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  std::vector<std::string> diagnostics_;
};

struct ModelConfig {
  std::string kind = "linear";  // linear | knn | quantile | constant
  std::size_t k = 5;            // knn only
  double ridge = 0.0;           // linear only
  // quantile only; defaults derived from alpha when absent
  std::optional<double> lower;
  std::optional<double> upper;
};

struct DataConfig {
  std::optional<std::string> path;
  std::optional<lab::GeneratorSpec> generator;
};

// Fully resolved experiment description: every default filled in, so
// the manifest alone reproduces the run.
struct ExperimentConfig {
  std::string method;  // split | enbpi | aci | cfrnn | copulacpts | warning
  double alpha = 0.1;
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::string format = "csv";  // intervals file format: csv | json
  DataConfig data;
  ModelConfig model;
  std::string score = "absolute";  // absolute | normalized | quantile_band
  std::size_t scale_k = 25;        // normalized score: neighbourhood size

  // split
  double train_fraction = 0.5;
  double test_fraction = 0.25;

  // enbpi
  std::size_t ensemble = 20;
  std::string aggregation = "mean";  // mean | median
  std::size_t window = 10;
  std::size_t train_length = 0;  // 0: half the series

  // aci
  double gamma = 0.005;
  std::size_t aci_window = 100;

  // cfrnn / copulacpts
  std::size_t t_in = 10;
  std::size_t horizon = 5;
  std::size_t n_train = 0;  // 0: half the series
  std::size_t n_cal = 0;    // 0: half the remainder

  // warning
  double phi_threshold = 0.0;
  double cal_fraction = 0.5;

  // plotdata rolling window for the online methods
  std::size_t plot_window = 100;
};

// All problems with the given config; empty means valid.
[[nodiscard]] std::vector<std::string> validate_config(const nlohmann::json& j);

// Resolved config; throws ConfigError when validate_config is
// nonempty.
[[nodiscard]] ExperimentConfig parse_config(const nlohmann::json& j);

// The resolved config as JSON (every default made explicit).
[[nodiscard]] nlohmann::json config_to_json(const ExperimentConfig& cfg);

[[nodiscard]] nlohmann::json generator_to_json(const lab::GeneratorSpec& spec);

}  // namespace conformal::cli
