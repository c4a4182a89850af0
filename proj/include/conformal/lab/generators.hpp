#pragma once

#include <cstdint>
#include <vector>

#include "conformal/core/types.hpp"
#include "conformal/safety/warning.hpp"

namespace conformal::lab {

// Declarative description of a synthetic dataset.  The same spec and
// seed always produce the same data.
struct GeneratorSpec {
  enum class Kind {
    iid_regression,   // fixed linear signal + i.i.d. Gaussian noise
    ar1,              // stationary AR(1), lag features
    shift_series,     // AR(1) whose mean jumps at changepoints
    multi_horizon,    // damped-oscillator series, history -> k-step future
    heteroscedastic,  // noise scale grows linearly in x, rare outliers
    safety_scores,    // (phi, phi_hat) pairs for warning calibration
  };

  Kind kind = Kind::iid_regression;
  std::uint64_t seed = 0;
  std::size_t n = 0;            // rows (series for multi_horizon)
  double noise_scale = 1.0;

  // iid_regression
  std::size_t feature_dim = 1;

  // ar1 / shift_series
  double rho = 0.8;             // |rho| < 1
  std::size_t order = 1;        // number of lag features
  std::vector<std::size_t> changepoints;  // row indices where the mean jumps
  double shift = 0.0;           // jump height at each changepoint

  // multi_horizon
  std::size_t t_in = 10;
  std::size_t horizon = 5;
  double correlation = 0.0;     // cross-step residual correlation in [0, 1]

  // safety_scores
  double predictor_noise = 0.3;
};

// Weights of the iid_regression signal for a given feature dimension;
// exposed so tests can check recovery.  Pattern 2, -1, 0.5, 2, ... with
// intercept 0.3.
[[nodiscard]] std::vector<double> iid_regression_weights(std::size_t feature_dim);

// Noise standard deviation of the heteroscedastic generator at x
// (outliers excluded): noise_scale * x.
[[nodiscard]] double heteroscedastic_sigma(const GeneratorSpec& spec, double x);

// Tabular kinds: iid_regression, ar1, shift_series, heteroscedastic.
// Rows of time-series kinds are in time order.
[[nodiscard]] core::Dataset generate_tabular(const GeneratorSpec& spec);

// multi_horizon kind: one row per series, features = t_in observed
// steps, targets = the next `horizon` steps.
[[nodiscard]] core::Dataset generate_series_windows(const GeneratorSpec& spec);

// safety_scores kind.
[[nodiscard]] std::vector<safety::SafetyRecord> generate_safety(const GeneratorSpec& spec);

}  // namespace conformal::lab
