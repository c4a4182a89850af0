#include "conformal/lab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "conformal/core/rng.hpp"

namespace conformal::lab {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Generates an AR(1) path around a (possibly shifting) mean.  The
// first `burn_in` steps are discarded so the path starts near
// stationarity.
std::vector<double> ar1_path(std::size_t length, double rho, double sigma,
                             const std::vector<double>& mean, std::mt19937_64& rng) {
  constexpr std::size_t burn_in = 100;
  std::normal_distribution<double> noise(0.0, 1.0);
  double dev = 0.0;
  for (std::size_t t = 0; t < burn_in; ++t) dev = rho * dev + sigma * noise(rng);
  std::vector<double> path(length);
  for (std::size_t t = 0; t < length; ++t) {
    dev = rho * dev + sigma * noise(rng);
    path[t] = mean[t] + dev;
  }
  return path;
}

core::Dataset lag_embed(const std::vector<double>& path, std::size_t order) {
  core::Dataset data(order, 1);
  if (path.size() <= order) throw std::invalid_argument("series shorter than lag order");
  data.reserve(path.size() - order);
  std::vector<double> x(order);
  for (std::size_t t = order; t < path.size(); ++t) {
    for (std::size_t j = 0; j < order; ++j) x[j] = path[t - 1 - j];
    data.add_row(x, {&path[t], 1});
  }
  return data;
}

core::Dataset generate_iid_regression(const GeneratorSpec& spec) {
  require(spec.feature_dim >= 1, "feature_dim must be >= 1");
  const auto w = iid_regression_weights(spec.feature_dim);
  std::mt19937_64 rng(core::derive_seed(spec.seed, 1));
  std::uniform_real_distribution<double> feat(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  core::Dataset data(spec.feature_dim, 1);
  data.reserve(spec.n);
  std::vector<double> x(spec.feature_dim);
  for (std::size_t i = 0; i < spec.n; ++i) {
    double y = w.back();  // intercept
    for (std::size_t j = 0; j < spec.feature_dim; ++j) {
      x[j] = feat(rng);
      y += w[j] * x[j];
    }
    y += spec.noise_scale * noise(rng);
    data.add_row(x, {&y, 1});
  }
  return data;
}

core::Dataset generate_ar1(const GeneratorSpec& spec) {
  require(std::abs(spec.rho) < 1.0, "ar1 requires |rho| < 1");
  require(spec.order >= 1, "order must be >= 1");
  require(std::is_sorted(spec.changepoints.begin(), spec.changepoints.end()),
          "changepoints must be ascending");
  std::mt19937_64 rng(core::derive_seed(spec.seed, 2));
  const std::size_t length = spec.n + spec.order;
  std::vector<double> mean(length, 0.0);
  if (spec.kind == GeneratorSpec::Kind::shift_series) {
    double level = 0.0;
    std::size_t next = 0;
    for (std::size_t t = 0; t < length; ++t) {
      // Changepoint indices refer to emitted rows, offset by the lags.
      while (next < spec.changepoints.size() &&
             t == spec.changepoints[next] + spec.order) {
        level += spec.shift;
        ++next;
      }
      mean[t] = level;
    }
  }
  const auto path = ar1_path(length, spec.rho, spec.noise_scale, mean, rng);
  return lag_embed(path, spec.order);
}

core::Dataset generate_heteroscedastic(const GeneratorSpec& spec) {
  std::mt19937_64 rng(core::derive_seed(spec.seed, 3));
  std::uniform_real_distribution<double> feat(0.2, 5.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  core::Dataset data(1, 1);
  data.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double x = feat(rng);
    double eps = noise(rng);
    if (unit(rng) < 0.02) eps *= 6.0;  // rare heavy-tailed outliers
    const double y = 2.0 * x + heteroscedastic_sigma(spec, x) * eps;
    data.add_row({&x, 1}, {&y, 1});
  }
  return data;
}

}  // namespace

std::vector<double> iid_regression_weights(std::size_t feature_dim) {
  static constexpr double pattern[3] = {2.0, -1.0, 0.5};
  std::vector<double> w(feature_dim + 1);
  for (std::size_t j = 0; j < feature_dim; ++j) w[j] = pattern[j % 3];
  w[feature_dim] = 0.3;
  return w;
}

double heteroscedastic_sigma(const GeneratorSpec& spec, double x) {
  return spec.noise_scale * x;
}

core::Dataset generate_tabular(const GeneratorSpec& spec) {
  require(spec.n >= 1, "n must be >= 1");
  switch (spec.kind) {
    case GeneratorSpec::Kind::iid_regression:
      return generate_iid_regression(spec);
    case GeneratorSpec::Kind::ar1:
    case GeneratorSpec::Kind::shift_series:
      return generate_ar1(spec);
    case GeneratorSpec::Kind::heteroscedastic:
      return generate_heteroscedastic(spec);
    case GeneratorSpec::Kind::multi_horizon:
    case GeneratorSpec::Kind::safety_scores:
      break;
  }
  throw std::invalid_argument("spec kind does not produce a tabular dataset");
}

core::Dataset generate_series_windows(const GeneratorSpec& spec) {
  require(spec.kind == GeneratorSpec::Kind::multi_horizon, "kind must be multi_horizon");
  require(spec.n >= 1, "n must be >= 1");
  require(spec.t_in >= 2, "t_in must be >= 2");
  require(spec.horizon >= 1, "horizon must be >= 1");
  require(spec.correlation >= 0.0 && spec.correlation <= 1.0,
          "correlation must lie in [0, 1]");

  // Damped oscillator: every trajectory obeys the same second-order
  // linear recurrence, so a linear model on >= 2 lags predicts the
  // noiseless future exactly and the per-step residuals are exactly
  // the injected noise.
  constexpr double decay = 0.05;
  constexpr double omega = 0.35;
  const double lambda = std::sqrt(spec.correlation);
  const double indep = std::sqrt(1.0 - spec.correlation);

  std::mt19937_64 rng(core::derive_seed(spec.seed, 4));
  std::uniform_real_distribution<double> amp(0.8, 1.2);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::normal_distribution<double> noise(0.0, 1.0);

  core::Dataset data(spec.t_in, spec.horizon);
  data.reserve(spec.n);
  std::vector<double> x(spec.t_in), y(spec.horizon);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double a = amp(rng);
    const double p = phase(rng);
    for (std::size_t t = 0; t < spec.t_in; ++t) {
      x[t] = a * std::exp(-decay * static_cast<double>(t)) *
             std::sin(omega * static_cast<double>(t) + p);
    }
    const double shared = noise(rng);
    for (std::size_t h = 0; h < spec.horizon; ++h) {
      const auto t = static_cast<double>(spec.t_in + h);
      const double clean = a * std::exp(-decay * t) * std::sin(omega * t + p);
      // Noise widens with the step; `correlation` couples the steps
      // through one shared draw.
      const double sigma_h = spec.noise_scale * (1.0 + 0.35 * static_cast<double>(h));
      y[h] = clean + sigma_h * (lambda * shared + indep * noise(rng));
    }
    data.add_row(x, y);
  }
  return data;
}

std::vector<safety::SafetyRecord> generate_safety(const GeneratorSpec& spec) {
  require(spec.kind == GeneratorSpec::Kind::safety_scores, "kind must be safety_scores");
  require(spec.n >= 1, "n must be >= 1");
  require(spec.predictor_noise >= 0.0, "predictor_noise must be >= 0");
  std::mt19937_64 rng(core::derive_seed(spec.seed, 5));
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<safety::SafetyRecord> records(spec.n);
  for (auto& rec : records) {
    rec.phi = spec.noise_scale * noise(rng);
    rec.phi_hat = rec.phi + spec.predictor_noise * noise(rng);
  }
  return records;
}

}  // namespace conformal::lab
