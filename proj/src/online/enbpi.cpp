#include "conformal/online/enbpi.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "conformal/core/rng.hpp"

namespace conformal::online {

namespace {

double max_norm_residual(std::span<const double> y, std::span<const double> pred) {
  double r = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) r = std::max(r, std::abs(y[j] - pred[j]));
  return r;
}

// Componentwise aggregate over a (models x dim) prediction table.
std::vector<double> aggregate_rows(const std::vector<std::vector<double>>& preds,
                                   Aggregation how, std::size_t dim) {
  std::vector<double> out(dim);
  std::vector<double> column(preds.size());
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t b = 0; b < preds.size(); ++b) column[b] = preds[b][j];
    out[j] = aggregate(column, how);
  }
  return out;
}

}  // namespace

double aggregate(std::span<const double> values, Aggregation how) {
  if (values.empty()) throw std::invalid_argument("aggregate of an empty set");
  if (how == Aggregation::mean) {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  std::vector<double> work(values.begin(), values.end());
  const std::size_t n = work.size();
  std::nth_element(work.begin(), work.begin() + n / 2, work.end());
  double upper = work[n / 2];
  if (n % 2 == 1) return upper;
  double lower = *std::max_element(work.begin(), work.begin() + n / 2);
  return 0.5 * (lower + upper);
}

LooResult leave_one_out_residuals(
    std::span<const std::shared_ptr<const core::Forecaster>> models,
    const std::vector<std::vector<bool>>& membership, const core::Dataset& series,
    Aggregation how, Exec policy) {
  const std::size_t B = models.size();
  const std::size_t n = series.size();
  if (B == 0 || membership.size() != B) {
    throw std::invalid_argument("membership table does not match ensemble");
  }
  for (const auto& m : membership) {
    if (m.size() != n) throw std::invalid_argument("membership row length mismatch");
  }

  LooResult result;
  result.residuals.assign(n, 0.0);
  std::int64_t fallback_count = 0;

  const bool parallel = openmp_enabled(policy);
#pragma omp parallel for reduction(+ : fallback_count) schedule(static) if (parallel)
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::vector<double>> preds;
    preds.reserve(B);
    for (std::size_t b = 0; b < B; ++b) {
      if (!membership[b][i]) preds.push_back(models[b]->predict(series.x(i)));
    }
    if (preds.empty()) {
      ++fallback_count;
      for (std::size_t b = 0; b < B; ++b) preds.push_back(models[b]->predict(series.x(i)));
    }
    const auto agg = aggregate_rows(preds, how, series.target_dim());
    result.residuals[i] = max_norm_residual(series.y(i), agg);
  }
  result.never_left_out = static_cast<std::size_t>(fallback_count);
  return result;
}

EnbpiState enbpi_fit(const core::Dataset& series, const ForecasterRecipe& recipe,
                     std::size_t ensemble_size, Aggregation how, std::size_t window,
                     std::uint64_t seed, Exec policy) {
  if (ensemble_size == 0) throw std::invalid_argument("ensemble_size must be >= 1");
  if (window == 0) throw std::invalid_argument("window must be >= 1");
  if (series.size() < 2) throw std::invalid_argument("series too short to fit");
  if (!recipe) throw std::invalid_argument("recipe is empty");

  const std::size_t T = series.size();
  EnbpiState state;
  state.aggregation = how;
  state.window = window;
  state.train_length = T;
  state.feature_dim = series.feature_dim();
  state.target_dim = series.target_dim();
  state.models.resize(ensemble_size);
  state.membership.assign(ensemble_size, std::vector<bool>(T, false));

  const bool parallel = openmp_enabled(policy);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t b = 0; b < ensemble_size; ++b) {
    std::mt19937_64 rng(core::derive_seed(seed, b));
    std::uniform_int_distribution<std::size_t> pick(0, T - 1);
    std::vector<std::size_t> sample(T);
    for (auto& idx : sample) {
      idx = pick(rng);
      state.membership[b][idx] = true;
    }
    state.models[b] = recipe(series.rows(sample));
  }
  for (const auto& m : state.models) {
    if (!m) throw std::runtime_error("recipe returned a null forecaster");
    if (m->target_dim() != state.target_dim) {
      throw std::runtime_error("recipe target dimension mismatch");
    }
  }

  auto loo = leave_one_out_residuals(state.models, state.membership, series, how, policy);
  state.residuals.assign(loo.residuals.begin(), loo.residuals.end());
  state.never_left_out = loo.never_left_out;
  return state;
}

std::vector<double> ensemble_predict(const EnbpiState& state, std::span<const double> x) {
  if (state.models.empty()) throw std::invalid_argument("state holds no models");
  std::vector<std::vector<double>> preds;
  preds.reserve(state.models.size());
  for (const auto& m : state.models) preds.push_back(m->predict(x));
  return aggregate_rows(preds, state.aggregation, state.target_dim);
}

core::PredictionInterval enbpi_interval(const EnbpiState& state, std::span<const double> x,
                                        core::ConfidenceLevel level) {
  if (state.residuals.empty()) throw std::invalid_argument("empty residual buffer");
  const std::vector<double> buffer(state.residuals.begin(), state.residuals.end());
  const double w =
      core::empirical_quantile(level.coverage(), buffer, /*augment_with_infinity=*/false);
  const auto center = ensemble_predict(state, x);
  std::vector<double> lo(center.size()), hi(center.size());
  for (std::size_t j = 0; j < center.size(); ++j) {
    lo[j] = center[j] - w;
    hi[j] = center[j] + w;
  }
  return {std::move(lo), std::move(hi)};
}

void enbpi_recalibrate(EnbpiState& state, const core::Dataset& recent) {
  if (recent.size() != state.window) {
    throw std::invalid_argument("recalibration block must hold exactly `window` rows");
  }
  if (recent.feature_dim() != state.feature_dim ||
      recent.target_dim() != state.target_dim) {
    throw std::invalid_argument("recalibration block dimension mismatch");
  }
  for (std::size_t i = 0; i < recent.size(); ++i) {
    const auto pred = ensemble_predict(state, recent.x(i));
    state.residuals.pop_front();
    state.residuals.push_back(max_norm_residual(recent.y(i), pred));
  }
}

std::vector<StreamRecord> enbpi_run(EnbpiState& state, const core::Dataset& stream,
                                    core::ConfidenceLevel level) {
  if (state.target_dim != 1 || stream.target_dim() != 1) {
    throw std::invalid_argument("stream evaluation requires a scalar target");
  }
  if (stream.feature_dim() != state.feature_dim) {
    throw std::invalid_argument("stream feature dimension mismatch");
  }
  std::vector<StreamRecord> records;
  records.reserve(stream.size());
  core::Dataset block(state.feature_dim, 1);

  for (std::size_t t = 0; t < stream.size(); ++t) {
    const auto interval = enbpi_interval(state, stream.x(t), level);
    const double y = stream.y(t)[0];
    StreamRecord rec;
    rec.t = t;
    rec.lo = interval.lo(0);
    rec.hi = interval.hi(0);
    rec.y = y;
    rec.err = !interval.contains(stream.y(t));
    rec.alpha = level.alpha();
    records.push_back(rec);

    block.add_row(stream.x(t), stream.y(t));
    if (block.size() == state.window) {
      enbpi_recalibrate(state, block);
      block = core::Dataset(state.feature_dim, 1);
    }
  }
  return records;
}

}  // namespace conformal::online
