#include "conformal/core/score.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conformal::core {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_band(const QuantileBand& band, std::size_t dim) {
  if (band.lo.size() != dim || band.hi.size() != dim) {
    throw std::invalid_argument("quantile band dimension mismatch");
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (band.lo[j] > band.hi[j]) {
      throw std::runtime_error("crossed quantile band: lo > hi");
    }
  }
}
}  // namespace

ScoreFunction::ScoreFunction(ScoreKind kind, std::shared_ptr<const ScaleEstimator> scale)
    : kind_(kind), scale_(std::move(scale)) {}

ScoreFunction ScoreFunction::absolute_residual() {
  return ScoreFunction(ScoreKind::absolute_residual);
}

ScoreFunction ScoreFunction::normalized_residual(
    std::shared_ptr<const ScaleEstimator> scale) {
  if (!scale) throw std::invalid_argument("scale estimator is required");
  return ScoreFunction(ScoreKind::normalized_residual, std::move(scale));
}

ScoreFunction ScoreFunction::quantile_band() {
  return ScoreFunction(ScoreKind::quantile_band);
}

PredictionContext ScoreFunction::context_for(const Forecaster& model,
                                             std::span<const double> x) const {
  PredictionContext ctx;
  ctx.point = model.predict(x);
  if (ctx.point.empty()) throw std::runtime_error("forecaster returned no output");
  switch (kind_) {
    case ScoreKind::absolute_residual:
      break;
    case ScoreKind::normalized_residual:
      ctx.scale = scale_->scale(x);
      if (!(ctx.scale > 0.0) || !std::isfinite(ctx.scale)) {
        throw std::runtime_error("degenerate uncertainty scale: u(x) must be positive");
      }
      break;
    case ScoreKind::quantile_band: {
      ctx.band = model.predict_band(x);
      if (!ctx.band) {
        throw std::invalid_argument(
            "quantile-band score requires a model with predict_band");
      }
      check_band(*ctx.band, ctx.point.size());
      break;
    }
  }
  return ctx;
}

double ScoreFunction::evaluate(std::span<const double> y,
                               const PredictionContext& ctx) const {
  const std::size_t dim = ctx.point.size();
  if (y.size() != dim) throw std::invalid_argument("target dimension mismatch");
  switch (kind_) {
    case ScoreKind::absolute_residual: {
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s = std::max(s, std::abs(y[j] - ctx.point[j]));
      return s;
    }
    case ScoreKind::normalized_residual: {
      if (!(ctx.scale > 0.0)) {
        throw std::runtime_error("degenerate uncertainty scale: u(x) must be positive");
      }
      double s = 0.0;
      for (std::size_t j = 0; j < dim; ++j) s = std::max(s, std::abs(y[j] - ctx.point[j]));
      return s / ctx.scale;
    }
    case ScoreKind::quantile_band: {
      if (!ctx.band) throw std::invalid_argument("context carries no quantile band");
      check_band(*ctx.band, dim);
      double s = -kInf;
      for (std::size_t j = 0; j < dim; ++j) {
        s = std::max(s, std::max(ctx.band->lo[j] - y[j], y[j] - ctx.band->hi[j]));
      }
      return s;
    }
  }
  throw std::logic_error("unreachable score kind");
}

PredictionInterval ScoreFunction::invert(const PredictionContext& ctx,
                                         double threshold) const {
  const std::size_t dim = ctx.point.size();
  if (std::isnan(threshold)) throw std::invalid_argument("threshold is NaN");
  if (threshold == kInf) return PredictionInterval::unbounded(dim);

  std::vector<double> lo(dim), hi(dim);
  switch (kind_) {
    case ScoreKind::absolute_residual:
      for (std::size_t j = 0; j < dim; ++j) {
        lo[j] = ctx.point[j] - threshold;
        hi[j] = ctx.point[j] + threshold;
      }
      break;
    case ScoreKind::normalized_residual: {
      if (!(ctx.scale > 0.0)) {
        throw std::runtime_error("degenerate uncertainty scale: u(x) must be positive");
      }
      for (std::size_t j = 0; j < dim; ++j) {
        lo[j] = ctx.point[j] - threshold * ctx.scale;
        hi[j] = ctx.point[j] + threshold * ctx.scale;
      }
      break;
    }
    case ScoreKind::quantile_band: {
      if (!ctx.band) throw std::invalid_argument("context carries no quantile band");
      check_band(*ctx.band, dim);
      for (std::size_t j = 0; j < dim; ++j) {
        lo[j] = ctx.band->lo[j] - threshold;
        hi[j] = ctx.band->hi[j] + threshold;
      }
      break;
    }
    default:
      throw std::logic_error("unreachable score kind");
  }
  for (std::size_t j = 0; j < dim; ++j) {
    if (lo[j] > hi[j]) return PredictionInterval::empty_set(dim);
  }
  return {std::move(lo), std::move(hi)};
}

}  // namespace conformal::core
