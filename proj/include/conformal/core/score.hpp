#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "conformal/core/types.hpp"

namespace conformal::core {

// Lower/upper conditional-quantile estimates, one pair per target
// dimension.
struct QuantileBand {
  std::vector<double> lo;
  std::vector<double> hi;
};

// Minimal interface a point forecaster must satisfy.  Implementations
// must be deterministic and safe to call concurrently after fitting.
class Forecaster {
 public:
  virtual ~Forecaster() = default;

  [[nodiscard]] virtual std::size_t target_dim() const = 0;
  [[nodiscard]] virtual std::vector<double> predict(std::span<const double> x) const = 0;

  // Quantile-pair models override this; point forecasters return
  // nullopt and cannot be used with the quantile-band score.
  [[nodiscard]] virtual std::optional<QuantileBand> predict_band(
      std::span<const double> x) const {
    (void)x;
    return std::nullopt;
  }
};

// Local uncertainty estimate u(x) for the scaled-residual score.
// Must be strictly positive wherever it is evaluated.
class ScaleEstimator {
 public:
  virtual ~ScaleEstimator() = default;
  [[nodiscard]] virtual double scale(std::span<const double> x) const = 0;
};

enum class ScoreKind {
  absolute_residual,    // max_j |y_j - yhat_j|
  normalized_residual,  // max_j |y_j - yhat_j| / u(x)
  quantile_band,        // max_j max(lo_j - y_j, y_j - hi_j); may be negative
};

// Everything the score needs to know about the model's output at one
// input point.  Built once per x so that scoring and interval
// inversion agree exactly.
struct PredictionContext {
  std::vector<double> point;
  double scale = 1.0;
  std::optional<QuantileBand> band;
};

// A nonconformity score paired with its interval inversion.  The two
// are duals: y lands in invert(ctx, q) exactly when
// evaluate(y, ctx) <= q.
class ScoreFunction {
 public:
  [[nodiscard]] static ScoreFunction absolute_residual();
  [[nodiscard]] static ScoreFunction normalized_residual(
      std::shared_ptr<const ScaleEstimator> scale);
  [[nodiscard]] static ScoreFunction quantile_band();

  [[nodiscard]] ScoreKind kind() const noexcept { return kind_; }

  [[nodiscard]] PredictionContext context_for(const Forecaster& model,
                                              std::span<const double> x) const;
  [[nodiscard]] double evaluate(std::span<const double> y,
                                const PredictionContext& ctx) const;
  // Box of all y with score <= threshold; the unbounded box when
  // threshold is +inf, the empty set when no y qualifies.
  [[nodiscard]] PredictionInterval invert(const PredictionContext& ctx,
                                          double threshold) const;

 private:
  explicit ScoreFunction(ScoreKind kind,
                         std::shared_ptr<const ScaleEstimator> scale = nullptr);

  ScoreKind kind_;
  std::shared_ptr<const ScaleEstimator> scale_;
};

}  // namespace conformal::core
