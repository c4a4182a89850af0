#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "conformal/core/score.hpp"
#include "conformal/core/types.hpp"
#include "conformal/online/enbpi.hpp"

namespace conformal::lab {

// Predicts the same vector everywhere; fit() uses the training-target
// mean.  The baseline stub for sanity checks.
class ConstantForecaster final : public core::Forecaster {
 public:
  explicit ConstantForecaster(std::vector<double> value);
  [[nodiscard]] static ConstantForecaster fit(const core::Dataset& train);

  [[nodiscard]] std::size_t target_dim() const override { return value_.size(); }
  [[nodiscard]] std::vector<double> predict(std::span<const double> x) const override;

 private:
  std::vector<double> value_;
};

// Ordinary least squares with an intercept, one output per target
// dimension.  Rank-deficient or underdetermined systems fall back to
// a small ridge penalty; `used_ridge_fallback` reports it.
class LinearForecaster final : public core::Forecaster {
 public:
  [[nodiscard]] static LinearForecaster fit(const core::Dataset& train,
                                            double ridge = 0.0);

  [[nodiscard]] std::size_t target_dim() const override { return target_dim_; }
  [[nodiscard]] std::vector<double> predict(std::span<const double> x) const override;

  [[nodiscard]] bool used_ridge_fallback() const noexcept { return ridge_fallback_; }
  // Weights for one output: feature coefficients then the intercept.
  [[nodiscard]] std::span<const double> coefficients(std::size_t output) const;

 private:
  std::size_t feature_dim_ = 0;
  std::size_t target_dim_ = 0;
  std::vector<double> coef_;  // row-major, target_dim x (feature_dim + 1)
  bool ridge_fallback_ = false;
};

// Mean of the k nearest training targets under the Euclidean metric.
// k = n reproduces the global mean.
class KnnForecaster final : public core::Forecaster {
 public:
  [[nodiscard]] static KnnForecaster fit(const core::Dataset& train, std::size_t k);

  [[nodiscard]] std::size_t target_dim() const override { return train_.target_dim(); }
  [[nodiscard]] std::vector<double> predict(std::span<const double> x) const override;

 private:
  KnnForecaster(core::Dataset train, std::size_t k);

  core::Dataset train_;
  std::size_t k_;
};

// Linear models for a lower/upper conditional-quantile pair, trained
// by full-batch subgradient descent on the pinball loss from the
// least-squares warm start.  Deterministic.  predict() returns the
// band midpoint; predict_band() repairs any crossing by swapping.
class LinearQuantileForecaster final : public core::Forecaster {
 public:
  [[nodiscard]] static LinearQuantileForecaster fit(const core::Dataset& train,
                                                    double lower_level,
                                                    double upper_level,
                                                    std::size_t iterations = 2000);

  [[nodiscard]] std::size_t target_dim() const override { return target_dim_; }
  [[nodiscard]] std::vector<double> predict(std::span<const double> x) const override;
  [[nodiscard]] std::optional<core::QuantileBand> predict_band(
      std::span<const double> x) const override;

 private:
  std::size_t feature_dim_ = 0;
  std::size_t target_dim_ = 0;
  std::vector<double> w_lo_;  // row-major, target_dim x (feature_dim + 1)
  std::vector<double> w_hi_;
};

// Local difficulty estimate: mean absolute residual of the model on
// the k nearest training rows.  Floored away from zero so the scaled
// score stays well defined.
class KnnScaleEstimator final : public core::ScaleEstimator {
 public:
  KnnScaleEstimator(std::shared_ptr<const core::Forecaster> model, core::Dataset train,
                    std::size_t k, double floor = 1e-8);

  [[nodiscard]] double scale(std::span<const double> x) const override;

 private:
  std::shared_ptr<const core::Forecaster> model_;
  core::Dataset train_;
  std::size_t k_;
  double floor_;
  std::vector<double> residuals_;  // precomputed per training row
};

// Recipes for the ensemble methods and the experiment runner.
[[nodiscard]] online::ForecasterRecipe linear_recipe(double ridge = 0.0);
[[nodiscard]] online::ForecasterRecipe knn_recipe(std::size_t k);
[[nodiscard]] online::ForecasterRecipe constant_recipe();

}  // namespace conformal::lab
