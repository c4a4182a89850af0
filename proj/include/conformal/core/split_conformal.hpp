#pragma once

#include <cstdint>

#include "conformal/core/quantile.hpp"
#include "conformal/core/score.hpp"
#include "conformal/core/types.hpp"

namespace conformal::core {

struct SplitDataset {
  Dataset train;
  Dataset cal;
  std::uint64_t seed;
};

// Seeded shuffle split into a fitting part and a calibration part.
// Both parts are nonempty; train_fraction must lie in (0, 1).
[[nodiscard]] SplitDataset split_dataset(const Dataset& data, double train_fraction,
                                         std::uint64_t seed);

// One score per calibration row, with the model's context rebuilt at
// each x.
[[nodiscard]] ScoreSet calibration_scores(const Dataset& cal, const Forecaster& model,
                                          const ScoreFunction& score);

// Calibrated threshold: the level-(1 - alpha) empirical quantile of
// the calibration scores with the +inf augmentation.  +inf when the
// calibration set is too small for the requested level.
[[nodiscard]] double calibrate(const Dataset& cal, const Forecaster& model,
                               const ScoreFunction& score, ConfidenceLevel level);
[[nodiscard]] double calibrate(const ScoreSet& scores, ConfidenceLevel level);

[[nodiscard]] PredictionInterval predict_interval(std::span<const double> x,
                                                  const Forecaster& model,
                                                  const ScoreFunction& score,
                                                  double threshold);

}  // namespace conformal::core
