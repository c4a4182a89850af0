#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <vector>

#include "conformal/core/split_conformal.hpp"
#include "conformal/online/stream.hpp"
#include "conformal/parallel.hpp"

namespace conformal::online {

enum class Aggregation { mean, median };

// Builds a fresh forecaster from a training set.  Must be a pure
// function of its input: ensemble members are fitted concurrently.
using ForecasterRecipe =
    std::function<std::unique_ptr<core::Forecaster>(const core::Dataset&)>;

// Bootstrap-ensemble state for online intervals on a time series.
// `residuals` is a FIFO of the `train_length` most recent out-of-bag
// residuals; recalibration slides it without refitting any model.
struct EnbpiState {
  std::vector<std::shared_ptr<const core::Forecaster>> models;
  // membership[b][i]: row i appeared in the bootstrap sample of model b.
  std::vector<std::vector<bool>> membership;
  Aggregation aggregation = Aggregation::mean;
  std::deque<double> residuals;
  std::size_t window = 1;        // steps between residual-buffer updates
  std::size_t train_length = 0;  // residual buffer capacity
  std::size_t feature_dim = 0;
  std::size_t target_dim = 1;
  // Rows that every bootstrap sample happened to include; their
  // residuals fall back to the full-ensemble prediction.
  std::size_t never_left_out = 0;
};

[[nodiscard]] double aggregate(std::span<const double> values, Aggregation how);

struct LooResult {
  std::vector<double> residuals;
  std::size_t never_left_out = 0;
};

// Out-of-bag residual of every training row: aggregate the models
// whose bootstrap sample skipped the row, fall back to the full
// ensemble when none did.  Residuals are max-norm over target
// dimensions.
[[nodiscard]] LooResult leave_one_out_residuals(
    std::span<const std::shared_ptr<const core::Forecaster>> models,
    const std::vector<std::vector<bool>>& membership, const core::Dataset& series,
    Aggregation how, Exec policy = Exec::parallel);

[[nodiscard]] EnbpiState enbpi_fit(const core::Dataset& series,
                                   const ForecasterRecipe& recipe,
                                   std::size_t ensemble_size, Aggregation how,
                                   std::size_t window, std::uint64_t seed,
                                   Exec policy = Exec::parallel);

// Aggregate prediction of the full ensemble at x.
[[nodiscard]] std::vector<double> ensemble_predict(const EnbpiState& state,
                                                   std::span<const double> x);

// Center = ensemble prediction, half-width = level-(1 - alpha)
// quantile of the residual buffer (no augmentation; the buffer is a
// sliding approximation, not an exchangeable calibration set).
[[nodiscard]] core::PredictionInterval enbpi_interval(const EnbpiState& state,
                                                      std::span<const double> x,
                                                      core::ConfidenceLevel level);

// Pushes one residual per observed row and evicts the oldest, keeping
// the buffer length fixed.  `recent` must hold exactly `window` rows.
void enbpi_recalibrate(EnbpiState& state, const core::Dataset& recent);

// Walks a stream in order: issue interval, observe, and every `window`
// steps feed the observed block back into the residual buffer.
// Requires a scalar target.
[[nodiscard]] std::vector<StreamRecord> enbpi_run(EnbpiState& state,
                                                  const core::Dataset& stream,
                                                  core::ConfidenceLevel level);

}  // namespace conformal::online
