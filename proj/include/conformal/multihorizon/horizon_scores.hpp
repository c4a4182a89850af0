#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "conformal/core/score.hpp"
#include "conformal/core/types.hpp"

namespace conformal::multi {

// Nonconformity scores of a calibration set of trajectories, grouped
// by horizon step: step(h) holds one score per calibration series.
// Every step has the same cardinality.
class HorizonScores {
 public:
  explicit HorizonScores(std::vector<std::vector<double>> per_step);

  [[nodiscard]] std::size_t horizon() const noexcept { return per_step_.size(); }
  [[nodiscard]] std::size_t n_cal() const noexcept { return per_step_.front().size(); }
  [[nodiscard]] std::span<const double> step(std::size_t h) const {
    return per_step_.at(h);
  }

 private:
  std::vector<std::vector<double>> per_step_;
};

// Scores a calibration set of (history -> trajectory) pairs.  The
// target vector is read as `horizon` consecutive steps of `step_dim`
// values each; the per-step score is the max-norm residual of that
// step.  `step_dim` must divide the target dimension.
[[nodiscard]] HorizonScores collect_horizon_scores(const core::Dataset& cal,
                                                   const core::Forecaster& model,
                                                   std::size_t step_dim = 1);

// Per-step level 1 - alpha / horizon: splitting the miscoverage budget
// evenly across steps keeps the joint guarantee by the union bound.
[[nodiscard]] double per_step_level(core::ConfidenceLevel level, std::size_t horizon);

// One augmented empirical quantile per step, all at the shared
// per-step level.
[[nodiscard]] std::vector<double> independent_step_calibrate(const HorizonScores& scores,
                                                             core::ConfidenceLevel level);

// Joint prediction region: one box per horizon step.
struct RegionSet {
  std::vector<core::PredictionInterval> steps;
  std::vector<double> thresholds;
  double epsilon = 0.0;  // joint miscoverage target

  // True when every step's box contains the corresponding slice of
  // the trajectory.
  [[nodiscard]] bool covers(std::span<const double> trajectory) const;
  [[nodiscard]] double total_width() const;
};

[[nodiscard]] RegionSet predict_regions(std::span<const double> x,
                                        const core::Forecaster& model,
                                        std::span<const double> thresholds,
                                        double epsilon, std::size_t step_dim = 1);

}  // namespace conformal::multi
