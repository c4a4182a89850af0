#include "conformal/multihorizon/horizon_scores.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "conformal/core/quantile.hpp"

namespace conformal::multi {

HorizonScores::HorizonScores(std::vector<std::vector<double>> per_step)
    : per_step_(std::move(per_step)) {
  if (per_step_.empty()) throw std::invalid_argument("horizon must be >= 1");
  const std::size_t n = per_step_.front().size();
  if (n == 0) throw std::invalid_argument("score sets must be nonempty");
  for (const auto& step : per_step_) {
    if (step.size() != n) {
      throw std::invalid_argument("per-step score sets must have equal cardinality");
    }
    for (double s : step) {
      if (!std::isfinite(s)) throw std::invalid_argument("scores must be finite");
    }
  }
}

HorizonScores collect_horizon_scores(const core::Dataset& cal,
                                     const core::Forecaster& model,
                                     std::size_t step_dim) {
  if (cal.empty()) throw std::invalid_argument("calibration set is empty");
  if (step_dim == 0 || cal.target_dim() % step_dim != 0) {
    throw std::invalid_argument("step_dim must divide the target dimension");
  }
  const std::size_t horizon = cal.target_dim() / step_dim;
  std::vector<std::vector<double>> per_step(horizon,
                                            std::vector<double>(cal.size(), 0.0));
  for (std::size_t i = 0; i < cal.size(); ++i) {
    const auto pred = model.predict(cal.x(i));
    if (pred.size() != cal.target_dim()) {
      throw std::runtime_error("model output does not match trajectory length");
    }
    const auto y = cal.y(i);
    for (std::size_t h = 0; h < horizon; ++h) {
      double s = 0.0;
      for (std::size_t j = 0; j < step_dim; ++j) {
        const std::size_t idx = h * step_dim + j;
        s = std::max(s, std::abs(y[idx] - pred[idx]));
      }
      per_step[h][i] = s;
    }
  }
  return HorizonScores(std::move(per_step));
}

double per_step_level(core::ConfidenceLevel level, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  return 1.0 - level.alpha() / static_cast<double>(horizon);
}

std::vector<double> independent_step_calibrate(const HorizonScores& scores,
                                               core::ConfidenceLevel level) {
  const double p = per_step_level(level, scores.horizon());
  std::vector<double> thresholds(scores.horizon());
  for (std::size_t h = 0; h < scores.horizon(); ++h) {
    thresholds[h] = core::empirical_quantile(p, scores.step(h),
                                             /*augment_with_infinity=*/true);
  }
  return thresholds;
}

bool RegionSet::covers(std::span<const double> trajectory) const {
  if (steps.empty()) throw std::invalid_argument("region set is empty");
  const std::size_t step_dim = steps.front().dim();
  if (trajectory.size() != steps.size() * step_dim) {
    throw std::invalid_argument("trajectory length does not match region set");
  }
  for (std::size_t h = 0; h < steps.size(); ++h) {
    if (!steps[h].contains(trajectory.subspan(h * step_dim, step_dim))) return false;
  }
  return true;
}

double RegionSet::total_width() const {
  double total = 0.0;
  for (const auto& s : steps) total += s.width();
  return total;
}

RegionSet predict_regions(std::span<const double> x, const core::Forecaster& model,
                          std::span<const double> thresholds, double epsilon,
                          std::size_t step_dim) {
  if (thresholds.empty()) throw std::invalid_argument("no thresholds given");
  if (step_dim == 0) throw std::invalid_argument("step_dim must be >= 1");
  const auto pred = model.predict(x);
  if (pred.size() != thresholds.size() * step_dim) {
    throw std::invalid_argument("model output does not match horizon * step_dim");
  }
  RegionSet out;
  out.epsilon = epsilon;
  out.thresholds.assign(thresholds.begin(), thresholds.end());
  out.steps.reserve(thresholds.size());
  for (std::size_t h = 0; h < thresholds.size(); ++h) {
    if (std::isnan(thresholds[h]) || thresholds[h] < 0.0) {
      throw std::invalid_argument("per-step thresholds must be nonnegative");
    }
    if (std::isinf(thresholds[h])) {
      out.steps.push_back(core::PredictionInterval::unbounded(step_dim));
      continue;
    }
    std::vector<double> lo(step_dim), hi(step_dim);
    for (std::size_t j = 0; j < step_dim; ++j) {
      lo[j] = pred[h * step_dim + j] - thresholds[h];
      hi[j] = pred[h * step_dim + j] + thresholds[h];
    }
    out.steps.emplace_back(std::move(lo), std::move(hi));
  }
  return out;
}

}  // namespace conformal::multi
