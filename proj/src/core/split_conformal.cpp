#include "conformal/core/split_conformal.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace conformal::core {

SplitDataset split_dataset(const Dataset& data, double train_fraction,
                           std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  if (data.size() < 2) {
    throw std::invalid_argument("need at least two rows to split");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  auto n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(data.size()));
  n_train = std::clamp<std::size_t>(n_train, 1, data.size() - 1);

  std::span<const std::size_t> idx(order);
  return {data.rows(idx.subspan(0, n_train)), data.rows(idx.subspan(n_train)), seed};
}

ScoreSet calibration_scores(const Dataset& cal, const Forecaster& model,
                            const ScoreFunction& score) {
  if (cal.empty()) throw std::invalid_argument("calibration set is empty");
  ScoreSet out;
  for (std::size_t i = 0; i < cal.size(); ++i) {
    const PredictionContext ctx = score.context_for(model, cal.x(i));
    out.add(score.evaluate(cal.y(i), ctx));
  }
  return out;
}

double calibrate(const ScoreSet& scores, ConfidenceLevel level) {
  return empirical_quantile(level.coverage(), scores, /*augment_with_infinity=*/true);
}

double calibrate(const Dataset& cal, const Forecaster& model, const ScoreFunction& score,
                 ConfidenceLevel level) {
  return calibrate(calibration_scores(cal, model, score), level);
}

PredictionInterval predict_interval(std::span<const double> x, const Forecaster& model,
                                    const ScoreFunction& score, double threshold) {
  return score.invert(score.context_for(model, x), threshold);
}

}  // namespace conformal::core
