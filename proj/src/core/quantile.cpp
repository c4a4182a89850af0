#include "conformal/core/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conformal::core {

ScoreSet::ScoreSet(std::vector<double> scores, std::optional<std::size_t> horizon)
    : horizon_(horizon) {
  scores_.reserve(scores.size());
  for (double s : scores) add(s);
}

void ScoreSet::add(double score) {
  if (!std::isfinite(score)) {
    throw std::invalid_argument("nonconformity scores must be finite");
  }
  scores_.push_back(score);
}

double empirical_quantile(double p, std::span<const double> scores,
                          bool augment_with_infinity) {
  if (!(p > 0.0) || p > 1.0) {
    throw std::invalid_argument("quantile level must lie in (0, 1]");
  }
  if (scores.empty()) {
    throw std::invalid_argument("quantile of an empty score set");
  }
  const std::size_t n = scores.size();
  const std::size_t total = augment_with_infinity ? n + 1 : n;
  // ceil is exact here: p * total < 2^53 for any realistic sample.
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(total)));
  rank = std::max<std::size_t>(rank, 1);
  if (rank > n) {
    return std::numeric_limits<double>::infinity();
  }
  std::vector<double> work(scores.begin(), scores.end());
  std::nth_element(work.begin(), work.begin() + (rank - 1), work.end());
  return work[rank - 1];
}

double empirical_quantile(double p, const ScoreSet& scores, bool augment_with_infinity) {
  return empirical_quantile(p, scores.values(), augment_with_infinity);
}

}  // namespace conformal::core
