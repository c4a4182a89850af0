#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace conformal::core {

// Bag of finite nonconformity scores.  Order of insertion is not
// meaningful; an optional horizon index tags per-step score sets in
// multi-horizon calibration.
class ScoreSet {
 public:
  ScoreSet() = default;
  explicit ScoreSet(std::vector<double> scores,
                    std::optional<std::size_t> horizon = std::nullopt);

  void add(double score);

  [[nodiscard]] std::span<const double> values() const noexcept { return scores_; }
  [[nodiscard]] std::size_t size() const noexcept { return scores_.size(); }
  [[nodiscard]] bool empty() const noexcept { return scores_.empty(); }
  [[nodiscard]] std::optional<std::size_t> horizon() const noexcept { return horizon_; }

 private:
  std::vector<double> scores_;
  std::optional<std::size_t> horizon_;
};

// Smallest s' such that at least a fraction p of the sample is <= s':
// the ceil(p * N)-th order statistic.  With `augment_with_infinity`
// the sample is conceptually extended by one +inf element (N = n + 1),
// which is the finite-sample correction used for calibration; the
// result is +inf when ceil(p * N) = n + 1.  Without augmentation the
// result is always one of the scores.  Requires p in (0, 1] and a
// nonempty sample.
[[nodiscard]] double empirical_quantile(double p, std::span<const double> scores,
                                        bool augment_with_infinity);
[[nodiscard]] double empirical_quantile(double p, const ScoreSet& scores,
                                        bool augment_with_infinity);

}  // namespace conformal::core
