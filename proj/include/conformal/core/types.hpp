#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace conformal::core {

// Miscoverage target.  alpha must lie strictly inside (0, 1); the
// nominal coverage is 1 - alpha.
class ConfidenceLevel {
 public:
  explicit ConfidenceLevel(double alpha);

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] double coverage() const noexcept { return 1.0 - alpha_; }

 private:
  double alpha_;
};

// Flat row-major storage of (x, y) pairs with fixed feature and target
// dimensions.  Rows are validated on insertion: every entry must be
// finite.  Row order is meaningful for time-series data.
class Dataset {
 public:
  Dataset(std::size_t feature_dim, std::size_t target_dim);

  void reserve(std::size_t rows);
  void add_row(std::span<const double> x, std::span<const double> y);

  [[nodiscard]] std::size_t size() const noexcept { return rows_; }
  [[nodiscard]] bool empty() const noexcept { return rows_ == 0; }
  [[nodiscard]] std::size_t feature_dim() const noexcept { return feature_dim_; }
  [[nodiscard]] std::size_t target_dim() const noexcept { return target_dim_; }

  [[nodiscard]] std::span<const double> x(std::size_t i) const;
  [[nodiscard]] std::span<const double> y(std::size_t i) const;

  // Gathers the given rows into a new dataset.  Indices may repeat
  // (bootstrap resampling) and are taken in the order given.
  [[nodiscard]] Dataset rows(std::span<const std::size_t> indices) const;
  [[nodiscard]] Dataset rows(std::size_t begin, std::size_t end) const;

 private:
  std::size_t feature_dim_;
  std::size_t target_dim_;
  std::size_t rows_ = 0;
  std::vector<double> features_;
  std::vector<double> targets_;
};

// Axis-aligned box, one [lo, hi] pair per target dimension.  Two
// sentinel shapes exist: the unbounded box (every component is
// [-inf, +inf]) and the empty set, which contains nothing and has
// width zero.  Ordinary construction requires lo <= hi componentwise.
class PredictionInterval {
 public:
  PredictionInterval(std::vector<double> lo, std::vector<double> hi);

  [[nodiscard]] static PredictionInterval unbounded(std::size_t dim);
  [[nodiscard]] static PredictionInterval empty_set(std::size_t dim);

  [[nodiscard]] std::size_t dim() const noexcept { return lo_.size(); }
  [[nodiscard]] bool is_empty() const noexcept { return empty_; }
  [[nodiscard]] bool is_unbounded() const noexcept;

  [[nodiscard]] std::span<const double> lo() const noexcept { return lo_; }
  [[nodiscard]] std::span<const double> hi() const noexcept { return hi_; }
  [[nodiscard]] double lo(std::size_t i) const { return lo_.at(i); }
  [[nodiscard]] double hi(std::size_t i) const { return hi_.at(i); }

  [[nodiscard]] bool contains(std::span<const double> y) const;
  [[nodiscard]] bool contains(double y) const;

  // Total width summed over dimensions; 0 for the empty set, +inf for
  // any unbounded component.
  [[nodiscard]] double width() const;

 private:
  struct sentinel_tag {};
  PredictionInterval(std::vector<double> lo, std::vector<double> hi, bool empty, sentinel_tag);

  std::vector<double> lo_;
  std::vector<double> hi_;
  bool empty_ = false;
};

}  // namespace conformal::core
