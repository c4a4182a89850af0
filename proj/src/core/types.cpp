#include "conformal/core/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace conformal::core {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(std::span<const double> v, const char* what) {
  for (double e : v) {
    if (!std::isfinite(e)) {
      throw std::invalid_argument(std::string(what) + " contains a non-finite value");
    }
  }
}
}  // namespace

ConfidenceLevel::ConfidenceLevel(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
}

Dataset::Dataset(std::size_t feature_dim, std::size_t target_dim)
    : feature_dim_(feature_dim), target_dim_(target_dim) {
  if (target_dim_ == 0) {
    throw std::invalid_argument("target_dim must be >= 1");
  }
}

void Dataset::reserve(std::size_t rows) {
  features_.reserve(rows * feature_dim_);
  targets_.reserve(rows * target_dim_);
}

void Dataset::add_row(std::span<const double> x, std::span<const double> y) {
  if (x.size() != feature_dim_ || y.size() != target_dim_) {
    throw std::invalid_argument("row shape does not match dataset dimensions");
  }
  require_finite(x, "feature row");
  require_finite(y, "target row");
  features_.insert(features_.end(), x.begin(), x.end());
  targets_.insert(targets_.end(), y.begin(), y.end());
  ++rows_;
}

std::span<const double> Dataset::x(std::size_t i) const {
  if (i >= rows_) throw std::out_of_range("row index out of range");
  return {features_.data() + i * feature_dim_, feature_dim_};
}

std::span<const double> Dataset::y(std::size_t i) const {
  if (i >= rows_) throw std::out_of_range("row index out of range");
  return {targets_.data() + i * target_dim_, target_dim_};
}

Dataset Dataset::rows(std::span<const std::size_t> indices) const {
  Dataset out(feature_dim_, target_dim_);
  out.reserve(indices.size());
  for (std::size_t i : indices) out.add_row(x(i), y(i));
  return out;
}

Dataset Dataset::rows(std::size_t begin, std::size_t end) const {
  if (begin > end || end > rows_) throw std::out_of_range("row range out of range");
  Dataset out(feature_dim_, target_dim_);
  out.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) out.add_row(x(i), y(i));
  return out;
}

PredictionInterval::PredictionInterval(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size() || lo_.empty()) {
    throw std::invalid_argument("interval bounds must have equal, nonzero dimension");
  }
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (std::isnan(lo_[i]) || std::isnan(hi_[i]) || lo_[i] > hi_[i]) {
      throw std::invalid_argument("interval requires lo <= hi in every component");
    }
  }
}

PredictionInterval::PredictionInterval(std::vector<double> lo, std::vector<double> hi,
                                       bool empty, sentinel_tag)
    : lo_(std::move(lo)), hi_(std::move(hi)), empty_(empty) {}

PredictionInterval PredictionInterval::unbounded(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("dimension must be >= 1");
  return {std::vector<double>(dim, -kInf), std::vector<double>(dim, kInf), false,
          sentinel_tag{}};
}

PredictionInterval PredictionInterval::empty_set(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("dimension must be >= 1");
  return {std::vector<double>(dim, kInf), std::vector<double>(dim, -kInf), true,
          sentinel_tag{}};
}

bool PredictionInterval::is_unbounded() const noexcept {
  if (empty_) return false;
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (std::isinf(lo_[i]) || std::isinf(hi_[i])) return true;
  }
  return false;
}

bool PredictionInterval::contains(std::span<const double> y) const {
  if (y.size() != lo_.size()) {
    throw std::invalid_argument("point dimension does not match interval");
  }
  if (empty_) return false;
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (y[i] < lo_[i] || y[i] > hi_[i]) return false;
  }
  return true;
}

bool PredictionInterval::contains(double y) const {
  return contains(std::span<const double>(&y, 1));
}

double PredictionInterval::width() const {
  if (empty_) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < lo_.size(); ++i) total += hi_[i] - lo_[i];
  return total;
}

}  // namespace conformal::core
