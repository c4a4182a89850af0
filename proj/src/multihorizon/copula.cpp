#include "conformal/multihorizon/copula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace conformal::multi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> scores) : sorted_(std::move(scores)) {
  if (sorted_.empty()) throw std::invalid_argument("empty score set");
  for (double s : sorted_) {
    if (!std::isfinite(s)) throw std::invalid_argument("scores must be finite");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::value(double s) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), s);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::inverse(double u) const {
  if (!(u > 0.0) || u > 1.0) {
    throw std::invalid_argument("probability level must lie in (0, 1]");
  }
  const auto n = static_cast<double>(sorted_.size());
  auto rank = static_cast<std::size_t>(std::ceil(u * n));
  rank = std::max<std::size_t>(rank, 1);
  return sorted_[rank - 1];
}

EmpiricalCopula::EmpiricalCopula(std::vector<double> u_matrix, std::size_t rows,
                                 std::size_t dims)
    : u_(std::move(u_matrix)), rows_(rows), dims_(dims) {
  if (rows_ == 0 || dims_ == 0 || u_.size() != rows_ * dims_) {
    throw std::invalid_argument("u-matrix shape mismatch");
  }
  for (double u : u_) {
    if (!(u >= 0.0) || u > 1.0) {
      throw std::invalid_argument("u-matrix entries must lie in [0, 1]");
    }
  }
}

EmpiricalCopula EmpiricalCopula::from_scores(const HorizonScores& scores) {
  const std::size_t n = scores.n_cal();
  const std::size_t k = scores.horizon();
  std::vector<EmpiricalCdf> cdfs;
  cdfs.reserve(k);
  for (std::size_t h = 0; h < k; ++h) {
    cdfs.emplace_back(std::vector<double>(scores.step(h).begin(), scores.step(h).end()));
  }
  std::vector<double> u(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t h = 0; h < k; ++h) u[i * k + h] = cdfs[h].value(scores.step(h)[i]);
  }
  return {std::move(u), n, k};
}

std::span<const double> EmpiricalCopula::row(std::size_t i) const {
  if (i >= rows_) throw std::out_of_range("row index out of range");
  return {u_.data() + i * dims_, dims_};
}

double EmpiricalCopula::eval(std::span<const double> u, Exec policy) const {
  if (u.size() != dims_) throw std::invalid_argument("copula argument dimension mismatch");
  for (double e : u) {
    if (std::isnan(e)) throw std::invalid_argument("copula argument is NaN");
  }
  std::int64_t count = 0;
  const bool parallel = openmp_enabled(policy);
#pragma omp parallel for reduction(+ : count) schedule(static) if (parallel)
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* rowp = u_.data() + i * dims_;
    bool inside = true;
    for (std::size_t h = 0; h < dims_; ++h) {
      if (!(rowp[h] < u[h])) {
        inside = false;
        break;
      }
    }
    count += inside ? 1 : 0;
  }
  return static_cast<double>(count) / static_cast<double>(rows_);
}

std::pair<double, double> frechet_bounds(std::span<const double> u) {
  if (u.empty()) throw std::invalid_argument("empty copula argument");
  double sum = 0.0;
  double least = kInf;
  for (double e : u) {
    if (!(e >= 0.0) || e > 1.0) {
      throw std::invalid_argument("copula arguments must lie in [0, 1]");
    }
    sum += e;
    least = std::min(least, e);
  }
  const double lower = std::max(1.0 - static_cast<double>(u.size()) + sum, 0.0);
  return {lower, least};
}

CopulaCalibration copula_calibrate(const HorizonScores& scores, double epsilon,
                                   Exec policy) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  const std::size_t n = scores.n_cal();
  const std::size_t k = scores.horizon();
  if (n < 2) throw std::invalid_argument("need at least two calibration series");

  std::vector<EmpiricalCdf> cdfs;
  cdfs.reserve(k);
  for (std::size_t h = 0; h < k; ++h) {
    cdfs.emplace_back(std::vector<double>(scores.step(h).begin(), scores.step(h).end()));
  }
  const EmpiricalCopula copula = EmpiricalCopula::from_scores(scores);

  // Copula value at the probability transforms of the r-th order
  // statistics.  Nondecreasing in r.
  std::vector<double> u(k);
  const auto value_at_rank = [&](std::size_t r) {
    for (std::size_t h = 0; h < k; ++h) u[h] = cdfs[h].value(cdfs[h].sorted()[r - 1]);
    return copula.eval(u, policy);
  };

  const double target = 1.0 - epsilon;
  CopulaCalibration out;

  if (value_at_rank(n) < target) {
    out.thresholds.assign(k, kInf);
    out.achieved = 1.0;
    out.shared_rank = n + 1;
    out.escalated = true;
    return out;
  }

  std::size_t lo = 1, hi = n;  // value_at_rank(hi) >= target
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (value_at_rank(mid) >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  out.thresholds.resize(k);
  for (std::size_t h = 0; h < k; ++h) out.thresholds[h] = cdfs[h].sorted()[lo - 1];
  out.achieved = value_at_rank(lo);
  out.shared_rank = lo;
  out.escalated = false;
  return out;
}

std::optional<double> shared_level_search(
    const std::function<double(std::span<const double>)>& copula_value,
    std::size_t dims, std::span<const double> levels, double target) {
  if (dims == 0) throw std::invalid_argument("dims must be >= 1");
  if (levels.empty()) return std::nullopt;
  if (!std::is_sorted(levels.begin(), levels.end())) {
    throw std::invalid_argument("levels must be ascending");
  }
  std::vector<double> u(dims);
  const auto value_at = [&](std::size_t idx) {
    std::fill(u.begin(), u.end(), levels[idx]);
    return copula_value(u);
  };
  if (value_at(levels.size() - 1) < target) return std::nullopt;
  std::size_t lo = 0, hi = levels.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (value_at(mid) >= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return levels[lo];
}

}  // namespace conformal::multi
