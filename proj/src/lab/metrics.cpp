#include "conformal/lab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace conformal::lab {

double coverage(std::span<const core::PredictionInterval> intervals,
                const core::Dataset& truths, Exec policy) {
  if (intervals.empty() || intervals.size() != truths.size()) {
    throw std::invalid_argument("intervals and truths must pair up nonempty");
  }
  std::int64_t covered = 0;
  const bool parallel = openmp_enabled(policy);
#pragma omp parallel for reduction(+ : covered) schedule(static) if (parallel)
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    covered += intervals[i].contains(truths.y(i)) ? 1 : 0;
  }
  return static_cast<double>(covered) / static_cast<double>(intervals.size());
}

double joint_coverage(std::span<const multi::RegionSet> regions,
                      const core::Dataset& truths, Exec policy) {
  if (regions.empty() || regions.size() != truths.size()) {
    throw std::invalid_argument("regions and truths must pair up nonempty");
  }
  std::int64_t covered = 0;
  const bool parallel = openmp_enabled(policy);
#pragma omp parallel for reduction(+ : covered) schedule(static) if (parallel)
  for (std::size_t i = 0; i < regions.size(); ++i) {
    covered += regions[i].covers(truths.y(i)) ? 1 : 0;
  }
  return static_cast<double>(covered) / static_cast<double>(regions.size());
}

double mean_width(std::span<const core::PredictionInterval> intervals) {
  if (intervals.empty()) throw std::invalid_argument("no intervals");
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.width();
  return total / static_cast<double>(intervals.size());
}

double mean_total_width(std::span<const multi::RegionSet> regions) {
  if (regions.empty()) throw std::invalid_argument("no regions");
  double total = 0.0;
  for (const auto& r : regions) total += r.total_width();
  return total / static_cast<double>(regions.size());
}

std::vector<double> rolling_coverage(std::span<const std::uint8_t> errs,
                                     std::size_t window) {
  if (window == 0 || window > errs.size()) {
    throw std::invalid_argument("window must lie in [1, length]");
  }
  std::vector<double> out(errs.size() - window + 1);
  std::size_t misses = 0;
  for (std::size_t t = 0; t < window; ++t) misses += errs[t];
  out[0] = 1.0 - static_cast<double>(misses) / static_cast<double>(window);
  for (std::size_t t = window; t < errs.size(); ++t) {
    misses += errs[t];
    misses -= errs[t - window];
    out[t - window + 1] = 1.0 - static_cast<double>(misses) / static_cast<double>(window);
  }
  return out;
}

namespace {
// Average ranks, ties sharing the mean of their positions.
std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}
}  // namespace

double spearman_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("need two equal-length samples of size >= 2");
  }
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const auto n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return cov / std::sqrt(var_a * var_b);
}

}  // namespace conformal::lab
