#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "conformal/multihorizon/horizon_scores.hpp"
#include "conformal/parallel.hpp"

namespace conformal::multi {

// Empirical distribution of one step's calibration scores.
// value(s) is the fraction of scores <= s; inverse(u) the smallest
// score whose value reaches u.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> scores);

  [[nodiscard]] double value(double s) const;
  [[nodiscard]] double inverse(double u) const;
  [[nodiscard]] std::span<const double> sorted() const noexcept { return sorted_; }
  [[nodiscard]] std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

// Empirical copula over the per-step probability transforms of the
// calibration scores: eval(u) is the fraction of calibration rows that
// fall strictly below u in every coordinate.  The strict inequality
// makes the estimator conservative at its own jump points.
class EmpiricalCopula {
 public:
  EmpiricalCopula(std::vector<double> u_matrix, std::size_t rows, std::size_t dims);

  [[nodiscard]] static EmpiricalCopula from_scores(const HorizonScores& scores);

  [[nodiscard]] double eval(std::span<const double> u,
                            Exec policy = Exec::parallel) const;
  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t dims() const noexcept { return dims_; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const;

 private:
  std::vector<double> u_;  // row-major, rows_ x dims_
  std::size_t rows_;
  std::size_t dims_;
};

// Sharp distribution-free envelope for any copula value at u:
// max(1 - k + sum(u), 0) <= C(u) <= min(u).  The lower bound at equal
// budgets is exactly the evenly-split union bound, which is why the
// copula calibrator can only improve on independent-step thresholds.
[[nodiscard]] std::pair<double, double> frechet_bounds(std::span<const double> u);

struct CopulaCalibration {
  std::vector<double> thresholds;  // one per step; all +inf when escalated
  double achieved = 0.0;           // empirical joint mass at the thresholds
  std::size_t shared_rank = 0;     // order-statistic rank used (1-based)
  bool escalated = false;          // 1 - epsilon unreachable with finite thresholds
};

// Joint calibration at miscoverage epsilon: find the smallest shared
// order-statistic rank r such that the empirical copula, evaluated at
// the per-step probability transforms of the r-th order statistics,
// reaches 1 - epsilon.  The copula value is monotone in r, so the
// search is an exact integer bisection.  When even r = n falls short
// every threshold escalates to +inf (and `achieved` is 1: infinite
// boxes cover everything).
[[nodiscard]] CopulaCalibration copula_calibrate(const HorizonScores& scores,
                                                 double epsilon,
                                                 Exec policy = Exec::parallel);

// Generic form of the same search for an arbitrary copula evaluator:
// smallest tau in `levels` (ascending) with value(tau, ..., tau) >=
// target, or nullopt when none qualifies.
[[nodiscard]] std::optional<double> shared_level_search(
    const std::function<double(std::span<const double>)>& copula_value,
    std::size_t dims, std::span<const double> levels, double target);

}  // namespace conformal::multi
