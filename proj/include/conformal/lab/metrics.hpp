#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "conformal/core/types.hpp"
#include "conformal/multihorizon/horizon_scores.hpp"
#include "conformal/parallel.hpp"

namespace conformal::lab {

// Fraction of rows whose target falls inside the paired interval.
// Intervals and truths are matched by index.
[[nodiscard]] double coverage(std::span<const core::PredictionInterval> intervals,
                              const core::Dataset& truths, Exec policy = Exec::parallel);

// Fraction of trajectories covered at every step simultaneously.
[[nodiscard]] double joint_coverage(std::span<const multi::RegionSet> regions,
                                    const core::Dataset& truths,
                                    Exec policy = Exec::parallel);

[[nodiscard]] double mean_width(std::span<const core::PredictionInterval> intervals);
[[nodiscard]] double mean_total_width(std::span<const multi::RegionSet> regions);

// Coverage over every full window of the miss sequence; entry t is
// the coverage of steps [t, t + window).  Window must not exceed the
// sequence length.
[[nodiscard]] std::vector<double> rolling_coverage(std::span<const std::uint8_t> errs,
                                                   std::size_t window);

// Rank correlation with average ranks on ties; NaN when either side
// is constant.
[[nodiscard]] double spearman_correlation(std::span<const double> a,
                                          std::span<const double> b);

}  // namespace conformal::lab
