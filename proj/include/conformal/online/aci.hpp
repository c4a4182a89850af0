#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "conformal/core/split_conformal.hpp"
#include "conformal/online/stream.hpp"

namespace conformal::online {

// Adaptive-level state.  The working level `alpha` follows
//   alpha <- alpha + gamma * (target_alpha - err)
// and may legitimately leave (0, 1): at or below 0 the interval is the
// whole space (err is then 0 by definition), at or above 1 it is empty
// (err is 1).  Those endpoint rules are what keep alpha within
// (-gamma, 1 + gamma) and make the long-run error bound hold for any
// data sequence.
struct AciState {
  double alpha = 0.1;          // current working level
  double target_alpha = 0.1;   // long-run miscoverage target
  double initial_alpha = 0.1;  // alpha at t = 1, enters the bound
  double gamma = 0.005;        // step size, >= 0
  std::size_t window_size = 100;
  std::deque<double> window_scores;  // most recent scores, oldest first
  std::vector<std::uint8_t> err_history;
};

[[nodiscard]] AciState make_aci_state(double target_alpha, double gamma,
                                      std::size_t window_size = 100);

// Seeds the sliding score window (typically with residuals from the
// end of the training period).  Keeps at most `window_size` newest.
void aci_observe_score(AciState& state, double score);

// Records the miss indicator for the step just evaluated and moves
// alpha.  `err` must already respect the endpoint rules; aci_step
// below takes care of that.
void aci_update(AciState& state, bool err);

// Interval at the current working level: whole space when alpha <= 0,
// empty when alpha >= 1, otherwise the split-conformal interval at
// level 1 - alpha over the score window (with augmentation).
[[nodiscard]] core::PredictionInterval aci_interval(const AciState& state,
                                                    std::span<const double> x,
                                                    const core::Forecaster& model,
                                                    const core::ScoreFunction& score);

// One full online step: issue interval, derive err from the realized
// value under the endpoint rules, update alpha, push the score into
// the window.  Returns the issued interval's record.
[[nodiscard]] StreamRecord aci_step(AciState& state, std::size_t t,
                                    std::span<const double> x, std::span<const double> y,
                                    const core::Forecaster& model,
                                    const core::ScoreFunction& score);

[[nodiscard]] std::vector<StreamRecord> aci_run(AciState& state,
                                                const core::Dataset& stream,
                                                const core::Forecaster& model,
                                                const core::ScoreFunction& score);

// (|mean err - target|, (max(initial, 1 - initial) + gamma) / (gamma T));
// the first never exceeds the second, for any sequence.
[[nodiscard]] std::pair<double, double> aci_bound_check(const AciState& state);

}  // namespace conformal::online
