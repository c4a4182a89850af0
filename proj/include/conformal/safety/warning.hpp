#pragma once

#include <cstddef>
#include <span>

namespace conformal::safety {

// One monitored episode: the realized safety margin phi and the
// monitor's prediction of it.  Smaller means less safe; the episode is
// unsafe when phi <= phi_threshold.
struct SafetyRecord {
  double phi = 0.0;
  double phi_hat = 0.0;
};

// Alert rule on the predicted margin: warn when phi_hat <=
// alert_threshold (boundary included).  Calibrated so that, among
// unsafe episodes, the miss probability is at most epsilon.
struct WarningSystem {
  double alert_threshold = 0.0;
  double epsilon = 0.0;
  double phi_threshold = 0.0;
};

[[nodiscard]] bool unsafe(const SafetyRecord& rec, double phi_threshold);
[[nodiscard]] bool warn(const WarningSystem& system, double phi_hat);

// One-sided conformal calibration on the unsafe subpopulation: the
// score of an unsafe episode is how far the predictor overshot the
// safety threshold, max(phi_hat - phi_threshold, 0); the alert
// threshold is phi_threshold plus the level-(1 - epsilon) augmented
// quantile of those scores.  Throws when the calibration set contains
// no unsafe episode (the conditional guarantee is then undefined).
[[nodiscard]] WarningSystem calibrate_warning(std::span<const SafetyRecord> cal,
                                              double epsilon, double phi_threshold);

struct WarningMetrics {
  double detection_rate = 0.0;    // alerts among unsafe episodes
  double false_alert_rate = 0.0;  // alerts among safe episodes
  std::size_t unsafe_count = 0;
  std::size_t safe_count = 0;
  std::size_t alert_count = 0;
};

[[nodiscard]] WarningMetrics evaluate_warning(const WarningSystem& system,
                                              std::span<const SafetyRecord> test);

}  // namespace conformal::safety
