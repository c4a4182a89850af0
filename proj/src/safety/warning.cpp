#include "conformal/safety/warning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "conformal/core/quantile.hpp"

namespace conformal::safety {

bool unsafe(const SafetyRecord& rec, double phi_threshold) {
  return rec.phi <= phi_threshold;
}

bool warn(const WarningSystem& system, double phi_hat) {
  return phi_hat <= system.alert_threshold;
}

WarningSystem calibrate_warning(std::span<const SafetyRecord> cal, double epsilon,
                                double phi_threshold) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  }
  if (!std::isfinite(phi_threshold)) {
    throw std::invalid_argument("phi_threshold must be finite");
  }
  std::vector<double> scores;
  for (const auto& rec : cal) {
    if (!std::isfinite(rec.phi) || !std::isfinite(rec.phi_hat)) {
      throw std::invalid_argument("safety records must be finite");
    }
    if (unsafe(rec, phi_threshold)) {
      scores.push_back(std::max(rec.phi_hat - phi_threshold, 0.0));
    }
  }
  if (scores.empty()) {
    throw std::invalid_argument(
        "no unsafe episodes in calibration set; conditional guarantee undefined");
  }
  const double q = core::empirical_quantile(1.0 - epsilon, scores,
                                            /*augment_with_infinity=*/true);
  WarningSystem system;
  system.alert_threshold = phi_threshold + q;  // +inf when q escalates
  system.epsilon = epsilon;
  system.phi_threshold = phi_threshold;
  return system;
}

WarningMetrics evaluate_warning(const WarningSystem& system,
                                std::span<const SafetyRecord> test) {
  if (test.empty()) throw std::invalid_argument("test set is empty");
  WarningMetrics m;
  std::size_t unsafe_alerts = 0;
  std::size_t safe_alerts = 0;
  for (const auto& rec : test) {
    const bool alerted = warn(system, rec.phi_hat);
    m.alert_count += alerted ? 1 : 0;
    if (unsafe(rec, system.phi_threshold)) {
      ++m.unsafe_count;
      unsafe_alerts += alerted ? 1 : 0;
    } else {
      ++m.safe_count;
      safe_alerts += alerted ? 1 : 0;
    }
  }
  m.detection_rate = m.unsafe_count == 0
                         ? std::numeric_limits<double>::quiet_NaN()
                         : static_cast<double>(unsafe_alerts) /
                               static_cast<double>(m.unsafe_count);
  m.false_alert_rate = m.safe_count == 0
                           ? std::numeric_limits<double>::quiet_NaN()
                           : static_cast<double>(safe_alerts) /
                                 static_cast<double>(m.safe_count);
  return m;
}

}  // namespace conformal::safety
