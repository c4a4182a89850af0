#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "conformal/safety/warning.hpp"

using namespace conformal::safety;

TEST_CASE("unsafe and warn are closed at their boundaries") {
  CHECK(unsafe({0.0, 5.0}, 0.0));
  CHECK_FALSE(unsafe({0.001, 5.0}, 0.0));
  const WarningSystem sys{2.0, 0.1, 0.0};
  CHECK(warn(sys, 2.0));
  CHECK(warn(sys, -1.0));
  CHECK_FALSE(warn(sys, 2.0001));
}

TEST_CASE("alert threshold is the threshold plus an overshoot quantile") {
  // Unsafe episodes (phi <= 0) with overshoots max(phi_hat - 0, 0)
  // equal to 1..9; safe episodes must not affect calibration.
  std::vector<SafetyRecord> cal;
  for (int i = 1; i <= 9; ++i) {
    cal.push_back({-1.0, static_cast<double>(i)});
  }
  cal.push_back({3.0, 100.0});  // safe, ignored
  cal.push_back({5.0, -50.0});  // safe, ignored

  // 1 - epsilon = 0.9 over 9 scores + infinity: rank 9 -> overshoot 9.
  const auto sys = calibrate_warning(cal, 0.1, 0.0);
  CHECK(sys.alert_threshold == doctest::Approx(9.0));
  CHECK(sys.epsilon == 0.1);
  CHECK(sys.phi_threshold == 0.0);

  // A strict budget escalates past the sample: every episode warns.
  const auto strict = calibrate_warning(cal, 0.01, 0.0);
  CHECK(std::isinf(strict.alert_threshold));
  CHECK(warn(strict, 1.0e308));
}

TEST_CASE("predictor that never overshoots calibrates to the threshold itself") {
  std::vector<SafetyRecord> cal;
  for (int i = 0; i < 20; ++i) {
    const double phi = -1.0 - 0.1 * i;
    cal.push_back({phi, phi - 0.5});  // phi_hat below phi_threshold
  }
  const auto sys = calibrate_warning(cal, 0.25, 0.0);
  // All overshoots clamp to zero, so any finite rank lands on 0.
  CHECK(sys.alert_threshold == 0.0);
}

TEST_CASE("threshold is monotone in epsilon and permutation invariant") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<SafetyRecord> cal;
  for (int i = 0; i < 200; ++i) {
    const double phi = gauss(rng);
    cal.push_back({phi, phi + 0.4 * gauss(rng)});
  }

  double prev = std::numeric_limits<double>::infinity();
  for (const double eps : {0.02, 0.05, 0.1, 0.2, 0.5, 0.9}) {
    const auto sys = calibrate_warning(cal, eps, 0.0);
    CHECK(sys.alert_threshold <= prev);
    prev = sys.alert_threshold;
  }

  auto shuffled = cal;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  CHECK(calibrate_warning(shuffled, 0.1, 0.0).alert_threshold ==
        calibrate_warning(cal, 0.1, 0.0).alert_threshold);
}

TEST_CASE("calibration rejects unusable inputs") {
  std::vector<SafetyRecord> all_safe = {{1.0, 1.0}, {2.0, 2.0}};
  CHECK_THROWS_AS((void)calibrate_warning(all_safe, 0.1, 0.0), std::invalid_argument);
  std::vector<SafetyRecord> ok = {{-1.0, 0.0}};
  CHECK_THROWS_AS((void)calibrate_warning(ok, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)calibrate_warning(ok, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)calibrate_warning(ok, 0.1, std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS((void)calibrate_warning(std::vector<SafetyRecord>{}, 0.1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("evaluation counts the confusion table by hand") {
  const WarningSystem sys{0.5, 0.1, 0.0};
  const std::vector<SafetyRecord> test = {
      {-1.0, 0.3},   // unsafe, alert     (detected)
      {-2.0, 0.5},   // unsafe, alert     (boundary)
      {-0.5, 1.0},   // unsafe, no alert  (miss)
      {1.0, 0.0},    // safe, alert       (false alert)
      {2.0, 3.0},    // safe, no alert
      {0.0001, 4.0}  // safe, no alert
  };
  const auto m = evaluate_warning(sys, test);
  CHECK(m.unsafe_count == 3);
  CHECK(m.safe_count == 3);
  CHECK(m.alert_count == 3);
  CHECK(m.detection_rate == doctest::Approx(2.0 / 3.0));
  CHECK(m.false_alert_rate == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("empty classes report NaN rates rather than inventing numbers") {
  const WarningSystem sys{0.0, 0.1, 0.0};
  const std::vector<SafetyRecord> all_safe = {{1.0, 1.0}, {2.0, -1.0}};
  const auto m = evaluate_warning(sys, all_safe);
  CHECK(m.unsafe_count == 0);
  CHECK(std::isnan(m.detection_rate));
  CHECK(m.false_alert_rate == doctest::Approx(0.5));

  const std::vector<SafetyRecord> all_unsafe = {{-1.0, 1.0}};
  const auto m2 = evaluate_warning(sys, all_unsafe);
  CHECK(std::isnan(m2.false_alert_rate));
}

TEST_CASE("calibrated miss rate lands near epsilon on held-out data") {
  // The guarantee is conditional on being unsafe and one-sided:
  // miss <= epsilon.  Near-tightness additionally needs the overshoot
  // scores to be continuous where the quantile lands, which fails for
  // an unbiased monitor (most unsafe episodes then have phi_hat below
  // the threshold, piling an atom at score zero) but holds for an
  // optimistic one.
  std::mt19937_64 rng(2030);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto draw = [&](double bias) {
    const double phi = gauss(rng);
    return SafetyRecord{phi, phi + bias + 0.3 * gauss(rng)};
  };
  const double eps = 0.2;

  // Unbiased monitor: valid, and conservative because of the atom.
  std::vector<SafetyRecord> cal(2000), test(4000);
  for (auto& r : cal) r = draw(0.0);
  for (auto& r : test) r = draw(0.0);
  const auto sys = calibrate_warning(cal, eps, -0.5);
  const auto m = evaluate_warning(sys, test);
  // Binomial noise over roughly 1200 unsafe episodes: 4+ standard errors.
  CHECK(1.0 - m.detection_rate < eps + 0.05);

  // Optimistic monitor (reads +1 too safe): the scores are continuous
  // above zero, so the miss rate is near-tight on both sides.
  for (auto& r : cal) r = draw(1.0);
  for (auto& r : test) r = draw(1.0);
  const auto sys_opt = calibrate_warning(cal, eps, -0.5);
  const auto m_opt = evaluate_warning(sys_opt, test);
  const double miss = 1.0 - m_opt.detection_rate;
  CHECK(miss < eps + 0.05);
  CHECK(miss > eps - 0.06);
}
