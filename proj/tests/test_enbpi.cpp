#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "conformal/lab/forecasters.hpp"
#include "conformal/online/enbpi.hpp"

using namespace conformal;
using namespace conformal::online;

namespace {

struct ConstModel final : core::Forecaster {
  double c;
  explicit ConstModel(double v) : c(v) {}
  std::size_t target_dim() const override { return 1; }
  std::vector<double> predict(std::span<const double>) const override { return {c}; }
};

core::Dataset series_of(std::span<const double> ys) {
  core::Dataset data(1, 1);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double x = static_cast<double>(i);
    data.add_row({&x, 1}, {&ys[i], 1});
  }
  return data;
}

core::Dataset ar1_series(std::size_t n, double rho, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  core::Dataset data(1, 1);
  double prev = 0.0;
  for (std::size_t i = 0; i < n + 1; ++i) {
    const double next = rho * prev + noise(rng);
    if (i > 0) data.add_row({&prev, 1}, {&next, 1});
    prev = next;
  }
  return data;
}

}  // namespace

TEST_CASE("aggregation rules") {
  const std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
  CHECK(aggregate(v, Aggregation::mean) == doctest::Approx(2.5));
  CHECK(aggregate(v, Aggregation::median) == doctest::Approx(2.5));
  const std::vector<double> odd = {5.0, 1.0, 3.0};
  CHECK(aggregate(odd, Aggregation::median) == 3.0);
  CHECK_THROWS_AS((void)aggregate(std::vector<double>{}, Aggregation::mean),
                  std::invalid_argument);
}

TEST_CASE("out-of-bag residuals use exactly the excluding models") {
  std::vector<std::shared_ptr<const core::Forecaster>> models = {
      std::make_shared<ConstModel>(10.0), std::make_shared<ConstModel>(20.0),
      std::make_shared<ConstModel>(30.0)};
  // Row 0 trained only model 0; row 1 trained all three; row 2 trained
  // models 1 and 2.
  const std::vector<std::vector<bool>> membership = {
      {true, true, false}, {false, true, true}, {false, true, true}};
  const std::vector<double> ys = {0.0, 100.0, 7.0};
  const auto series = series_of(ys);

  for (const auto policy : {Exec::serial, Exec::parallel}) {
    const auto loo = leave_one_out_residuals(models, membership, series,
                                             Aggregation::mean, policy);
    REQUIRE(loo.residuals.size() == 3);
    // Row 0: models 1, 2 exclude it -> mean(20, 30) = 25.
    CHECK(loo.residuals[0] == doctest::Approx(25.0));
    // Row 1: no model excludes it -> full ensemble mean 20.
    CHECK(loo.residuals[1] == doctest::Approx(80.0));
    CHECK(loo.never_left_out == 1);
    // Row 2: only model 0 excludes it -> 10.
    CHECK(loo.residuals[2] == doctest::Approx(3.0));
  }
}

TEST_CASE("interval centers on the full-ensemble aggregate") {
  EnbpiState state;
  state.models = {std::make_shared<ConstModel>(1.0), std::make_shared<ConstModel>(3.0)};
  state.aggregation = Aggregation::mean;
  state.target_dim = 1;
  state.feature_dim = 1;
  state.train_length = 4;
  state.window = 1;
  state.residuals = {1.0, 2.0, 3.0, 4.0};

  const double x = 0.0;
  // Level 0.75 over 4 residuals, no augmentation: rank 3 -> 3.
  const auto iv = enbpi_interval(state, {&x, 1}, core::ConfidenceLevel(0.25));
  CHECK(iv.lo(0) == doctest::Approx(2.0 - 3.0));
  CHECK(iv.hi(0) == doctest::Approx(2.0 + 3.0));
}

TEST_CASE("recalibration slides the residual buffer without refitting") {
  EnbpiState state;
  state.models = {std::make_shared<ConstModel>(0.0)};
  state.aggregation = Aggregation::mean;
  state.target_dim = 1;
  state.feature_dim = 1;
  state.train_length = 5;
  state.window = 2;
  state.residuals = {1.0, 2.0, 3.0, 4.0, 5.0};

  const auto block = series_of(std::vector<double>{-7.0, 6.0});
  enbpi_recalibrate(state, block);
  REQUIRE(state.residuals.size() == 5);
  CHECK(state.residuals[0] == 3.0);
  CHECK(state.residuals[1] == 4.0);
  CHECK(state.residuals[2] == 5.0);
  CHECK(state.residuals[3] == 7.0);  // |-7 - 0|
  CHECK(state.residuals[4] == 6.0);

  // Wrong block length is rejected.
  const auto bad = series_of(std::vector<double>{1.0});
  CHECK_THROWS_AS(enbpi_recalibrate(state, bad), std::invalid_argument);
}

TEST_CASE("fit is deterministic and policy independent") {
  const auto series = ar1_series(60, 0.7, 1.0, 99);
  const auto recipe = lab::linear_recipe();
  const auto a = enbpi_fit(series, recipe, 8, Aggregation::mean, 3, 123, Exec::serial);
  const auto b = enbpi_fit(series, recipe, 8, Aggregation::mean, 3, 123, Exec::parallel);
  REQUIRE(a.residuals.size() == b.residuals.size());
  for (std::size_t i = 0; i < a.residuals.size(); ++i) {
    CHECK(a.residuals[i] == b.residuals[i]);  // bitwise equal
  }
  CHECK(a.never_left_out == b.never_left_out);
  for (std::size_t bdx = 0; bdx < a.membership.size(); ++bdx) {
    CHECK(a.membership[bdx] == b.membership[bdx]);
  }

  const auto c = enbpi_fit(series, recipe, 8, Aggregation::mean, 3, 124, Exec::serial);
  CHECK(a.membership != c.membership);
}

TEST_CASE("bootstrap samples cover a plausible fraction of rows") {
  const auto series = ar1_series(200, 0.5, 1.0, 7);
  const auto state =
      enbpi_fit(series, lab::constant_recipe(), 25, Aggregation::mean, 5, 5);
  // Each bootstrap sample holds about 1 - 1/e of the rows.
  for (const auto& row : state.membership) {
    const auto in = static_cast<double>(std::count(row.begin(), row.end(), true));
    CHECK(in / 200.0 > 0.5);
    CHECK(in / 200.0 < 0.75);
  }
  // With 25 models, rows left out by no model at all are rare.
  CHECK(state.never_left_out <= 2);
}

TEST_CASE("stream run equals a manual interval/recalibrate loop") {
  const auto series = ar1_series(80, 0.6, 1.0, 31);
  const auto stream = ar1_series(21, 0.6, 1.0, 32);
  const core::ConfidenceLevel level(0.2);

  auto state = enbpi_fit(series, lab::linear_recipe(), 6, Aggregation::median, 4, 55);
  auto mirror = state;
  const auto records = enbpi_run(state, stream, level);
  REQUIRE(records.size() == stream.size());

  core::Dataset block(1, 1);
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const auto iv = enbpi_interval(mirror, stream.x(t), level);
    CHECK(records[t].lo == iv.lo(0));
    CHECK(records[t].hi == iv.hi(0));
    CHECK(records[t].err == !iv.contains(stream.y(t)));
    CHECK(records[t].alpha == 0.2);
    block.add_row(stream.x(t), stream.y(t));
    if (block.size() == 4) {
      enbpi_recalibrate(mirror, block);
      block = core::Dataset(1, 1);
    }
  }
  // 21 steps with window 4: five recalibrations happened, one pending.
  CHECK(state.residuals == mirror.residuals);
}

TEST_CASE("fit rejects degenerate parameters") {
  const auto series = ar1_series(10, 0.5, 1.0, 1);
  CHECK_THROWS_AS((void)enbpi_fit(series, lab::linear_recipe(), 0, Aggregation::mean, 1, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)enbpi_fit(series, lab::linear_recipe(), 2, Aggregation::mean, 0, 1),
                  std::invalid_argument);
}
