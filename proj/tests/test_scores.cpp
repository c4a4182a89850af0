#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>

#include "conformal/core/score.hpp"
#include "conformal/core/types.hpp"

using namespace conformal::core;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FixedPoint final : Forecaster {
  std::vector<double> value;
  explicit FixedPoint(std::vector<double> v) : value(std::move(v)) {}
  std::size_t target_dim() const override { return value.size(); }
  std::vector<double> predict(std::span<const double>) const override { return value; }
};

struct FixedBand final : Forecaster {
  QuantileBand band;
  explicit FixedBand(QuantileBand b) : band(std::move(b)) {}
  std::size_t target_dim() const override { return band.lo.size(); }
  std::vector<double> predict(std::span<const double>) const override {
    std::vector<double> mid(band.lo.size());
    for (std::size_t j = 0; j < mid.size(); ++j) mid[j] = 0.5 * (band.lo[j] + band.hi[j]);
    return mid;
  }
  std::optional<QuantileBand> predict_band(std::span<const double>) const override {
    return band;
  }
};

struct FixedScale final : ScaleEstimator {
  double value;
  explicit FixedScale(double v) : value(v) {}
  double scale(std::span<const double>) const override { return value; }
};

}  // namespace

TEST_CASE("dataset validates row shape and finiteness") {
  Dataset data(2, 1);
  const double x[2] = {1.0, 2.0};
  const double y = 3.0;
  data.add_row(x, {&y, 1});
  CHECK(data.size() == 1);
  CHECK(data.x(0)[1] == 2.0);

  const double bad_x[2] = {1.0, kInf};
  CHECK_THROWS_AS(data.add_row(bad_x, {&y, 1}), std::invalid_argument);
  const double short_x[1] = {1.0};
  CHECK_THROWS_AS(data.add_row({short_x, 1}, {&y, 1}), std::invalid_argument);

  const std::size_t idx[3] = {0, 0, 0};
  const Dataset rep = data.rows(idx);
  CHECK(rep.size() == 3);
  CHECK(rep.y(2)[0] == 3.0);
}

TEST_CASE("interval sentinels behave as sets") {
  const auto whole = PredictionInterval::unbounded(2);
  const auto nothing = PredictionInterval::empty_set(2);
  const double y[2] = {1e100, -1e100};
  CHECK(whole.contains(y));
  CHECK_FALSE(nothing.contains(y));
  CHECK(nothing.width() == 0.0);
  CHECK(whole.width() == kInf);
  CHECK(whole.is_unbounded());
  CHECK_FALSE(nothing.is_unbounded());
  CHECK(nothing.is_empty());

  CHECK_THROWS_AS(PredictionInterval({2.0}, {1.0}), std::invalid_argument);
  const PredictionInterval point({1.0}, {1.0});
  CHECK(point.contains(1.0));
  CHECK(point.width() == 0.0);
}

TEST_CASE("quantile-band score on hand values") {
  // Band [2, 6]: y = 7 overshoots by 1, y = 4 sits 2 inside.
  QuantileBand band{{2.0}, {6.0}};
  PredictionContext ctx;
  ctx.point = {4.0};
  ctx.band = band;
  const auto score = ScoreFunction::quantile_band();
  CHECK(score.evaluate(std::vector<double>{7.0}, ctx) == doctest::Approx(1.0));
  CHECK(score.evaluate(std::vector<double>{4.0}, ctx) == doctest::Approx(-2.0));
  CHECK(score.evaluate(std::vector<double>{2.0}, ctx) == doctest::Approx(0.0));

  // Threshold 1 stretches the band one unit outward on both sides.
  const auto iv = score.invert(ctx, 1.0);
  CHECK(iv.lo(0) == doctest::Approx(1.0));
  CHECK(iv.hi(0) == doctest::Approx(7.0));

  // A negative threshold deeper than the half-width empties the set.
  CHECK(score.invert(ctx, -2.1).is_empty());
  CHECK_FALSE(score.invert(ctx, -2.0).is_empty());
}

TEST_CASE("absolute residual uses the worst coordinate") {
  const FixedPoint model({1.0, -1.0});
  const auto score = ScoreFunction::absolute_residual();
  const auto ctx = score.context_for(model, std::vector<double>{0.0});
  CHECK(score.evaluate(std::vector<double>{1.5, -3.0}, ctx) == doctest::Approx(2.0));
  const auto iv = score.invert(ctx, 2.0);
  CHECK(iv.lo(0) == doctest::Approx(-1.0));
  CHECK(iv.hi(1) == doctest::Approx(1.0));
}

TEST_CASE("normalized residual rejects degenerate scales") {
  const FixedPoint model({0.0});
  auto zero = std::make_shared<FixedScale>(0.0);
  const auto score = ScoreFunction::normalized_residual(zero);
  CHECK_THROWS_AS((void)score.context_for(model, std::vector<double>{0.0}),
                  std::runtime_error);
  CHECK_THROWS_AS((void)ScoreFunction::normalized_residual(nullptr), std::invalid_argument);

  auto two = std::make_shared<FixedScale>(2.0);
  const auto ok = ScoreFunction::normalized_residual(two);
  const auto ctx = ok.context_for(model, std::vector<double>{0.0});
  CHECK(ok.evaluate(std::vector<double>{3.0}, ctx) == doctest::Approx(1.5));
  const auto iv = ok.invert(ctx, 1.5);
  CHECK(iv.hi(0) == doctest::Approx(3.0));
}

TEST_CASE("crossed quantile bands are reported, not silently scored") {
  PredictionContext ctx;
  ctx.point = {0.0};
  ctx.band = QuantileBand{{1.0}, {-1.0}};
  const auto score = ScoreFunction::quantile_band();
  CHECK_THROWS_AS((void)score.evaluate(std::vector<double>{0.0}, ctx), std::runtime_error);
}

TEST_CASE("point models cannot serve the quantile-band score") {
  const FixedPoint model({0.0});
  const auto score = ScoreFunction::quantile_band();
  CHECK_THROWS_AS((void)score.context_for(model, std::vector<double>{0.0}),
                  std::invalid_argument);
}

TEST_CASE("interval membership and score threshold agree everywhere") {
  // Values live on the 1/8 grid and scales are powers of two, so every
  // subtraction and rescale is exact and the q = s boundary case is
  // decided without rounding.
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> grid(-40, 40);
  const double scales[5] = {0.25, 0.5, 1.0, 2.0, 4.0};
  std::uniform_int_distribution<int> scale_pick(0, 4);
  std::uniform_int_distribution<int> kind_pick(0, 2);
  std::uniform_int_distribution<std::size_t> dim_pick(1, 4);
  const auto draw = [&] { return static_cast<double>(grid(rng)) / 8.0; };

  for (int trial = 0; trial < 4000; ++trial) {
    const std::size_t dim = dim_pick(rng);
    PredictionContext ctx;
    ctx.point.resize(dim);
    for (auto& v : ctx.point) v = draw();

    ScoreFunction score = ScoreFunction::absolute_residual();
    switch (kind_pick(rng)) {
      case 0:
        break;
      case 1: {
        score = ScoreFunction::normalized_residual(std::make_shared<FixedScale>(1.0));
        ctx.scale = scales[scale_pick(rng)];
        break;
      }
      default: {
        score = ScoreFunction::quantile_band();
        QuantileBand band;
        band.lo.resize(dim);
        band.hi.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) {
          const double a = draw(), b = draw();
          band.lo[j] = std::min(a, b);
          band.hi[j] = std::max(a, b);
        }
        ctx.band = band;
        break;
      }
    }

    std::vector<double> y(dim);
    for (auto& v : y) v = draw();
    const double s = score.evaluate(y, ctx);
    // Thresholds straddling the score, plus the exact boundary.
    for (const double q : {s - 0.25, s, s + 0.25}) {
      const auto iv = score.invert(ctx, q);
      CAPTURE(trial);
      CHECK(iv.contains(y) == (s <= q));
    }
  }
}
