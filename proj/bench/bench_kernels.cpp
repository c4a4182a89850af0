// Timing harness for the OpenMP kernels against their serial reference
// paths.  Each section checks that both policies produce identical
// results before reporting the speedup.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "conformal/core/types.hpp"
#include "conformal/lab/forecasters.hpp"
#include "conformal/lab/generators.hpp"
#include "conformal/lab/metrics.hpp"
#include "conformal/multihorizon/copula.hpp"
#include "conformal/online/enbpi.hpp"
#include "conformal/parallel.hpp"

using namespace conformal;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& f, int reps) {
  const auto start = Clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto stop = Clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count() /
         static_cast<double>(reps);
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-22s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              identical ? "identical" : "MISMATCH");
}

void bench_copula() {
  constexpr std::size_t n = 4000;
  constexpr std::size_t k = 8;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<std::vector<double>> per_step(k, std::vector<double>(n));
  for (auto& step : per_step) {
    for (auto& s : step) s = std::abs(gauss(rng));
  }
  const multi::HorizonScores scores(std::move(per_step));

  multi::CopulaCalibration serial_out, parallel_out;
  const double serial_ms =
      time_ms([&] { serial_out = multi::copula_calibrate(scores, 0.1, Exec::serial); }, 3);
  const double parallel_ms = time_ms(
      [&] { parallel_out = multi::copula_calibrate(scores, 0.1, Exec::parallel); }, 3);
  const bool same = serial_out.thresholds == parallel_out.thresholds &&
                    serial_out.achieved == parallel_out.achieved &&
                    serial_out.shared_rank == parallel_out.shared_rank;
  report("copula_calibrate", serial_ms, parallel_ms, same);
}

void bench_enbpi_fit() {
  lab::GeneratorSpec spec;
  spec.kind = lab::GeneratorSpec::Kind::ar1;
  spec.n = 1500;
  spec.seed = 11;
  const core::Dataset series = lab::generate_tabular(spec);
  const auto recipe = lab::linear_recipe(1e-6);

  online::EnbpiState serial_state, parallel_state;
  const double serial_ms = time_ms(
      [&] {
        serial_state = online::enbpi_fit(series, recipe, 40, online::Aggregation::mean,
                                         10, 21, Exec::serial);
      },
      3);
  const double parallel_ms = time_ms(
      [&] {
        parallel_state = online::enbpi_fit(series, recipe, 40, online::Aggregation::mean,
                                           10, 21, Exec::parallel);
      },
      3);
  const bool same = serial_state.residuals == parallel_state.residuals &&
                    serial_state.never_left_out == parallel_state.never_left_out;
  report("enbpi_fit", serial_ms, parallel_ms, same);
}

void bench_coverage() {
  constexpr std::size_t n = 2'000'000;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  core::Dataset truths(0, 1);
  truths.reserve(n);
  std::vector<core::PredictionInterval> intervals;
  intervals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = gauss(rng);
    truths.add_row({}, {&y, 1});
    const double c = gauss(rng);
    intervals.push_back(core::PredictionInterval({c - 1.0}, {c + 1.0}));
  }

  double serial_cov = 0.0, parallel_cov = 0.0;
  const double serial_ms =
      time_ms([&] { serial_cov = lab::coverage(intervals, truths, Exec::serial); }, 5);
  const double parallel_ms =
      time_ms([&] { parallel_cov = lab::coverage(intervals, truths, Exec::parallel); }, 5);
  report("coverage", serial_ms, parallel_ms, serial_cov == parallel_cov);
}

}  // namespace

int main() {
  std::printf("openmp: %s, max threads: %d\n",
              openmp_enabled(Exec::parallel) ? "enabled" : "unavailable", max_threads());
  bench_copula();
  bench_enbpi_fit();
  bench_coverage();
  return 0;
}
