#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conformal/core/types.hpp"
#include "conformal/safety/warning.hpp"

namespace conformal::cli {

// Malformed or unreadable input data (exit code 3 at the CLI).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal form; "inf"/"-inf" for infinities.
[[nodiscard]] std::string format_double(double v);

// Writes via a temporary file in the same directory plus rename, so a
// crash never leaves a partial file behind.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

[[nodiscard]] std::string read_text(const std::filesystem::path& path);

// Tabular series file: header `t,x1,...,xd,y1,...,ym` (d may be 0),
// rows in time order.  The t column is positional only.
[[nodiscard]] core::Dataset read_series_csv(const std::filesystem::path& path);

// Long-format trajectories: header `series_id,t,y`; rows of one series
// are consecutive in time order.  Series appear in first-occurrence
// order.
struct MultiSeries {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> series;
};
[[nodiscard]] MultiSeries read_multi_series_csv(const std::filesystem::path& path);

// One row per series: the first t_in values as features, the next
// `horizon` as targets.  Series shorter than t_in + horizon are a
// data error; longer ones use their prefix.
[[nodiscard]] core::Dataset windows_from_series(const MultiSeries& data, std::size_t t_in,
                                                std::size_t horizon);

// Safety episodes: header `phi,phi_hat`.
[[nodiscard]] std::vector<safety::SafetyRecord> read_safety_csv(
    const std::filesystem::path& path);

}  // namespace conformal::cli
