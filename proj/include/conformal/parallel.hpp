#pragma once

namespace conformal {

// Execution policy for the data-parallel kernels (copula evaluation,
// ensemble fitting, coverage counting).  Every kernel has a serial
// reference path; `parallel` selects the OpenMP version and falls back
// to the serial path when OpenMP is unavailable.  Both paths produce
// bitwise-identical results: reductions are integer counts and all
// floating-point writes go to disjoint slots.
enum class Exec { serial, parallel };

[[nodiscard]] bool openmp_enabled(Exec policy) noexcept;
[[nodiscard]] int max_threads() noexcept;

}  // namespace conformal
