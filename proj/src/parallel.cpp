#include "conformal/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace conformal {

bool openmp_enabled(Exec policy) noexcept {
#ifdef _OPENMP
  return policy == Exec::parallel;
#else
  (void)policy;
  return false;
#endif
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace conformal
