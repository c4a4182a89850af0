#pragma once

#include <cstddef>

namespace conformal::online {

// One step of an online evaluation: the interval issued at time t, the
// realized value, the miss indicator, and the level in force when the
// interval was issued.
struct StreamRecord {
  std::size_t t = 0;
  double lo = 0.0;
  double hi = 0.0;
  double y = 0.0;
  bool err = false;
  double alpha = 0.0;
};

}  // namespace conformal::online
