#pragma once

#include <cmath>

namespace lml {

// Logistic function evaluated through exp(-|t|) so it never overflows.
inline double sigmoid(double t) {
  const double z = std::exp(-std::abs(t));
  return t >= 0.0 ? 1.0 / (1.0 + z) : z / (1.0 + z);
}

}  // namespace lml
