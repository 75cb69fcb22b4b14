#include "fedgraph/rng.hpp"

#include <cmath>
#include <numbers>

namespace fedgraph::rng {

double normal(uint64_t key, uint64_t counter) {
  // u1 nudged away from 0 so log() stays finite
  double u1 = uniform(key, 2 * counter);
  double u2 = uniform(key, 2 * counter + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fedgraph::rng
