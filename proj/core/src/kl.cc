#include "oti/kl.h"

#include <cmath>
#include <limits>

#include "oti/errors.h"

namespace oti {
namespace {

// x log(x / y), with the 0 log 0 convention.
double xlogxy(double x, double y) {
  if (x == 0.0) return 0.0;
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  return x * std::log(x / y);
}

}  // namespace

double kl_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw DomainError("kl_bernoulli arguments must lie in [0, 1]");
  }
  if (p == q) return 0.0;
  const double kl = xlogxy(p, q) + xlogxy(1.0 - p, 1.0 - q);
  // Rounding can push the value a hair below zero when p ~ q.
  return kl < 0.0 ? 0.0 : kl;
}

}  // namespace oti
