#pragma once

#include <functional>

namespace eprnet {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  int max_segments = 4096;
  // When positive, integrate with this many equal-width Kronrod panels and
  // no adaptive refinement. Used for resolution-doubling checks.
  int fixed_panels = 0;
};

// Integral of f over [a, b] by adaptive Gauss-Kronrod (G7, K15).
// Throws QuadratureError if the tolerance cannot be met within the
// segment budget.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opts = {});

}  // namespace eprnet
