#pragma once

#include <functional>
#include <vector>

namespace baq {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance
// abs_tol. Throws QuadratureError if the recursion bottoms out before
// the local error estimate is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 48);

// Same, but the interval is first split at the given interior points.
// Useful when the integrand has known kinks or near-singular endpoints.
double integrate_segmented(const std::function<double(double)>& f,
                           const std::vector<double>& breakpoints,
                           double abs_tol, int max_depth = 48);

}  // namespace baq
