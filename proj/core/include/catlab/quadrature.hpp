#pragma once

#include <functional>

namespace catlab {

/// Adaptive Simpson quadrature of f over [a, b] with the given absolute error
/// target. Throws NoConvergence if the recursion depth is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10);

/// Solves g(x) = target for nondecreasing g on [lo, hi] by bisection until
/// |g(x) - target| <= residual_tol or the bracket collapses. Throws
/// InvalidArgument if target is not bracketed.
double bisect_increasing(const std::function<double(double)>& g, double target, double lo, double hi,
                         double residual_tol = 1e-10);

}  // namespace catlab
