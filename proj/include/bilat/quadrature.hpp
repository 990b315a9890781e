#pragma once

// Composite trapezoid with Richardson refinement for smooth scalar
// integrands on a finite interval.

#include <functional>

namespace bilat {

struct QuadratureResult {
    double value = 0.0;
    int levels = 0;       // number of halvings performed
    double last_change = 0.0;
};

/// Integrates f over [a, b]; the grid is halved and Richardson-combined
/// until two successive extrapolated estimates agree to rel_tol.
/// Throws ConvergenceError if max_levels is exhausted first.
QuadratureResult richardson_trapezoid(const std::function<double(double)>& f, double a,
                                      double b, double rel_tol = 1e-8, int max_levels = 24);

}  // namespace bilat
