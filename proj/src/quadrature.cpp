#include "bilat/quadrature.hpp"

#include <cmath>
#include <cstdlib>

#include "bilat/errors.hpp"

namespace bilat {

QuadratureResult richardson_trapezoid(const std::function<double(double)>& f, double a,
                                      double b, double rel_tol, int max_levels) {
    long n = 8;
    double h = (b - a) / static_cast<double>(n);
    double t = 0.5 * (f(a) + f(b));
    for (long i = 1; i < n; ++i) t += f(a + h * static_cast<double>(i));
    t *= h;

    double prev_t = t;
    double prev_r = t;
    QuadratureResult out;
    for (int level = 1; level <= max_levels; ++level) {
        // refine: add the midpoints of the current panels
        double mids = 0.0;
        for (long i = 0; i < n; ++i) mids += f(a + h * (static_cast<double>(i) + 0.5));
        n *= 2;
        h *= 0.5;
        t = 0.5 * prev_t + h * mids;

        const double r = (4.0 * t - prev_t) / 3.0;
        const double change = std::abs(r - prev_r);
        out.value = r;
        out.levels = level;
        out.last_change = change;
        if (!std::isfinite(r)) throw NumericError("richardson_trapezoid: non-finite estimate");
        if (level >= 2 && change <= rel_tol * std::max(std::abs(r), 1e-300)) return out;
        prev_t = t;
        prev_r = r;
    }
    throw ConvergenceError("richardson_trapezoid: tolerance not reached", out.last_change);
}

}  // namespace bilat
