#pragma once

#include <functional>
#include <vector>

namespace semirv {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;       // absolute floor added to the target
    int max_levels = 60;        // bisection depth cap per seeded panel
    std::size_t max_intervals = 200000;
    bool throw_on_failure = true;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

// Globally adaptive Gauss-Kronrod (G7/K15).  The initial partition is seeded
// at `breakpoints` (integrand kinks); panels are then bisected worst-error
// first until |error| <= max(abs_tol, rel_tol * |value|).  Throws
// AccuracyError when the budget runs out, unless throw_on_failure is off.
QuadratureResult integrate(const std::function<double(double)>& f,
                           double a, double b,
                           const std::vector<double>& breakpoints = {},
                           const QuadratureOptions& opts = {});

}  // namespace semirv
