#pragma once

// Adaptive Gauss-Legendre quadrature on finite intervals.
//
// integrate_adaptive uses a nested 15/31-point Gauss-Legendre pair: each
// subinterval is evaluated with both rules and the difference serves as the
// local error estimate.  Intervals whose estimate exceeds their share of the
// absolute tolerance are bisected.  Node/weight tables are computed once at
// startup by Newton iteration on the Legendre polynomials, so there is no
// dependence on tabulated constants.

#include <functional>
#include <stdexcept>

namespace pagen {

struct QuadratureResult {
    double value = 0.0;        // integral estimate
    double error_estimate = 0.0;  // accumulated |GL31 - GL15| over accepted intervals
    bool converged = false;    // true if error_estimate <= abs_tol
    int intervals = 0;         // number of accepted subintervals
};

// Thrown when subdivision cannot reach the requested tolerance.  Carries the
// achieved error estimate so callers can report how close the result is.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

// Integrate f over [lo, hi] to absolute tolerance abs_tol.
// Throws QuadratureError if max_intervals subdivisions are exhausted.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    double abs_tol = 1e-10,
                                    int max_intervals = 20000);

}  // namespace pagen
