#pragma once

#include <functional>
#include <vector>

namespace vortexmf {

using RadialFn = std::function<double(double)>;

/// Trapezoid rule on [a, b] with interval doubling and Richardson
/// extrapolation (Romberg), stopped once two successive extrapolants differ
/// by less than rel_tol relative. At least 2^6 panels are used. Throws
/// std::runtime_error if 2^24 panels do not converge.
double romberg(const RadialFn& g, double a, double b, double rel_tol = 1e-10);

/// int_a^b g(r) dr for 0 <= a < b. The range is split at 1 and at every
/// breakpoint inside (a, b); pieces with b/a > 100 away from the origin are
/// integrated in the variable log r.
double radial_integral(const RadialFn& g, double a, double b,
                       const std::vector<double>& breakpoints = {}, double rel_tol = 1e-10);

/// Power-law decay exponent p of f ~ r^-p estimated from f(r/10) and f(r).
/// Returns +infinity when f(r) is zero.
double decay_exponent(const RadialFn& f, double r);

}  // namespace vortexmf
