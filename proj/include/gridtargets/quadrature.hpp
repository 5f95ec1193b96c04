#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace gridtargets {

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                            double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    // Accept when the refinement is within tolerance, below local roundoff
    // (cancellation noise near zeros of f cannot be refined away), or the
    // interval has been halved depth times; the leftover per-leaf error is
    // O(noise * width) and cannot accumulate past the noise floor.
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol ||
        std::fabs(delta) <= 4e-16 * (std::fabs(left) + std::fabs(right)))
        return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to the given relative tolerance
/// (refinement stops early at the roundoff floor or after max_depth halvings).
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10, int max_depth = 28) {
    if (!(b > a))
        return 0.0;
    const double fa = f(a), fb = f(b);
    const double m = 0.5 * (a + b), fm = f(m);
    const double whole = detail::simpson(a, fa, b, fb, fm);
    const double scale = std::fabs(whole) > 1e-300 ? std::fabs(whole) : 1.0;
    return detail::adaptive_step(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, max_depth);
}

}  // namespace gridtargets
