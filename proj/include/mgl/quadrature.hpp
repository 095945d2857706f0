#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace mgl {

// Fixed 5-point Gauss-Legendre rule on [a,b]; exact for polynomials up to
// degree 9.
template <class F>
double gauss_legendre_5(F&& f, double a, double b) {
    static const double x[5] = {
        -0.9061798459386639928, -0.5384693101056830910, 0.0,
        0.5384693101056830910, 0.9061798459386639928};
    static const double w[5] = {
        0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
        0.4786286704993664680, 0.2369268850561890875};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * f(c + h * x[i]);
    return s * h;
}

namespace detail {

template <class F>
double adaptive_simpson_rec(F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("adaptive_simpson: depth limit");
    if (std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                                depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                                depth - 1);
}

}  // namespace detail

// Adaptive Simpson with absolute tolerance tol; recursion capped at depth 48.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol,
                        int depth = 48) {
    if (!(b >= a)) throw std::invalid_argument("adaptive_simpson: b < a");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol,
                                        depth);
}

// Relative-tolerance wrapper: two passes, the first estimates the scale.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
    double rough = adaptive_simpson(f, a, b, 1e-8);
    double scale = std::max(std::fabs(rough), 1e-30);
    return adaptive_simpson(f, a, b, rel_tol * scale);
}

}  // namespace mgl
