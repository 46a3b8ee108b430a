#pragma once

// Quadrature helpers for the closed-form spectra: adaptive Simpson with an
// absolute tolerance, bisection for isolated sign changes, and a composite
// trapezoid rule for smooth periodic integrands (with a Richardson-style
// convergence check).

#include <cmath>
#include <functional>
#include <vector>

#include "angular/errors.hpp"

namespace angular {

namespace detail {
template <typename F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm, double fb, double whole,
                            double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
}  // namespace detail

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-9, int max_depth = 40) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Bisection for a root of f in [a, b] with f(a) f(b) <= 0.
template <typename F>
double bisect(F&& f, double a, double b, double xtol = 1e-12) {
    double fa = f(a);
    for (int it = 0; it < 200 && (b - a) > xtol; ++it) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if ((fa <= 0.0) == (fm <= 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Sign-change locations of f on [a,b], scanned on a uniform grid and refined
// by bisection. Assumes isolated simple sign changes at the scan resolution.
template <typename F>
std::vector<double> sign_changes(F&& f, double a, double b, int scan_points = 4096,
                                 double xtol = 1e-12) {
    std::vector<double> roots;
    double h = (b - a) / scan_points;
    double x0 = a, f0 = f(a);
    for (int i = 1; i <= scan_points; ++i) {
        double x1 = a + i * h;
        double f1 = f(x1);
        if ((f0 < 0.0) != (f1 < 0.0)) roots.push_back(bisect(f, x0, x1, xtol));
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

// Composite trapezoid rule over one period of a smooth periodic integrand;
// spectrally accurate. Doubles the grid once and reports the difference so
// callers can assert convergence.
struct PeriodicIntegral {
    double value = 0.0;
    double refinement_delta = 0.0;
};

template <typename F>
PeriodicIntegral periodic_trapezoid(F&& f, double a, double b, int n) {
    auto sum = [&](int m) {
        double s = 0.0;
        double h = (b - a) / m;
        for (int i = 0; i < m; ++i) s += f(a + i * h);
        return s * h;
    };
    double coarse = sum(n / 2);
    double fine = sum(n);
    return {fine, std::abs(fine - coarse)};
}

}  // namespace angular
