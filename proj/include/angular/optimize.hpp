#pragma once

// Derivative-free scalar and 2D minimization used for the angular-spectrum
// interval endpoints: golden-section refinement seeded by a uniform grid, and
// a small Nelder-Mead simplex for two circle parameters. Maximization runs
// through the same code on the negated objective.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace angular {

struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section search on [a, b]; assumes a local minimum was bracketed.
template <typename F>
ScalarMinimum golden_section(F&& f, double a, double b, double xtol = 1e-10, int max_iter = 200) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

// Multi-start 1D minimization over a periodic parameter in [0, period):
// evaluate a uniform grid, then polish every strict local minimum cell with
// golden-section in its bracket. Ties resolve to the smaller parameter.
template <typename F>
ScalarMinimum minimize_periodic(F&& f, double period, int grid_points, double xtol = 1e-10) {
    int n = std::max(grid_points, 4);
    std::vector<double> fx(n);
    double h = period / n;
    for (int i = 0; i < n; ++i) fx[i] = f(i * h);
    ScalarMinimum best{0.0, fx[0]};
    for (int i = 0; i < n; ++i) {
        double fprev = fx[(i + n - 1) % n], fnext = fx[(i + 1) % n];
        if (fx[i] <= fprev && fx[i] <= fnext) {
            double a = (i - 1) * h, b = (i + 1) * h;
            ScalarMinimum local = golden_section(f, a, b, xtol);
            if (local.value < best.value - 1e-15 ||
                (std::abs(local.value - best.value) <= 1e-15 && local.x < best.x)) {
                best = local;
                // Wrap the argmin into [0, period).
                best.x = std::fmod(best.x + period, period);
            }
        }
    }
    return best;
}

struct Minimum2D {
    std::array<double, 2> x{0.0, 0.0};
    double value = 0.0;
};

// Nelder-Mead for two parameters, started from a given point with scale h.
template <typename F>
Minimum2D nelder_mead2(F&& f, std::array<double, 2> start, double h, double ftol = 1e-12,
                       int max_iter = 400) {
    struct P {
        std::array<double, 2> x;
        double fx;
    };
    auto eval = [&](std::array<double, 2> x) { return P{x, f(x[0], x[1])}; };
    std::array<P, 3> s = {eval(start), eval({start[0] + h, start[1]}), eval({start[0], start[1] + h})};
    auto order = [&] { std::sort(s.begin(), s.end(), [](const P& a, const P& b) { return a.fx < b.fx; }); };
    order();
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(s[2].fx - s[0].fx) < ftol) break;
        std::array<double, 2> c{0.5 * (s[0].x[0] + s[1].x[0]), 0.5 * (s[0].x[1] + s[1].x[1])};
        auto pt = [&](double t) {
            return std::array<double, 2>{c[0] + t * (c[0] - s[2].x[0]), c[1] + t * (c[1] - s[2].x[1])};
        };
        P refl = eval(pt(1.0));
        if (refl.fx < s[0].fx) {
            P exp = eval(pt(2.0));
            s[2] = exp.fx < refl.fx ? exp : refl;
        } else if (refl.fx < s[1].fx) {
            s[2] = refl;
        } else {
            P contr = eval(pt(refl.fx < s[2].fx ? 0.5 : -0.5));
            if (contr.fx < std::min(refl.fx, s[2].fx)) {
                s[2] = contr;
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].x = {0.5 * (s[i].x[0] + s[0].x[0]), 0.5 * (s[i].x[1] + s[0].x[1])};
                    s[i] = eval(s[i].x);
                }
            }
        }
        order();
    }
    return {s[0].x, s[0].fx};
}

// Multi-start 2D minimization over a periodic box [0,p0) x [0,p1): seed grid,
// polish the best cells with Nelder-Mead.
template <typename F>
Minimum2D minimize_periodic2(F&& f, double p0, double p1, int grid, double ftol = 1e-12) {
    int n = std::max(grid, 3);
    Minimum2D best{{0.0, 0.0}, f(0.0, 0.0)};
    std::vector<std::array<double, 3>> cells;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double x = i * p0 / n, y = j * p1 / n;
            cells.push_back({f(x, y), x, y});
        }
    std::sort(cells.begin(), cells.end());
    int polish = std::min<int>(4, static_cast<int>(cells.size()));
    for (int k = 0; k < polish; ++k) {
        Minimum2D m = nelder_mead2(f, {cells[k][1], cells[k][2]}, 0.5 * p0 / n, ftol);
        if (m.value < best.value - 1e-15 ||
            (std::abs(m.value - best.value) <= 1e-15 &&
             (m.x[0] < best.x[0] || (m.x[0] == best.x[0] && m.x[1] < best.x[1])))) {
            best = m;
            best.x[0] = std::fmod(best.x[0] + 4 * p0, p0);
            best.x[1] = std::fmod(best.x[1] + 4 * p1, p1);
        }
    }
    return best;
}

}  // namespace angular
