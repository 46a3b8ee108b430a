#pragma once

// Independent oracles for the test suites: brute-force max-min angles over
// unit-circle grids, dense-product propagation with per-step scaling, and a
// normal-equations projector. These deliberately avoid the code paths they
// check.

#include <random>

#include "angular/grassmann.hpp"
#include "angular/system.hpp"

namespace oracles {

using namespace angular;

using Rng = std::mt19937_64;

inline Mat random_matrix(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
    return m;
}

inline Mat random_orthogonal(int d, Rng& rng) { return qr_thin(random_matrix(d, d, rng)).q; }

inline Subspace random_subspace(int d, int s, Rng& rng) {
    while (true) {
        Mat m = random_matrix(d, s, rng);
        SVDResult sv = svd(m);
        if (sv.sigma.back() > 1e-3 * sv.sigma.front()) return orthonormalize(m);
    }
}

inline Mat random_invertible(int d, Rng& rng, double min_ratio = 1e-2) {
    while (true) {
        Mat m = random_matrix(d, d, rng);
        if (smallest_singular_ratio(m) > min_ratio) return m;
    }
}

// Brute-force max-min characterization of the maximal principal angle
// between two 2-dimensional subspaces: max over v in V of min over w in W of
// the vector angle, on uniform circle grids.
inline double max_min_angle_grid(const Subspace& v, const Subspace& w, int grid = 720) {
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        double a = i * M_PI / grid;
        Vec vv(static_cast<size_t>(v.dim_ambient()), 0.0);
        for (int r = 0; r < v.dim_ambient(); ++r)
            vv[static_cast<size_t>(r)] = std::cos(a) * v.basis()(r, 0) + std::sin(a) * v.basis()(r, 1);
        double best = M_PI;
        for (int j = 0; j < grid; ++j) {
            double b = j * M_PI / grid;
            Vec ww(static_cast<size_t>(w.dim_ambient()), 0.0);
            for (int r = 0; r < w.dim_ambient(); ++r)
                ww[static_cast<size_t>(r)] = std::cos(b) * w.basis()(r, 0) + std::sin(b) * w.basis()(r, 1);
            best = std::min(best, vector_angle(vv, ww));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

// Dense product Phi(N,0)V with per-step Frobenius scaling; no QR anywhere.
inline Subspace dense_product_span(const SystemSpec& sys, const Subspace& v, long n_steps) {
    Mat m = v.basis();
    for (long n = 0; n < n_steps; ++n) {
        m = sys.at(n) * m;
        double f = m.frobenius();
        m = (1.0 / f) * m;
    }
    return orthonormalize(m);
}

// Max-entry distance between the orthogonal projectors of two spans.
inline double projector_distance(const Subspace& a, const Subspace& b) {
    Mat pa = a.basis() * a.basis().transposed();
    Mat pb = b.basis() * b.basis().transposed();
    return (pa - pb).max_abs();
}

// Projector onto the column space of a raw basis via normal equations.
inline Mat normal_equations_projector(const Mat& raw) {
    Mat gram = raw.transposed() * raw;
    Mat ginv = inverse(gram);
    return raw * ginv * raw.transposed();
}

}  // namespace oracles
