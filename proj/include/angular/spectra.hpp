#pragma once

// Finite-time outer angular N-spectra over trace spaces, their unions,
// uniform outer values, continuous-time normalized values, and the
// uniform-Cauchy diagnostic. Interval endpoints come from multi-start
// derivative-free optimization over the circle parameters of the
// two-dimensional bundles (Steps 2 and 3 of the computational method); all
// angle series are evaluated in bundle coordinates through the stored fiber
// sequences.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "angular/dichotomy.hpp"
#include "angular/optimize.hpp"
#include "angular/spectrum_set.hpp"
#include "angular/system.hpp"

namespace angular {

struct OptimizerControls {
    int grid_1d = 64;  // seed grid on each circle parameter
    int grid_2d = 8;   // per-axis seed grid for two free parameters
    double xtol = 1e-10;
};

namespace detail {

inline double alpha_n_of(const TraceFamily& fam, const std::vector<double>& betas, long n_steps) {
    AngleSeries ser = fam.angle_series(betas, n_steps);
    return alpha(ser, n_steps);
}

inline void add_family_spectrum(AngularSpectrumSet& out, const TraceFamily& fam, long n_steps,
                                const OptimizerControls& ctl) {
    if (fam.free_dims() == 0) {
        out.add_point(alpha_n_of(fam, {}, n_steps), {fam.signature(), {}, {}});
        return;
    }
    if (fam.free_dims() == 1) {
        auto f = [&](double beta) { return alpha_n_of(fam, {beta}, n_steps); };
        ScalarMinimum lo = minimize_periodic(f, M_PI, ctl.grid_1d, ctl.xtol);
        auto neg = [&](double beta) { return -f(beta); };
        ScalarMinimum hi = minimize_periodic(neg, M_PI, ctl.grid_1d, ctl.xtol);
        out.add(lo.value, -hi.value, {fam.signature(), {lo.x}, {hi.x}});
        return;
    }
    auto f = [&](double b0, double b1) { return alpha_n_of(fam, {b0, b1}, n_steps); };
    Minimum2D lo = minimize_periodic2(f, M_PI, M_PI, ctl.grid_2d, 1e-13);
    auto neg = [&](double b0, double b1) { return -f(b0, b1); };
    Minimum2D hi = minimize_periodic2(neg, M_PI, M_PI, ctl.grid_2d, 1e-13);
    out.add(lo.value, -hi.value, {fam.signature(), {lo.x[0], lo.x[1]}, {hi.x[0], hi.x[1]}});
}

inline std::vector<std::vector<double>> beta_grid(const TraceFamily& fam,
                                                  const OptimizerControls& ctl) {
    std::vector<std::vector<double>> out;
    if (fam.free_dims() == 0) {
        out.push_back({});
    } else if (fam.free_dims() == 1) {
        for (int g = 0; g < ctl.grid_1d; ++g) out.push_back({g * M_PI / ctl.grid_1d});
    } else {
        for (int g0 = 0; g0 < ctl.grid_2d; ++g0)
            for (int g1 = 0; g1 < ctl.grid_2d; ++g1)
                out.push_back({g0 * M_PI / ctl.grid_2d, g1 * M_PI / ctl.grid_2d});
    }
    return out;
}

}  // namespace detail

// Sigma_s^N over the trace spaces of the fibered bundles.
inline AngularSpectrumSet sigma_finite(const FiberSequences& fib, int s, long n_steps,
                                       const OptimizerControls& ctl = {}) {
    AngularSpectrumSet out;
    for (const TraceFamily& fam : trace_spaces(fib, s))
        detail::add_family_spectrum(out, fam, n_steps, ctl);
    return out;
}

inline AngularSpectrumSet sigma1_finite(const FiberSequences& fib, long n_steps,
                                        const OptimizerControls& ctl = {}) {
    return sigma_finite(fib, 1, n_steps, ctl);
}

inline AngularSpectrumSet sigma2_finite(const FiberSequences& fib, long n_steps,
                                        const OptimizerControls& ctl = {}) {
    return sigma_finite(fib, 2, n_steps, ctl);
}

// Union spectrum Sigma_s^{N,M}. Interior indices are evaluated on the seed
// grids via prefix sums; the endpoints j = N and j = M get the full
// optimizer polish before merging.
inline AngularSpectrumSet sigma_union(const FiberSequences& fib, int s, long n_lo, long n_hi,
                                      const OptimizerControls& ctl = {}) {
    if (n_lo > n_hi) throw OutOfRange("sigma_union: need N <= M");
    if (n_lo < 1 || n_hi > fib.n_steps) throw OutOfRange("sigma_union: range beyond the fibers");
    AngularSpectrumSet out;
    for (const TraceFamily& fam : trace_spaces(fib, s)) {
        std::vector<std::vector<double>> prefixes;
        for (const auto& betas : detail::beta_grid(fam, ctl))
            prefixes.push_back(prefix_sums(fam.angle_series(betas, n_hi)));
        for (long j = n_lo; j <= n_hi; ++j) {
            double lo = 1e300, hi = -1e300;
            for (const auto& p : prefixes) {
                double a = p[static_cast<size_t>(j)] / static_cast<double>(j);
                lo = std::min(lo, a);
                hi = std::max(hi, a);
            }
            out.add(lo, hi, {fam.signature() + " union", {static_cast<double>(j)}, {}});
        }
    }
    for (long j : {n_lo, n_hi}) {
        AngularSpectrumSet endpoint = sigma_finite(fib, s, j, ctl);
        for (const auto& e : endpoint.elements()) out.add(e.lo, e.hi, e.prov);
    }
    return out;
}

struct UniformAngularValues {
    double theta_inf = 0.0;  // inf over V and offsets k of alpha_{n,k}
    double theta_sup = 0.0;  // sup over V and offsets k of alpha_{n,k}
    long n_used = 0;
    long k_max = 0;
    // (n, inf, sup) for a few increasing window lengths.
    std::vector<std::array<double, 3>> diagnostics;
};

// Finite approximants of the uniform outer angular values.
inline UniformAngularValues uniform_values(const FiberSequences& fib, int s, long n_window,
                                           long k_max, int circle_samples = 16) {
    if (n_window + k_max > fib.n_steps)
        throw OutOfRange("uniform_values: n + K beyond the fiber range");
    UniformAngularValues out;
    out.n_used = n_window;
    out.k_max = k_max;
    out.theta_inf = 1e300;
    out.theta_sup = -1e300;
    std::vector<long> n_list{n_window / 4, n_window / 2, n_window};
    std::vector<std::array<double, 3>> diag(n_list.size());
    for (size_t i = 0; i < n_list.size(); ++i)
        diag[i] = {static_cast<double>(n_list[i]), 1e300, -1e300};
    OptimizerControls sampler;
    sampler.grid_1d = circle_samples;
    sampler.grid_2d = std::max(2, circle_samples / 2);
    for (const TraceFamily& fam : trace_spaces(fib, s)) {
        for (const auto& betas : detail::beta_grid(fam, sampler)) {
            std::vector<double> p = prefix_sums(fam.angle_series(betas, n_window + k_max));
            for (size_t i = 0; i < n_list.size(); ++i) {
                long n = n_list[i];
                if (n < 1) continue;
                double lo = 1e300, hi = -1e300;
                for (long k = 0; k + n <= n_window + k_max; ++k) {
                    double a = (p[static_cast<size_t>(k + n)] - p[static_cast<size_t>(k)]) /
                               static_cast<double>(n);
                    lo = std::min(lo, a);
                    hi = std::max(hi, a);
                }
                diag[i][1] = std::min(diag[i][1], lo);
                diag[i][2] = std::max(diag[i][2], hi);
                if (n == n_window) {
                    out.theta_inf = std::min(out.theta_inf, lo);
                    out.theta_sup = std::max(out.theta_sup, hi);
                }
            }
        }
    }
    out.diagnostics = std::move(diag);
    return out;
}

// theta_{s,h,T} = sup over trace spaces of (1/T) * (angle sum over N = T/h
// steps) = (sup alpha_N)/h; not clamped to [0, pi/2].
inline double continuous_normalized(const FiberSequences& fib, int s, double h, double time_horizon,
                                    const OptimizerControls& ctl = {}) {
    double steps = time_horizon / h;
    if (std::abs(steps - std::round(steps)) > 1e-9)
        throw NonIntegralStepCount("continuous_normalized: T/h is not an integer");
    long n_steps = std::lround(steps);
    if (n_steps > fib.n_steps) throw OutOfRange("continuous_normalized: T/h beyond the fiber range");
    double best = -1e300;
    for (const TraceFamily& fam : trace_spaces(fib, s)) {
        if (fam.free_dims() == 0) {
            best = std::max(best, detail::alpha_n_of(fam, {}, n_steps));
        } else if (fam.free_dims() == 1) {
            auto neg = [&](double beta) { return -detail::alpha_n_of(fam, {beta}, n_steps); };
            best = std::max(best, -minimize_periodic(neg, M_PI, ctl.grid_1d, ctl.xtol).value);
        } else {
            auto neg = [&](double b0, double b1) { return -detail::alpha_n_of(fam, {b0, b1}, n_steps); };
            best = std::max(best, -minimize_periodic2(neg, M_PI, M_PI, ctl.grid_2d).value);
        }
    }
    return best / h;
}

struct CauchyReport {
    double max_deviation = 0.0;  // max over samples and grid pairs of |alpha_n - alpha_m|
    bool consistent = false;
    long worst_n = 0, worst_m = 0;
};

// Empirical uniform-Cauchy check of alpha_n(V) over sample start spaces and
// an increasing n-grid (plain propagation; generic start spaces).
inline CauchyReport uniform_cauchy_diagnostic(const SystemSpec& sys,
                                              const std::vector<Subspace>& samples,
                                              const std::vector<long>& n_grid, double epsilon) {
    CauchyReport rep;
    long n_max = *std::max_element(n_grid.begin(), n_grid.end());
    for (const Subspace& v : samples) {
        std::vector<double> p = prefix_sums(propagate(sys, v, n_max));
        for (size_t a = 0; a < n_grid.size(); ++a)
            for (size_t b = a + 1; b < n_grid.size(); ++b) {
                double an = p[static_cast<size_t>(n_grid[a])] / static_cast<double>(n_grid[a]);
                double am = p[static_cast<size_t>(n_grid[b])] / static_cast<double>(n_grid[b]);
                double dev = std::abs(an - am);
                if (dev > rep.max_deviation) {
                    rep.max_deviation = dev;
                    rep.worst_n = n_grid[a];
                    rep.worst_m = n_grid[b];
                }
            }
    }
    rep.consistent = rep.max_deviation <= epsilon;
    return rep;
}

// --- Full pipeline (Steps 1-3 with buffer handling) ---------------------------

struct PipelineOptions {
    long n0 = 500;        // analysis window start inside the data
    long n_steps = 1000;  // N
    long window = 0;      // dichotomy window; 0 = auto
    long stride = 0;      // 0 = auto
    long margin = 500;    // dichotomy sweep extension into the buffers
    long warmup = 100;
    long right_extra = 500;  // slow-pass extension past the analysis window
    double merge_tol = 2e-2;
    std::vector<int> dims{1, 2};
    OptimizerControls opt;
};

struct PipelineResult {
    SpectralIntervals spectrum;
    FiberSequences fibers;
    BundleSet bundles;
    std::map<int, AngularSpectrumSet> sigma;  // keyed by s
};

inline PipelineResult run_pipeline(const SystemSpec& sys, const PipelineOptions& po) {
    SpectrumOptions so;
    so.n0 = po.n0;
    so.n_steps = po.n_steps;
    so.window = po.window;
    so.stride = po.stride;
    so.margin = po.margin;
    so.warmup = po.warmup;
    so.merge_tol = po.merge_tol;
    PipelineResult res;
    res.spectrum = approx_spectrum(sys, so);
    BundleOptions bo;
    bo.n0 = po.n0;
    bo.n_steps = po.n_steps;
    bo.right_extra = po.right_extra;
    res.fibers = fiber_sequences(sys, res.spectrum, bo);
    res.bundles = res.fibers.bundles_at_start();
    for (int s : po.dims)
        if (s >= 1 && s <= sys.dim) res.sigma[s] = sigma_finite(res.fibers, s, po.n_steps, po.opt);
    return res;
}

}  // namespace angular
