#pragma once

// Matrix-sequence abstraction u_{n+1} = A_n u_n and the angle series
//
//   b_j(V) = angle(Phi(j-1,0)V, Phi(j,0)V),   alpha_n(V) = (1/n) sum b_j,
//
// computed with per-step QR re-orthonormalization of the propagated frame.
// Transition operators overflow double precision on hyperbolic systems, but
// the angles only depend on spans, which QR preserves.

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "angular/grassmann.hpp"
#include "angular/linalg.hpp"

namespace angular {

struct SystemSpec {
    int dim = 0;
    std::function<Mat(long)> matrix_at;  // deterministic rule n >= 0
    std::string label;
    long horizon = -1;  // last valid index + 1, or -1 when unbounded

    Mat at(long n) const { return matrix_at(n); }
};

// View of the same system started at index n0.
inline SystemSpec shifted(const SystemSpec& sys, long n0) {
    SystemSpec s;
    s.dim = sys.dim;
    s.label = sys.label + "+" + std::to_string(n0);
    s.horizon = sys.horizon < 0 ? -1 : sys.horizon - n0;
    auto base = sys.matrix_at;
    s.matrix_at = [base, n0](long n) { return base(n + n0); };
    return s;
}

inline SystemSpec scaled_system(const SystemSpec& sys, std::function<double(long)> factor) {
    SystemSpec s = sys;
    auto base = sys.matrix_at;
    s.matrix_at = [base, factor = std::move(factor)](long n) { return factor(n) * base(n); };
    return s;
}

// Perturbed system A_n + E_n of the roughness theorem. The partial l1 norm
// sum_{n<N} ||E_n|| (spectral norms) is exposed for summability diagnostics.
struct PerturbedSystem {
    SystemSpec system;
    std::function<Mat(long)> perturbation;

    double partial_l1_norm(long up_to) const {
        double s = 0.0;
        for (long n = 0; n < up_to; ++n) s += spectral_norm(perturbation(n));
        return s;
    }
};

inline PerturbedSystem perturb_l1(const SystemSpec& base, std::function<Mat(long)> perturbation) {
    SystemSpec s;
    s.dim = base.dim;
    s.label = base.label + "+E";
    s.horizon = base.horizon;
    auto a = base.matrix_at;
    auto e = perturbation;
    s.matrix_at = [a, e](long n) { return a(n) + e(n); };
    return {std::move(s), std::move(perturbation)};
}

struct PropagatedFrame {
    long step = 0;
    Subspace frame;     // orthonormal, spans Phi(step,0)V
    double log_scale = 0.0;  // accumulated log of discarded QR scale factors
};

struct AngleSeries {
    std::vector<double> values;  // b_1 .. b_N
    Subspace start_space;

    long size() const { return static_cast<long>(values.size()); }
};

struct PropagateOptions {
    bool check_invertibility = true;
    double invertibility_tol = 1e-12;
};

namespace detail {
inline void check_invertible(const Mat& a, long n, double tol) {
    if (smallest_singular_ratio(a) <= tol)
        throw SingularMatrix("matrix A_" + std::to_string(n) + " fails the invertibility check");
}
}  // namespace detail

// Angle series of length N for the start space V.
inline AngleSeries propagate(const SystemSpec& sys, const Subspace& v, long n_steps,
                             const PropagateOptions& opt = {}) {
    if (v.dim_ambient() != sys.dim) throw DimensionMismatch("propagate: ambient dimension differs");
    if (n_steps < 1) throw OutOfRange("propagate: need N >= 1");
    AngleSeries series{{}, v};
    series.values.reserve(static_cast<size_t>(n_steps));
    Mat frame = v.basis();
    for (long j = 0; j < n_steps; ++j) {
        Mat a = sys.at(j);
        if (opt.check_invertibility) detail::check_invertible(a, j, opt.invertibility_tol);
        Mat image = a * frame;
        QRResult qr = qr_thin(image);
        series.values.push_back(max_angle(Subspace(frame), Subspace(qr.q)));
        frame = std::move(qr.q);
    }
    return series;
}

// Final orthonormal frame spanning Phi(N,0)V, with scale bookkeeping.
inline PropagatedFrame propagate_frame(const SystemSpec& sys, const Subspace& v, long n_steps,
                                       const PropagateOptions& opt = {}) {
    if (v.dim_ambient() != sys.dim) throw DimensionMismatch("propagate_frame: ambient dimension differs");
    Mat frame = v.basis();
    double log_scale = 0.0;
    for (long j = 0; j < n_steps; ++j) {
        Mat a = sys.at(j);
        if (opt.check_invertibility) detail::check_invertible(a, j, opt.invertibility_tol);
        QRResult qr = qr_thin(a * frame);
        for (int i = 0; i < qr.r.rows(); ++i) log_scale += std::log(qr.r(i, i));
        frame = std::move(qr.q);
    }
    return {n_steps, Subspace(std::move(frame)), log_scale};
}

// alpha_n(V) = (1/n) sum_{j=1}^n b_j.
inline double alpha(const AngleSeries& series, long n) {
    if (n < 1 || n > series.size()) throw OutOfRange("alpha: index outside the computed series");
    double s = 0.0;
    for (long j = 0; j < n; ++j) s += series.values[static_cast<size_t>(j)];
    return s / static_cast<double>(n);
}

// Windowed average alpha_{n,k}(V) = (1/n) sum_{j=k+1}^{k+n} b_j.
inline double alpha_window(const AngleSeries& series, long n, long k) {
    if (n < 1 || k < 0 || k + n > series.size())
        throw OutOfRange("alpha_window: window outside the computed series");
    double s = 0.0;
    for (long j = k; j < k + n; ++j) s += series.values[static_cast<size_t>(j)];
    return s / static_cast<double>(n);
}

// Prefix sums of an angle series: p[0]=0, p[j] = b_1 + ... + b_j.
inline std::vector<double> prefix_sums(const AngleSeries& series) {
    std::vector<double> p(series.values.size() + 1, 0.0);
    for (size_t j = 0; j < series.values.size(); ++j) p[j + 1] = p[j] + series.values[j];
    return p;
}

}  // namespace angular
