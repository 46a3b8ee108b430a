#pragma once

// Approximation of the dichotomy (Sacker-Sell) spectrum, spectral bundles
// with their fiber sequences, and enumeration of trace spaces.
//
// Rates: one continuous QR pass A_n Q_n = Q_{n+1} R_n records log diag(R_n);
// finite-time rates over a window [m, m+W) are exp of the window means, and
// each direction contributes the candidate interval [min_m r_i(m),
// max_m r_i(m)]. Candidates split by less than the merge tolerance are one
// spectral interval (a complex pair splits its finite-window rates by
// O(cond^(1/W)) even when the true interval is a point).
//
// Bundles: the slow flags (ranges of the P^+ projectors) at every time n of
// the analysis window come from a backward pass with transposed matrices,
// i.e. right singular subspaces of Phi(end, n); the fast flags come from the
// forward pass over the left buffer, which converges to the invariant fast
// subspaces. An interior bundle is the pointwise intersection of its fast
// and slow flags. Storing whole fiber sequences lets the angle series of a
// trace space be propagated in bundle coordinates, which is immune to the
// exponential contamination that plain forward propagation suffers from.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "angular/grassmann.hpp"
#include "angular/system.hpp"

namespace angular {

struct SpectralInterval {
    double lo = 0.0, hi = 0.0;
    int dim = 1;  // number of finite-time rates inside
};

struct SpectralIntervals {
    // Descending: intervals[0] holds the largest rates.
    std::vector<SpectralInterval> intervals;
    // gap_points[0] lies above the top interval, gap_points[k] between
    // intervals k-1 and k, the last one below the bottom interval.
    std::vector<double> gap_points;

    int count() const { return static_cast<int>(intervals.size()); }
    int total_dim() const {
        int s = 0;
        for (const auto& iv : intervals) s += iv.dim;
        return s;
    }
};

struct SpectrumOptions {
    long n0 = 0;        // analysis window start
    long n_steps = 0;   // analysis window length N
    long window = 0;    // W; 0 = auto (half of the swept range)
    long stride = 0;    // 0 = auto (window/25)
    long margin = 500;  // how far the window sweep extends into the buffers
    long warmup = 100;  // QR settling steps before the first window
    double merge_tol = 2e-2;  // relative gap below which candidates merge
};

namespace detail {

// Fixed full-mixing orthogonal start frame. QR flag iterations started from
// the identity never leave exactly invariant coordinate planes, so the
// columns would not order themselves by growth rate.
inline Mat generic_orthogonal(int d) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = std::sin(1.0 + 3.0 * i + 7.0 * j) + (i == j ? 1.5 : 0.0);
    return qr_thin(m).q;
}

// Continuous QR pass over [from, to): stores the triangular factors R_n.
// The singular values of Phi(m+W, m) equal those of R_{m+W-1} ... R_m since
// the orthogonal factors drop out.
inline std::vector<Mat> qr_factor_pass(const SystemSpec& sys, long from, long to) {
    int d = sys.dim;
    Mat q = generic_orthogonal(d);
    std::vector<Mat> rs;
    rs.reserve(static_cast<size_t>(to - from));
    for (long n = from; n < to; ++n) {
        Mat a = sys.at(n);
        check_invertible(a, n, 1e-12);
        QRResult qr = qr_thin(a * q);
        rs.push_back(qr.r);
        q = std::move(qr.q);
    }
    return rs;
}

// Product of upper triangular factors held with per-row log scales, so that
// windows of arbitrary length never overflow.
struct ScaledTriangular {
    Mat t;         // rows normalized to unit max-norm
    Vec logscale;  // per-row natural logs

    explicit ScaledTriangular(int d) : t(Mat::identity(d)), logscale(static_cast<size_t>(d), 0.0) {}

    void left_multiply(const Mat& r) {
        int d = t.rows();
        Mat nt(d, d);
        Vec nl(static_cast<size_t>(d), 0.0);
        for (int i = 0; i < d; ++i) {
            double m = -1e300;
            for (int k = i; k < d; ++k)
                if (r(i, k) != 0.0)
                    m = std::max(m, std::log(std::abs(r(i, k))) + logscale[static_cast<size_t>(k)]);
            if (m == -1e300) throw SingularMatrix("ScaledTriangular: zero row in factor");
            Vec row(static_cast<size_t>(d), 0.0);
            for (int k = i; k < d; ++k) {
                if (r(i, k) == 0.0) continue;
                double c = (r(i, k) > 0 ? 1.0 : -1.0) *
                           std::exp(std::log(std::abs(r(i, k))) + logscale[static_cast<size_t>(k)] - m);
                for (int j = 0; j < d; ++j) row[static_cast<size_t>(j)] += c * t(k, j);
            }
            double nrm = 0.0;
            for (double v : row) nrm = std::max(nrm, std::abs(v));
            for (int j = 0; j < d; ++j) nt(i, j) = row[static_cast<size_t>(j)] / nrm;
            nl[static_cast<size_t>(i)] = m + std::log(nrm);
        }
        t = std::move(nt);
        logscale = std::move(nl);
    }

    // log sigma_1 >= ... >= log sigma_d via compound matrices: the top
    // singular value of the k-th compound is sigma_1 * ... * sigma_k, and
    // each compound inherits row scales sum_{i in I} logscale[i].
    Vec log_singular_values() const {
        int d = t.rows();
        Vec cumulative(static_cast<size_t>(d), 0.0);
        for (int k = 1; k <= d; ++k) {
            std::vector<std::vector<int>> subsets;
            std::vector<int> pick;
            std::function<void(int)> rec = [&](int start) {
                if (static_cast<int>(pick.size()) == k) {
                    subsets.push_back(pick);
                    return;
                }
                for (int i = start; i < d; ++i) {
                    pick.push_back(i);
                    rec(i + 1);
                    pick.pop_back();
                }
            };
            rec(0);
            int m = static_cast<int>(subsets.size());
            Mat comp(m, m);
            Vec scale(static_cast<size_t>(m));
            for (int a = 0; a < m; ++a) {
                double ls = 0.0;
                for (int i : subsets[static_cast<size_t>(a)]) ls += logscale[static_cast<size_t>(i)];
                scale[static_cast<size_t>(a)] = ls;
                for (int b = 0; b < m; ++b) {
                    Mat minor(k, k);
                    for (int ii = 0; ii < k; ++ii)
                        for (int jj = 0; jj < k; ++jj)
                            minor(ii, jj) = t(subsets[static_cast<size_t>(a)][static_cast<size_t>(ii)],
                                              subsets[static_cast<size_t>(b)][static_cast<size_t>(jj)]);
                    comp(a, b) = determinant(minor);
                }
            }
            double top = -1e300;
            for (int a = 0; a < m; ++a) top = std::max(top, scale[static_cast<size_t>(a)]);
            for (int a = 0; a < m; ++a) {
                double f = std::exp(scale[static_cast<size_t>(a)] - top);
                for (int b = 0; b < m; ++b) comp(a, b) *= f;
            }
            double s1 = spectral_norm(comp);
            cumulative[static_cast<size_t>(k - 1)] = top + std::log(s1);
        }
        Vec logs(static_cast<size_t>(d));
        logs[0] = cumulative[0];
        for (int k = 1; k < d; ++k)
            logs[static_cast<size_t>(k)] = cumulative[static_cast<size_t>(k)] - cumulative[static_cast<size_t>(k - 1)];
        return logs;
    }
};

// Exact log singular values of R_{m+W-1} ... R_m from stored factors.
inline Vec window_log_sigmas(const std::vector<Mat>& rs, long first, long window) {
    ScaledTriangular acc(rs.front().rows());
    for (long j = first; j < first + window; ++j) acc.left_multiply(rs[static_cast<size_t>(j)]);
    return acc.log_singular_values();
}

}  // namespace detail

inline SpectralIntervals approx_spectrum(const SystemSpec& sys, const SpectrumOptions& opt) {
    int d = sys.dim;
    long data_end = sys.horizon < 0 ? opt.n0 + opt.n_steps + opt.margin : sys.horizon;
    long sweep_lo = std::max(opt.n0 - opt.margin, std::min(opt.warmup, opt.n0));
    long sweep_hi = std::min(data_end, opt.n0 + opt.n_steps + opt.margin);
    long window = opt.window > 0 ? opt.window : std::max<long>(d, (sweep_hi - sweep_lo) / 2);
    long stride = opt.stride > 0 ? opt.stride : std::max<long>(1, (sweep_hi - sweep_lo - window) / 24);
    if (window < d) throw DegenerateWindow("approx_spectrum: window below ambient dimension");
    if (window > sweep_hi - sweep_lo)
        throw DegenerateWindow("approx_spectrum: window exceeds the available range");
    std::vector<Mat> rs = detail::qr_factor_pass(sys, sweep_lo, sweep_hi);
    std::vector<SpectralInterval> candidates(static_cast<size_t>(d), {1e300, -1e300, 1});
    for (long m = 0; m + window <= sweep_hi - sweep_lo; m += stride) {
        Vec logsig = detail::window_log_sigmas(rs, m, window);
        for (int i = 0; i < d; ++i) {
            double rate = std::exp(logsig[static_cast<size_t>(i)] / static_cast<double>(window));
            candidates[static_cast<size_t>(i)].lo = std::min(candidates[static_cast<size_t>(i)].lo, rate);
            candidates[static_cast<size_t>(i)].hi = std::max(candidates[static_cast<size_t>(i)].hi, rate);
        }
    }
    SpectralIntervals out;
    for (const auto& c : candidates) {
        if (!out.intervals.empty()) {
            SpectralInterval& last = out.intervals.back();
            double gap = c.hi > 0 ? (last.lo - c.hi) / c.hi : 0.0;
            if (c.hi >= last.lo || gap < opt.merge_tol) {
                last.lo = std::min(last.lo, c.lo);
                last.hi = std::max(last.hi, c.hi);
                last.dim += 1;
                continue;
            }
        }
        out.intervals.push_back(c);
    }
    out.gap_points.push_back(out.intervals.front().hi * 2.0);
    for (size_t k = 1; k < out.intervals.size(); ++k)
        out.gap_points.push_back(std::sqrt(out.intervals[k - 1].lo * out.intervals[k].hi));
    out.gap_points.push_back(out.intervals.back().lo / 2.0);
    return out;
}

// Convenience overload: windows swept over [0, N] with no buffers.
inline SpectralIntervals approx_spectrum(const SystemSpec& sys, long n_steps, long window,
                                         long stride) {
    SpectrumOptions opt;
    opt.n_steps = n_steps;
    opt.window = window;
    opt.stride = stride;
    opt.margin = 0;
    opt.warmup = 0;
    return approx_spectrum(sys, opt);
}

struct Bundle {
    int interval_index = 0;  // into SpectralIntervals::intervals (descending)
    Subspace space;
};

struct BundleSet {
    std::vector<Bundle> bundles;
    long at_time = 0;

    int ambient_dim() const { return bundles.front().space.dim_ambient(); }
    int total_dim() const {
        int s = 0;
        for (const auto& b : bundles) s += b.space.dim_sub();
        return s;
    }

    // Smallest singular value of the stacked basis matrix.
    double transversality() const {
        int d = ambient_dim();
        Mat stacked(d, total_dim());
        int c = 0;
        for (const auto& b : bundles)
            for (int j = 0; j < b.space.dim_sub(); ++j, ++c)
                for (int i = 0; i < d; ++i) stacked(i, c) = b.space.basis()(i, j);
        SVDResult s = svd(stacked);
        return s.sigma.back();
    }
};

struct BundleOptions {
    long n0 = 0;             // analysis window start (bundle time)
    long n_steps = 0;        // analysis window length
    long right_extra = 500;  // slow-pass extension past the window
    double gap_guard = 1e-3;
};

// Fiber sequences W_n^k for n = n0 .. n0+n_steps together with the reduced
// one-step maps C_n^k = (W_{n+1}^k)' A_n W_n^k of the two-dimensional
// bundles. Index n below is relative to n0.
struct FiberSequences {
    long n0 = 0;
    long n_steps = 0;
    std::vector<int> dims;                   // per bundle
    std::vector<std::vector<Mat>> fibers;    // [k][n], d x dims[k], n = 0..n_steps
    std::vector<std::vector<Mat>> reduced;   // [k][n], dims[k] x dims[k], n = 0..n_steps-1

    int ambient_dim() const { return fibers.front().front().rows(); }
    int bundle_count() const { return static_cast<int>(dims.size()); }

    BundleSet bundles_at_start() const {
        BundleSet set;
        set.at_time = n0;
        for (int k = 0; k < bundle_count(); ++k)
            set.bundles.push_back({k, Subspace(fibers[static_cast<size_t>(k)].front())});
        return set;
    }
};

inline FiberSequences fiber_sequences(const SystemSpec& sys, const SpectralIntervals& spec,
                                      const BundleOptions& opt) {
    int d = sys.dim;
    if (spec.total_dim() != d) throw DimensionMismatch("fiber_sequences: interval dims do not sum to d");
    long slow_end = opt.n0 + opt.n_steps + opt.right_extra;
    if (sys.horizon >= 0) slow_end = std::min(slow_end, sys.horizon);
    if (slow_end < opt.n0 + opt.n_steps)
        throw OutOfRange("fiber_sequences: system horizon shorter than the analysis window");
    long count = opt.n_steps + 1;

    // Backward transpose pass; keep the frames on the analysis window and
    // check the finite-time rates against the resolvent gaps.
    std::vector<Mat> slow_frames(static_cast<size_t>(count));
    {
        Mat zb = detail::generic_orthogonal(d);
        if (slow_end - opt.n0 <= opt.n_steps) slow_frames[static_cast<size_t>(slow_end - opt.n0)] = zb;
        Vec logsum(static_cast<size_t>(d), 0.0);
        for (long n = slow_end - 1; n >= opt.n0; --n) {
            Mat a = sys.at(n);
            detail::check_invertible(a, n, 1e-12);
            QRResult qr = qr_thin(a.transposed() * zb);
            for (int i = 0; i < d; ++i) logsum[static_cast<size_t>(i)] += std::log(qr.r(i, i));
            zb = std::move(qr.q);
            if (n <= opt.n0 + opt.n_steps) slow_frames[static_cast<size_t>(n - opt.n0)] = zb;
        }
        double span = static_cast<double>(slow_end - opt.n0);
        for (int i = 0; i < d; ++i) {
            double rate = std::exp(logsum[static_cast<size_t>(i)] / span);
            for (size_t g = 1; g + 1 < spec.gap_points.size(); ++g)
                if (std::abs(rate - spec.gap_points[g]) < opt.gap_guard * spec.gap_points[g])
                    throw RateAmbiguous(
                        "fiber_sequences: finite-time rate too close to a gap point; increase N");
        }
    }
    // Forward pass: warm up over the left buffer [0, n0), then record.
    std::vector<Mat> fast_frames(static_cast<size_t>(count));
    bool have_forward = opt.n0 > 0;
    {
        Mat zf = detail::generic_orthogonal(d);
        for (long n = 0; n < opt.n0 + opt.n_steps; ++n) {
            if (n >= opt.n0 && n - opt.n0 < count) fast_frames[static_cast<size_t>(n - opt.n0)] = zf;
            Mat a = sys.at(n);
            detail::check_invertible(a, n, 1e-12);
            zf = qr_thin(a * zf).q;
        }
        fast_frames[static_cast<size_t>(opt.n_steps)] = zf;
        if (!have_forward) fast_frames = slow_frames;  // complement fallback
    }

    auto columns = [&](const Mat& m, int from, int cnt) {
        Mat b(d, cnt);
        for (int j = 0; j < cnt; ++j)
            for (int i = 0; i < d; ++i) b(i, j) = m(i, from + j);
        return b;
    };

    FiberSequences fib;
    fib.n0 = opt.n0;
    fib.n_steps = opt.n_steps;
    for (const auto& iv : spec.intervals) fib.dims.push_back(iv.dim);
    int kappa = static_cast<int>(fib.dims.size());
    fib.fibers.assign(static_cast<size_t>(kappa), {});
    fib.reduced.assign(static_cast<size_t>(kappa), {});
    int before = 0;
    for (int k = 0; k < kappa; ++k) {
        int dim_k = fib.dims[static_cast<size_t>(k)];
        int upto = before + dim_k;
        auto& seq = fib.fibers[static_cast<size_t>(k)];
        seq.reserve(static_cast<size_t>(count));
        for (long n = 0; n < count; ++n) {
            const Mat& zb = slow_frames[static_cast<size_t>(n)];
            const Mat& zf = fast_frames[static_cast<size_t>(n)];
            if (before == 0 && upto == d) {
                seq.push_back(Mat::identity(d));
            } else if (before == 0) {
                seq.push_back(columns(zf, 0, dim_k));
            } else if (upto == d) {
                seq.push_back(columns(zb, before, dim_k));
            } else {
                Subspace inter = intersect_subspaces(Subspace(columns(zf, 0, upto)),
                                                     Subspace(columns(zb, before, d - before)), dim_k);
                seq.push_back(inter.basis());
            }
        }
        auto& red = fib.reduced[static_cast<size_t>(k)];
        red.reserve(static_cast<size_t>(opt.n_steps));
        for (long n = 0; n < opt.n_steps; ++n) {
            Mat image = sys.at(opt.n0 + n) * seq[static_cast<size_t>(n)];
            red.push_back(seq[static_cast<size_t>(n) + 1].transposed() * image);
        }
        before = upto;
    }
    return fib;
}

inline BundleSet spectral_bundles(const SystemSpec& sys, const SpectralIntervals& spec,
                                  const BundleOptions& opt) {
    // Only the time-n0 slice is needed; keep the same slow-pass extent.
    BundleOptions cheap = opt;
    cheap.n_steps = 0;
    cheap.right_extra = opt.n_steps + opt.right_extra;
    return fiber_sequences(sys, spec, cheap).bundles_at_start();
}

// --- Trace spaces --------------------------------------------------------------

// A family of trace spaces sharing one composition signature: bundles taken
// with their full dimension contribute fixed columns, two-dimensional
// bundles taken with one dimension contribute a circle parameter beta via
// cos(beta) b1 + sin(beta) b2.
struct TraceFamily {
    std::vector<int> take;     // per bundle: 0..dim
    std::vector<int> circles;  // bundle indices with take == 1 and dim == 2
    const FiberSequences* fib = nullptr;

    int free_dims() const { return static_cast<int>(circles.size()); }

    std::string signature() const {
        std::string s;
        for (size_t k = 0; k < take.size(); ++k) {
            if (take[k] == 0) continue;
            if (!s.empty()) s += "+";
            s += "W" + std::to_string(k + 1);
            if (take[k] == 1 && fib && fib->dims[k] == 2) s += "'";
        }
        return s;
    }

    // Assembled frame at relative time n for the given circle parameters and
    // unit coordinates state (one 2-vector per circle).
    Mat frame_at(long n, const std::vector<Vec>& coords) const {
        int d = fib->ambient_dim();
        int s = 0;
        for (size_t k = 0; k < take.size(); ++k) s += take[k];
        Mat basis(d, s);
        int col = 0;
        size_t circle_idx = 0;
        for (size_t k = 0; k < take.size(); ++k) {
            if (take[k] == 0) continue;
            const Mat& w = fib->fibers[k][static_cast<size_t>(n)];
            if (take[k] == w.cols()) {
                for (int j = 0; j < w.cols(); ++j, ++col)
                    for (int i = 0; i < d; ++i) basis(i, col) = w(i, j);
            } else {
                const Vec& u = coords[circle_idx++];
                for (int i = 0; i < d; ++i) basis(i, col) = w(i, 0) * u[0] + w(i, 1) * u[1];
                ++col;
            }
        }
        return basis;
    }

    // Start space at time n0.
    Subspace make(const std::vector<double>& betas) const {
        std::vector<Vec> coords;
        for (size_t c = 0; c < circles.size(); ++c)
            coords.push_back({std::cos(betas[c]), std::sin(betas[c])});
        return orthonormalize(frame_at(0, coords));
    }

    // Angle series b_1..b_N computed in bundle coordinates: the circle
    // components advance through the reduced 2x2 maps, so no component ever
    // leaks into a faster bundle.
    AngleSeries angle_series(const std::vector<double>& betas, long n_steps) const {
        if (n_steps > fib->n_steps) throw OutOfRange("angle_series: beyond the fiber range");
        std::vector<Vec> coords;
        for (size_t c = 0; c < circles.size(); ++c)
            coords.push_back({std::cos(betas[c]), std::sin(betas[c])});
        Mat prev = qr_thin(frame_at(0, coords)).q;
        AngleSeries series{{}, Subspace(prev)};
        series.values.reserve(static_cast<size_t>(n_steps));
        for (long n = 0; n < n_steps; ++n) {
            for (size_t c = 0; c < circles.size(); ++c) {
                const Mat& red = fib->reduced[static_cast<size_t>(circles[c])][static_cast<size_t>(n)];
                Vec next = red * coords[c];
                double nn = norm2(next);
                coords[c] = {next[0] / nn, next[1] / nn};
            }
            Mat cur = qr_thin(frame_at(n + 1, coords)).q;
            series.values.push_back(max_angle(Subspace(prev), Subspace(cur)));
            prev = std::move(cur);
        }
        return series;
    }
};

// All composition signatures of dimension s. Bundles of dimension above 2
// are rejected (the optimization step assumes dim in {1,2}).
inline std::vector<TraceFamily> trace_spaces(const FiberSequences& fib, int s) {
    int d = fib.ambient_dim();
    if (s < 1 || s > d) throw OutOfRange("trace_spaces: need 1 <= s <= d");
    for (int dim : fib.dims)
        if (dim > 2) throw NotSupported("trace_spaces: bundle dimension above 2 is not supported");
    std::vector<TraceFamily> out;
    int kappa = fib.bundle_count();
    std::vector<int> take(static_cast<size_t>(kappa), 0);
    std::function<void(int, int)> rec = [&](int k, int remaining) {
        if (k == kappa) {
            if (remaining != 0) return;
            TraceFamily fam;
            fam.take = take;
            fam.fib = &fib;
            for (int kk = 0; kk < kappa; ++kk)
                if (take[static_cast<size_t>(kk)] == 1 && fib.dims[static_cast<size_t>(kk)] == 2)
                    fam.circles.push_back(kk);
            out.push_back(std::move(fam));
            return;
        }
        for (int t = 0; t <= std::min(fib.dims[static_cast<size_t>(k)], remaining); ++t) {
            take[static_cast<size_t>(k)] = t;
            rec(k + 1, remaining - t);
        }
        take[static_cast<size_t>(k)] = 0;
    };
    rec(0, s);
    return out;
}

}  // namespace angular
