#pragma once

// Built-in model systems: the rotation/expansion example, dyadic switching
// systems, Jordan/scalar counterexamples, the 3D Henon map with homoclinic
// and multi-humped orbits (periodic boundary value problems solved by Newton
// with a structured QR), and the h-step Lorenz map with central-difference
// Jacobians.

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "angular/linalg.hpp"
#include "angular/system.hpp"

namespace angular {

inline Mat rotation2(double phi) {
    return Mat(2, 2, {std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi)});
}

// Autonomous diag(T_phi, 2): rates {1, 2}, angular spectra {0, phi}.
inline SystemSpec make_rotation_example(double phi) {
    if (!(phi > 0.0 && phi <= M_PI / 2.0)) throw OutOfRange("make_rotation_example: phi outside (0, pi/2]");
    Mat a(3, 3);
    Mat t = rotation2(phi);
    a(0, 0) = t(0, 0);
    a(0, 1) = t(0, 1);
    a(1, 0) = t(1, 0);
    a(1, 1) = t(1, 1);
    a(2, 2) = 2.0;
    return {3, [a](long) { return a; }, "rotation3d", -1};
}

// Dyadic switching schedule: T_{phi0} at n = 0 and on [2^{2l-1}, 2^{2l}-1].
inline bool e1_uses_phi0(long n) {
    if (n == 0) return true;
    for (long l = 1; (1L << (2 * l - 1)) <= n; ++l)
        if (n >= (1L << (2 * l - 1)) && n <= (1L << (2 * l)) - 1) return true;
    return false;
}

inline SystemSpec make_switching_e1(double phi0, double phi1) {
    if (!(phi0 >= 0.0 && phi0 < phi1 && phi1 <= M_PI / 2.0))
        throw OutOfRange("make_switching_e1: need 0 <= phi0 < phi1 <= pi/2");
    Mat a0 = rotation2(phi0), a1 = rotation2(phi1);
    return {2, [a0, a1](long n) { return e1_uses_phi0(n) ? a0 : a1; }, "switching-e1", -1};
}

// diag(-1,1) on the blocks [2*2^l - 4, 3*2^l - 5], diag(1,1/2) otherwise.
inline bool e2_uses_reflection(long n) {
    for (long l = 1;; ++l) {
        long lo = 2 * (1L << l) - 4;
        long hi = 3 * (1L << l) - 5;
        if (lo > n) return false;
        if (n >= lo && n <= hi) return true;
    }
}

inline SystemSpec make_switching_e2() {
    Mat refl(2, 2, {-1.0, 0.0, 0.0, 1.0});
    Mat contr(2, 2, {1.0, 0.0, 0.0, 0.5});
    return {2, [refl, contr](long n) { return e2_uses_reflection(n) ? refl : contr; }, "switching-e2", -1};
}

inline SystemSpec make_jordan_counterexample() {
    Mat a(2, 2, {1.0, 1.0, 0.0, 1.0});
    return {2, [a](long) { return a; }, "jordan", -1};
}

// Scalar pair u_{n+1} = a u_n vs. v_{n+1} = a(1+1/(n+1)) v_n; the factor
// sequence is not summable.
inline SystemSpec make_scalar_counterexample(double a) {
    return {1, [a](long n) { return Mat(1, 1, {a * (1.0 + 1.0 / static_cast<double>(n + 1))}); },
            "scalar-1+1/n", -1};
}

// Block-switching system: A_n = X at n = 2^{k+2} + k - 2, else D, conjugated
// by the shear S. The angle averages for V = span(e1) fail to converge.
inline bool block_switching_uses_x(long n) {
    for (long k = 0;; ++k) {
        long pos = (1L << (k + 2)) + k - 2;
        if (pos == n) return true;
        if (pos > n) return false;
    }
}

inline SystemSpec make_block_switching_similar() {
    Mat j2(2, 2, {0.0, -1.0, 1.0, 0.0});
    Mat d(4, 4), x(4, 4), s = Mat::identity(4), sinv = Mat::identity(4);
    for (int b = 0; b < 2; ++b)
        for (int i = 0; i < 2; ++i)
            for (int jj = 0; jj < 2; ++jj) d(2 * b + i, 2 * b + jj) = j2(i, jj);
    x(0, 2) = x(1, 3) = x(2, 0) = x(3, 1) = 1.0;
    s(2, 3) = 1.0;
    sinv(2, 3) = -1.0;
    Mat bd = s * d * sinv, bx = s * x * sinv;
    return {4, [bd, bx](long n) { return block_switching_uses_x(n) ? bx : bd; }, "block-switching-S", -1};
}

inline std::vector<SystemSpec> make_jordan_and_scalar_counterexamples() {
    return {make_jordan_counterexample(), make_scalar_counterexample(1.5),
            make_block_switching_similar()};
}

// --- 3D Henon map -------------------------------------------------------------

struct HenonConfig {
    double omega = 0.2;
    // Homoclinic branch selection: the unstable manifold folds back to the
    // fixed point along several transversal intersections; shooting_sign
    // picks the half-branch and fold_index the intersection (ordered by the
    // shooting parameter within one fundamental domain).
    int shooting_sign = +1;
    int fold_index = 0;
};

inline Vec henon_map(const HenonConfig& cfg, const Vec& x) {
    double c = std::cos(cfg.omega), s = std::sin(cfg.omega);
    return {-x[0] * x[0] - 0.9 * x[2] + 1.4, x[0] * c - x[1] * s, x[1] * c + x[0] * s};
}

inline Mat henon_jacobian(const HenonConfig& cfg, const Vec& x) {
    double c = std::cos(cfg.omega), s = std::sin(cfg.omega);
    Mat j(3, 3);
    j(0, 0) = -2.0 * x[0];
    j(0, 2) = -0.9;
    j(1, 0) = c;
    j(1, 1) = -s;
    j(2, 0) = s;
    j(2, 1) = c;
    return j;
}

struct HenonFixedPoint {
    Vec point;
    std::vector<std::complex<double>> eigenvalues;  // unstable real first
    double unstable_eigenvalue = 0.0;
    double stable_modulus = 0.0;
    Vec unstable_direction;
};

inline HenonFixedPoint henon_fixed_point(const HenonConfig& cfg = {}) {
    Vec x{0.5, 0.5, 0.5};
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        Vec r = henon_map(cfg, x);
        for (int i = 0; i < 3; ++i) r[i] -= x[i];
        if (norm2(r) < 1e-13) {
            converged = true;
            break;
        }
        Mat j = henon_jacobian(cfg, x) - Mat::identity(3);
        Vec d = solve(j, r);
        for (int i = 0; i < 3; ++i) x[i] -= d[i];
    }
    if (!converged) throw NewtonDiverged("henon_fixed_point: Newton did not converge");
    HenonFixedPoint fp;
    fp.point = x;
    Mat df = henon_jacobian(cfg, x);
    auto eigs = eigenvalues3(df);
    std::sort(eigs.begin(), eigs.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  return std::abs(a) > std::abs(b);
              });
    fp.eigenvalues = eigs;
    fp.unstable_eigenvalue = eigs[0].real();
    fp.stable_modulus = std::abs(eigs[1]);
    // Unstable eigendirection: smallest singular direction of DF - lambda I.
    SVDResult s = svd(df - fp.unstable_eigenvalue * Mat::identity(3));
    fp.unstable_direction = s.v.col(2);
    return fp;
}

struct OrbitSegment {
    std::vector<Vec> points;  // x_0 .. x_K
    double residual = 0.0;
    enum class Boundary { Periodic, FixedPointAnchored } boundary_type = Boundary::Periodic;

    long last_index() const { return static_cast<long>(points.size()) - 1; }
};

namespace detail {

// Solve the periodic-orbit Newton correction
//   -DF_i d_i + d_{i+1} = -r_i   (i = 0..K-1),
//    d_0 - d_K          = -r_bc
// by a sequential QR sweep over block columns. Rows carry coefficients for
// the current column, the next column, the last column (spike from the
// periodic closure) and the right-hand side; orthogonal eliminations keep
// the sweep stable even though the transition operators themselves grow
// exponentially.
class PeriodicBlockSolver {
public:
    // dfs[i] = DF(x_i) for i = 0..K-1; r has K marching residuals + closure.
    static std::vector<Vec> solve(const std::vector<Mat>& dfs, const std::vector<Vec>& rhs,
                                  const Vec& rhs_bc) {
        const int d = dfs.front().rows();
        const long k_blocks = static_cast<long>(dfs.size());
        // Pending rows: [cur(d) | next(d) | spike(d) | rhs(1)].
        const int w = 3 * d + 1;
        std::vector<Vec> pending(d, Vec(w, 0.0));
        for (int i = 0; i < d; ++i) {
            pending[i][i] = 1.0;                // d_0 coefficient
            pending[i][2 * d + i] = -1.0;       // -d_K spike
            pending[i][3 * d] = -rhs_bc[i];
        }
        std::vector<Vec> finalized;  // k_blocks * d rows, same layout
        finalized.reserve(static_cast<size_t>(k_blocks) * d);
        std::vector<Vec> work(2 * d, Vec(w, 0.0));
        for (long j = 0; j < k_blocks; ++j) {
            for (int i = 0; i < d; ++i) work[i] = pending[i];
            for (int i = 0; i < d; ++i) {
                Vec& row = work[d + i];
                std::fill(row.begin(), row.end(), 0.0);
                for (int c = 0; c < d; ++c) row[c] = -dfs[j](i, c);
                row[d + i] = 1.0;
                row[3 * d] = -rhs[j][i];
            }
            // Householder elimination of the leading d columns of the 2d x w block.
            for (int col = 0; col < d; ++col) {
                double nrm = 0.0;
                for (int i = col; i < 2 * d; ++i) nrm += work[i][col] * work[i][col];
                nrm = std::sqrt(nrm);
                if (nrm == 0.0) continue;
                double alpha = work[col][col] > 0 ? -nrm : nrm;
                Vec v(2 * d, 0.0);
                for (int i = col; i < 2 * d; ++i) v[i] = work[i][col];
                v[col] -= alpha;
                double vn = 0.0;
                for (double x : v) vn += x * x;
                vn = std::sqrt(vn);
                if (vn == 0.0) continue;
                for (double& x : v) x /= vn;
                for (int c = col; c < w; ++c) {
                    double s = 0.0;
                    for (int i = col; i < 2 * d; ++i) s += v[i] * work[i][c];
                    s *= 2.0;
                    for (int i = col; i < 2 * d; ++i) work[i][c] -= s * v[i];
                }
            }
            for (int i = 0; i < d; ++i) finalized.push_back(work[i]);
            // Remaining rows: shift next -> cur.
            for (int i = 0; i < d; ++i) {
                Vec& src = work[d + i];
                Vec& dst = pending[i];
                for (int c = 0; c < d; ++c) dst[c] = src[d + c];
                for (int c = 0; c < d; ++c) dst[d + c] = 0.0;
                for (int c = 0; c < d; ++c) dst[2 * d + c] = src[2 * d + c];
                dst[3 * d] = src[3 * d];
            }
        }
        // Final block: coefficients for d_K are cur + spike.
        Mat mk(d, d);
        Vec bk(d);
        for (int i = 0; i < d; ++i) {
            for (int c = 0; c < d; ++c) mk(i, c) = pending[i][c] + pending[i][2 * d + c];
            bk[i] = pending[i][3 * d];
        }
        std::vector<Vec> delta(static_cast<size_t>(k_blocks) + 1, Vec(d, 0.0));
        delta[static_cast<size_t>(k_blocks)] = angular::solve(mk, bk);
        for (long j = k_blocks - 1; j >= 0; --j) {
            const Vec& dk = delta[static_cast<size_t>(k_blocks)];
            const Vec& dn = delta[static_cast<size_t>(j) + 1];
            Vec x(d, 0.0);
            for (int i = d - 1; i >= 0; --i) {
                const Vec& row = finalized[static_cast<size_t>(j) * d + i];
                double s = row[3 * d];
                for (int c = 0; c < d; ++c) s -= row[d + c] * dn[c];
                for (int c = 0; c < d; ++c) s -= row[2 * d + c] * dk[c];
                for (int c = i + 1; c < d; ++c) s -= row[c] * x[c];
                if (row[i] == 0.0) throw SingularMatrix("periodic solver: zero pivot");
                x[i] = s / row[i];
            }
            delta[static_cast<size_t>(j)] = x;
        }
        return delta;
    }
};

template <typename MapFn, typename JacFn>
OrbitSegment newton_periodic_orbit(MapFn&& map, JacFn&& jac, std::vector<Vec> seed, double tol,
                                   int max_iter) {
    const long k_blocks = static_cast<long>(seed.size()) - 1;
    const int d = static_cast<int>(seed.front().size());
    auto residual_of = [&](const std::vector<Vec>& pts) {
        double res = 0.0;
        for (long i = 0; i < k_blocks; ++i) {
            Vec f = map(pts[static_cast<size_t>(i)]);
            for (int c = 0; c < d; ++c) res = std::max(res, std::abs(pts[static_cast<size_t>(i) + 1][c] - f[c]));
        }
        for (int c = 0; c < d; ++c)
            res = std::max(res, std::abs(pts[0][c] - pts[static_cast<size_t>(k_blocks)][c]));
        return res;
    };
    double res = residual_of(seed);
    for (int it = 0; it < max_iter; ++it) {
        if (res < tol) {
            OrbitSegment orbit;
            orbit.points = std::move(seed);
            orbit.residual = res;
            orbit.boundary_type = OrbitSegment::Boundary::Periodic;
            return orbit;
        }
        std::vector<Mat> dfs;
        dfs.reserve(static_cast<size_t>(k_blocks));
        std::vector<Vec> rhs;
        rhs.reserve(static_cast<size_t>(k_blocks));
        for (long i = 0; i < k_blocks; ++i) {
            dfs.push_back(jac(seed[static_cast<size_t>(i)]));
            Vec f = map(seed[static_cast<size_t>(i)]);
            Vec r(d);
            for (int c = 0; c < d; ++c) r[c] = seed[static_cast<size_t>(i) + 1][c] - f[c];
            rhs.push_back(std::move(r));
        }
        Vec rbc(d);
        for (int c = 0; c < d; ++c) rbc[c] = seed[0][c] - seed[static_cast<size_t>(k_blocks)][c];
        std::vector<Vec> delta = PeriodicBlockSolver::solve(dfs, rhs, rbc);
        double step = 1.0;
        for (int halving = 0; halving < 8; ++halving) {
            std::vector<Vec> trial = seed;
            for (size_t i = 0; i < trial.size(); ++i)
                for (int c = 0; c < d; ++c) trial[i][c] += step * delta[i][c];
            double trial_res = residual_of(trial);
            if (trial_res < res || step < 1e-2) {
                seed = std::move(trial);
                res = trial_res;
                break;
            }
            step *= 0.5;
        }
    }
    if (res < tol) {
        OrbitSegment orbit;
        orbit.points = std::move(seed);
        orbit.residual = res;
        orbit.boundary_type = OrbitSegment::Boundary::Periodic;
        return orbit;
    }
    throw NewtonDiverged("newton_periodic_orbit: residual " + std::to_string(res));
}

}  // namespace detail

// Homoclinic orbit of the 3D Henon map w.r.t. its fixed point, computed on
// [-half_length, half_length] as a periodic boundary value problem and
// reported on [0, 2*half_length] with the main excursion at the center.
// Seeding: shoot from xi + eps * v_u, keep the excursion that returns
// closest to xi, and let Newton close it up; several eps are tried.
inline OrbitSegment henon_homoclinic(const HenonConfig& cfg = {}, long half_length = 1000) {
    HenonFixedPoint fp = henon_fixed_point(cfg);
    const Vec& xi = fp.point;
    auto map = [&](const Vec& x) { return henon_map(cfg, x); };
    auto jac = [&](const Vec& x) { return henon_jacobian(cfg, x); };

    // Shooting parameter: eps = sign * eps0 * |lam_u|^t with t in [0,1), one
    // multiplicative fundamental domain of the unstable eigenvalue. The
    // return distance to xi has one local minimum per tangle fold; the
    // selected fold is refined and handed to Newton.
    const double lam = std::abs(fp.unstable_eigenvalue);
    const double eps0 = 1e-8;
    struct Shot {
        double t = 0.0;
        double return_dist = 1e9;
        size_t return_idx = 0;
        std::vector<Vec> traj;
    };
    auto shoot = [&](double t, bool keep_traj) {
        Shot s;
        s.t = t;
        Vec x = axpy(cfg.shooting_sign * eps0 * std::pow(lam, t), fp.unstable_direction, xi);
        if (keep_traj) s.traj.push_back(x);
        bool left = false;
        for (int n = 0; n < 260; ++n) {
            x = map(x);
            if (keep_traj) s.traj.push_back(x);
            double dist = norm2(axpy(-1.0, xi, x));
            if (dist > 0.5) left = true;
            if (dist > 100.0) break;
            if (left && dist < s.return_dist) {
                s.return_dist = dist;
                s.return_idx = static_cast<size_t>(n) + 1;
            }
        }
        return s;
    };
    const int coarse = 3000;
    std::vector<double> rets(coarse);
    for (int i = 0; i < coarse; ++i) rets[static_cast<size_t>(i)] = shoot(static_cast<double>(i) / coarse, false).return_dist;
    std::vector<Shot> folds;
    for (int i = 0; i < coarse; ++i) {
        double prev = rets[static_cast<size_t>((i + coarse - 1) % coarse)];
        double next = rets[static_cast<size_t>((i + 1) % coarse)];
        if (!(rets[static_cast<size_t>(i)] < prev && rets[static_cast<size_t>(i)] < next &&
              rets[static_cast<size_t>(i)] < 0.4))
            continue;
        Shot best = shoot(static_cast<double>(i) / coarse, false);
        for (int r = 0; r < 6; ++r) {
            double halfwidth = std::pow(15.0, -r) / coarse;
            Shot improved = best;
            for (int j = -30; j <= 30; ++j) {
                Shot s = shoot(best.t + j * halfwidth / 30.0, false);
                if (s.return_dist < improved.return_dist) improved = s;
            }
            best = improved;
        }
        if (best.return_dist < 0.05) folds.push_back(best);
    }
    std::sort(folds.begin(), folds.end(), [](const Shot& a, const Shot& b) { return a.t < b.t; });
    if (folds.empty() || cfg.fold_index >= static_cast<int>(folds.size()))
        throw NewtonDiverged("henon_homoclinic: requested fold not found from the unstable direction");
    Shot best = shoot(folds[static_cast<size_t>(cfg.fold_index)].t, true);
    best.return_idx = folds[static_cast<size_t>(cfg.fold_index)].return_idx;
    best.traj.resize(best.return_idx + 1);

    // Center the excursion peak in [0, 2*half_length].
    long total = 2 * half_length;
    size_t peak = 0;
    double peak_dist = -1.0;
    for (size_t i = 0; i < best.traj.size(); ++i) {
        double dist = norm2(axpy(-1.0, xi, best.traj[i]));
        if (dist > peak_dist) {
            peak_dist = dist;
            peak = i;
        }
    }
    std::vector<Vec> seed(static_cast<size_t>(total) + 1, xi);
    for (size_t i = 0; i < best.traj.size(); ++i) {
        long idx = half_length + static_cast<long>(i) - static_cast<long>(peak);
        if (idx >= 0 && idx <= total) seed[static_cast<size_t>(idx)] = best.traj[i];
    }
    OrbitSegment orbit = detail::newton_periodic_orbit(map, jac, std::move(seed), 1e-11, 60);
    if (norm2(axpy(-1.0, xi, orbit.points.front())) > 1e-6 ||
        norm2(axpy(-1.0, xi, orbit.points.back())) > 1e-6)
        throw NewtonDiverged("henon_homoclinic: endpoints do not approach the fixed point");
    return orbit;
}

// Multi-humped orbit: tile [0, total] with copies of the center part of
// length m of the primary orbit, then close up with Newton under periodic
// boundary conditions.
inline OrbitSegment henon_multihump(const HenonConfig& cfg, const OrbitSegment& primary, long m,
                                    long total = 2000) {
    if (m >= total) throw OutOfRange("henon_multihump: need M < total");
    long center = primary.last_index() / 2;
    long from = center - m / 2;
    if (from < 0 || from + m > primary.last_index())
        throw OutOfRange("henon_multihump: primary orbit too short for this M");
    std::vector<Vec> seed(static_cast<size_t>(total) + 1);
    for (long i = 0; i <= total; ++i)
        seed[static_cast<size_t>(i)] = primary.points[static_cast<size_t>(from + (i % m))];
    seed[static_cast<size_t>(total)] = seed[0];
    auto map = [&](const Vec& x) { return henon_map(cfg, x); };
    auto jac = [&](const Vec& x) { return henon_jacobian(cfg, x); };
    return detail::newton_periodic_orbit(map, jac, std::move(seed), 1e-11, 60);
}

// Variational system u_{n+1} = DF(x_n) u_n along a stored orbit. With
// periodic wrapping the index runs modulo the orbit period (multi-humped
// orbits close up exactly); otherwise the horizon is the orbit length.
inline SystemSpec henon_variational(const HenonConfig& cfg, const OrbitSegment& orbit,
                                    bool periodic_wrap = false) {
    auto jacs = std::make_shared<std::vector<Mat>>();
    long period = orbit.last_index();
    jacs->reserve(static_cast<size_t>(period));
    for (long i = 0; i < period; ++i)
        jacs->push_back(henon_jacobian(cfg, orbit.points[static_cast<size_t>(i)]));
    SystemSpec s;
    s.dim = 3;
    s.label = periodic_wrap ? "henon-multihump" : "henon-homoclinic";
    s.horizon = periodic_wrap ? -1 : period;
    s.matrix_at = [jacs, period, periodic_wrap](long n) {
        long idx = periodic_wrap ? ((n % period) + period) % period : n;
        return (*jacs)[static_cast<size_t>(idx)];
    };
    return s;
}

inline SystemSpec henon_autonomous_variational(const HenonConfig& cfg = {}) {
    Mat df = henon_jacobian(cfg, henon_fixed_point(cfg).point);
    return {3, [df](long) { return df; }, "henon-autonomous", -1};
}

// --- Lorenz system -------------------------------------------------------------

struct LorenzConfig {
    double sigma = 10.0, rho = 28.0, beta = 8.0 / 3.0;
    double h = 0.05;        // step of the h-step map
    double substep = 1e-4;  // inner RK4 step
    Vec x0{10.0, 10.0, 10.0};

    void validate() const {
        double ratio = h / substep;
        if (!(h > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9)
            throw NonIntegralStepCount("LorenzConfig: h must be a positive multiple of substep");
    }
};

inline Vec lorenz_rhs(const LorenzConfig& cfg, const Vec& y) {
    return {cfg.sigma * (y[1] - y[0]), cfg.rho * y[0] - y[1] - y[0] * y[2], y[0] * y[1] - cfg.beta * y[2]};
}

// h-step map F_h via classical RK4 with the fixed substep.
inline Vec lorenz_step(const LorenzConfig& cfg, Vec x) {
    long steps = std::lround(cfg.h / cfg.substep);
    double dt = cfg.substep;
    for (long s = 0; s < steps; ++s) {
        Vec k1 = lorenz_rhs(cfg, x);
        Vec k2 = lorenz_rhs(cfg, axpy(0.5 * dt, k1, x));
        Vec k3 = lorenz_rhs(cfg, axpy(0.5 * dt, k2, x));
        Vec k4 = lorenz_rhs(cfg, axpy(dt, k3, x));
        for (int i = 0; i < 3; ++i) x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return x;
}

// Central difference quotient Jacobian, step 1e-6 per coordinate (validated
// against the analytic Henon Jacobian in the tests).
template <typename MapFn>
Mat central_difference_jacobian(MapFn&& map, const Vec& x, double fd_step = 1e-6) {
    int d = static_cast<int>(x.size());
    Mat j(d, d);
    for (int c = 0; c < d; ++c) {
        Vec xp = x, xm = x;
        xp[static_cast<size_t>(c)] += fd_step;
        xm[static_cast<size_t>(c)] -= fd_step;
        Vec fp = map(xp), fm = map(xm);
        for (int r = 0; r < d; ++r) j(r, c) = (fp[static_cast<size_t>(r)] - fm[static_cast<size_t>(r)]) / (2.0 * fd_step);
    }
    return j;
}

inline Mat lorenz_step_jacobian(const LorenzConfig& cfg, const Vec& x, double fd_step = 1e-6) {
    return central_difference_jacobian([&](const Vec& y) { return lorenz_step(cfg, y); }, x, fd_step);
}

struct LorenzSystem {
    std::vector<Vec> orbit;  // x_0 .. x_{length}
    SystemSpec variational;  // n -> DF_h(x_n), horizon = length
};

inline LorenzSystem lorenz_step_map(const LorenzConfig& cfg, long orbit_length) {
    cfg.validate();
    LorenzSystem sys;
    sys.orbit.reserve(static_cast<size_t>(orbit_length) + 1);
    Vec x = cfg.x0;
    sys.orbit.push_back(x);
    for (long n = 0; n < orbit_length; ++n) {
        x = lorenz_step(cfg, x);
        sys.orbit.push_back(x);
    }
    auto jacs = std::make_shared<std::vector<Mat>>();
    jacs->reserve(static_cast<size_t>(orbit_length));
    for (long n = 0; n < orbit_length; ++n)
        jacs->push_back(lorenz_step_jacobian(cfg, sys.orbit[static_cast<size_t>(n)]));
    sys.variational.dim = 3;
    sys.variational.label = "lorenz-h" + std::to_string(cfg.h);
    sys.variational.horizon = orbit_length;
    sys.variational.matrix_at = [jacs](long n) { return (*jacs)[static_cast<size_t>(n)]; };
    return sys;
}

// Mean vector angle between successive displacement directions of an orbit.
inline double angle_on_average(const std::vector<Vec>& orbit, long from, long to) {
    if (to < 0) to = static_cast<long>(orbit.size()) - 1;
    if (to - from < 2) throw OutOfRange("angle_on_average: need at least 3 points");
    double sum = 0.0;
    long count = 0;
    for (long n = from; n + 2 <= to; ++n) {
        Vec d1 = axpy(-1.0, orbit[static_cast<size_t>(n)], orbit[static_cast<size_t>(n) + 1]);
        Vec d2 = axpy(-1.0, orbit[static_cast<size_t>(n) + 1], orbit[static_cast<size_t>(n) + 2]);
        if (norm2(d1) < 1e-14 || norm2(d2) < 1e-14)
            throw DegenerateStep("angle_on_average: displacement below 1e-14");
        sum += vector_angle(d1, d2);
        ++count;
    }
    return sum / static_cast<double>(count);
}

// --- Orbit CSV (header n,x1,x2,x3; LF line endings) ---------------------------

inline void write_orbit_csv(const std::string& path, const std::vector<Vec>& orbit) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_orbit_csv: cannot open " + path);
    out << "n,x1,x2,x3\n";
    char buf[128];
    for (size_t n = 0; n < orbit.size(); ++n) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", n, orbit[n][0], orbit[n][1],
                      orbit[n][2]);
        out << buf;
    }
}

inline std::vector<Vec> read_orbit_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_orbit_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("n,x1,x2,x3", 0) != 0)
        throw Error("read_orbit_csv: expected header n,x1,x2,x3");
    std::vector<Vec> orbit;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        Vec x(3);
        std::getline(ss, tok, ',');  // index column
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(ss, tok, ',')) throw Error("read_orbit_csv: short row");
            x[static_cast<size_t>(c)] = std::stod(tok);
        }
        orbit.push_back(std::move(x));
    }
    return orbit;
}

}  // namespace angular
