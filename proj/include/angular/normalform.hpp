#pragma once

// Closed-form angular spectra for the 2x2 orthogonal normal form
//
//   A(rho,phi) = [ cos phi   -sin(phi)/rho ]      0 < rho <= 1,
//                [ rho sin phi   cos phi   ],     0 < phi <= pi/2,
//
// and for the mixed 3x3 case [[B, b],[0, lambda]] with B = A(rho,phi) and
// |lambda| != 1. The direction dynamics of A(rho,phi) on line angles is
// theta -> T(theta) = Psi_rho(phi + Psi_{1/rho}(theta)) with
// Psi_rho(theta) = arctan(rho tan theta) extended by Psi(theta+n pi) =
// Psi(theta)+n pi. The first spectrum splits into three cases by the
// skewness sk(rho,phi) = (rho+1/rho) sin(phi)/2 and the rationality of
// phi/pi:
//
//   sk <= 1                          {phi}
//   sk > 1, phi/pi irrational        {phi + (1/pi) integral_{delta<0} delta},
//                                      delta(t) = 2 Psi(t) - 2 Psi(t+phi) + pi
//   sk > 1, phi/pi = p/q coprime     [min G_q, max G_q],
//                                      G_q = mean line angle along one period
//
// The second spectrum of the mixed case comes from the ergodic average of
// g(eta) = angle(Q r(T eta), Q r(eta)) with Q built from the lambda
// eigenvector (w,1), w = (lambda I - B)^{-1} b.

#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "angular/linalg.hpp"
#include "angular/optimize.hpp"
#include "angular/quadrature.hpp"
#include "angular/spectrum_set.hpp"

namespace angular {

// An angle that is either a plain radian value or an exact multiple p/q of
// pi. The closed forms are discontinuous in the rational/irrational
// distinction, so floats are treated as irrational; a float that sits within
// 1e-12 of some p/q with q <= 64 is refused as undecidable.
struct Angle {
    double value = 0.0;
    bool exact = false;
    long p = 0, q = 1;

    static Angle radians(double v) { return {v, false, 0, 1}; }

    static Angle pi_fraction(long p, long q) {
        if (q <= 0) throw OutOfRange("Angle::pi_fraction: q must be positive");
        long g = std::gcd(std::abs(p), q);
        if (g > 0) {
            p /= g;
            q /= g;
        }
        return {M_PI * static_cast<double>(p) / static_cast<double>(q), true, p, q};
    }
};

struct Rationality {
    bool rational = false;
    long p = 0, q = 1;
};

inline Rationality classify_angle(const Angle& phi, long q_max = 64) {
    if (phi.exact) return {true, phi.p, phi.q};
    for (long q = 1; q <= q_max; ++q) {
        double pf = phi.value * q / M_PI;
        long p = std::lround(pf);
        if (p == 0) continue;
        if (std::abs(phi.value - M_PI * static_cast<double>(p) / static_cast<double>(q)) < 1e-12)
            throw RationalityUndecided(
                "phi is within 1e-12 of pi*" + std::to_string(p) + "/" + std::to_string(q) +
                "; pass it as an exact pi-fraction or perturb it");
    }
    return {false, 0, 1};
}

// Psi_rho: continuous strictly increasing bijection of R with
// Psi_rho(theta + n pi) = Psi_rho(theta) + n pi and fixed points at
// multiples of pi/2. Psi_1 = id and Psi_rho^{-1} = Psi_{1/rho}.
inline double psi(double rho, double theta) {
    if (rho <= 0.0) throw OutOfRange("psi: rho must be positive");
    double n = std::round(theta / M_PI);
    double t = theta - n * M_PI;  // |t| <= pi/2
    return n * M_PI + std::atan2(rho * std::sin(t), std::cos(t));
}

inline double psi_inv(double rho, double theta) { return psi(1.0 / rho, theta); }

struct NormalFormParams {
    double rho = 1.0;   // (0, 1]
    Angle phi;          // (0, pi/2]

    void validate() const {
        if (!(rho > 0.0 && rho <= 1.0)) throw OutOfRange("NormalFormParams: rho outside (0,1]");
        if (!(phi.value > 0.0 && phi.value <= M_PI / 2.0 + 1e-15))
            throw OutOfRange("NormalFormParams: phi outside (0, pi/2]");
    }
};

inline Mat normal_form_matrix(double rho, double phi) {
    return Mat(2, 2, {std::cos(phi), -std::sin(phi) / rho, rho * std::sin(phi), std::cos(phi)});
}

// sk(rho,phi) = (rho + 1/rho) sin(phi) / 2; >= sin(phi), equality iff rho=1.
inline double skewness(const NormalFormParams& params) {
    params.validate();
    return 0.5 * (params.rho + 1.0 / params.rho) * std::sin(params.phi.value);
}

// Line-angle step map of A(rho,phi).
inline double angle_step_map(double rho, double phi, double eta) {
    return psi(rho, phi + psi_inv(rho, eta));
}

inline double delta_function(double rho, double phi, double theta) {
    return 2.0 * psi(rho, theta) - 2.0 * psi(rho, theta + phi) + M_PI;
}

// Mean line angle along one period of the rational rotation: the orbit
// theta_j = Psi_rho(j phi + Psi_{1/rho}(theta)) advances by less than pi per
// step, so each line angle is min(step, pi - step).
inline double g_q(double rho, double phi, long q, double theta) {
    double prev = theta;
    double xi = psi_inv(rho, theta);
    double sum = 0.0;
    for (long j = 1; j <= q; ++j) {
        double cur = psi(rho, static_cast<double>(j) * phi + xi);
        double step = cur - prev;
        sum += std::min(step, M_PI - step);
        prev = cur;
    }
    return sum / static_cast<double>(q);
}

struct ClosedFormControls {
    long q_max = 64;          // rationality detection bound for float inputs
    double quad_tol = 1e-9;   // adaptive Simpson absolute tolerance
    int scan_points = 4096;   // sign-change scan / extrema seed grid
    double polish_xtol = 1e-12;
    int ergodic_points = 1 << 14;  // composite rule for the mixed case
};

enum class SpectrumCase { PointNoTurnover, PointErgodic, IntervalResonant };

inline const char* to_string(SpectrumCase c) {
    switch (c) {
        case SpectrumCase::PointNoTurnover: return "point-no-turnover";
        case SpectrumCase::PointErgodic: return "point-ergodic";
        case SpectrumCase::IntervalResonant: return "interval-resonant";
    }
    return "?";
}

struct ClosedFormResult {
    AngularSpectrumSet spectrum;
    SpectrumCase case_label = SpectrumCase::PointNoTurnover;
};

inline ClosedFormResult sigma1_closed_form(const NormalFormParams& params,
                                           const ClosedFormControls& ctl = {}) {
    params.validate();
    double rho = params.rho, phi = params.phi.value;
    ClosedFormResult res;
    if (skewness(params) <= 1.0) {
        res.spectrum.add_point(phi, {"closed-form sk<=1", {}, {}});
        res.case_label = SpectrumCase::PointNoTurnover;
        return res;
    }
    Rationality rat = classify_angle(params.phi, ctl.q_max);
    if (!rat.rational) {
        auto deltaf = [&](double t) { return delta_function(rho, phi, t); };
        std::vector<double> cuts = sign_changes(deltaf, 0.0, M_PI, ctl.scan_points, ctl.polish_xtol);
        cuts.insert(cuts.begin(), 0.0);
        cuts.push_back(M_PI);
        double negative_part = 0.0;
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            double mid = 0.5 * (cuts[i] + cuts[i + 1]);
            if (deltaf(mid) < 0.0)
                negative_part += adaptive_simpson(deltaf, cuts[i], cuts[i + 1], ctl.quad_tol);
        }
        res.spectrum.add_point(phi + negative_part / M_PI, {"closed-form ergodic", {}, {}});
        res.case_label = SpectrumCase::PointErgodic;
        return res;
    }
    long q = rat.q;
    auto g = [&](double t) { return g_q(rho, phi, q, t); };
    ScalarMinimum lo = minimize_periodic(g, M_PI, ctl.scan_points, ctl.polish_xtol);
    auto neg = [&](double t) { return -g(t); };
    ScalarMinimum hi = minimize_periodic(neg, M_PI, ctl.scan_points, ctl.polish_xtol);
    res.spectrum.add(lo.value, -hi.value, {"closed-form resonant q=" + std::to_string(q), {lo.x}, {hi.x}});
    res.case_label = SpectrumCase::IntervalResonant;
    return res;
}

// --- Mixed 3x3 case [[B, b],[0, lambda]] -----------------------------------

struct MixedParams {
    NormalFormParams normal;
    double lambda = 2.0;       // |lambda| != 1
    std::array<double, 2> b{0.0, 0.0};

    void validate() const {
        normal.validate();
        if (std::abs(std::abs(lambda) - 1.0) < 1e-12)
            throw OutOfRange("MixedParams: |lambda| must differ from 1");
    }

    std::array<double, 2> eigenvector_w() const {
        Mat m = normal_form_matrix(normal.rho, normal.phi.value);
        Mat lhs(2, 2, {lambda - m(0, 0), -m(0, 1), -m(1, 0), lambda - m(1, 1)});
        Vec w = solve(lhs, Vec{b[0], b[1]});
        return {w[0], w[1]};
    }
};

namespace detail {

struct MixedGeometry {
    double rho, phi;
    Mat q;  // 3x2, orthogonal-range basis map from Example geometry

    double g(double eta) const {
        double eta2 = angle_step_map(rho, phi, eta);
        Vec u = q * Vec{std::cos(eta2), std::sin(eta2)};
        Vec v = q * Vec{std::cos(eta), std::sin(eta)};
        return vector_angle(u, v);
    }

    double theta2_rational(long qden, double eta) const {
        double sum = 0.0;
        double cur = eta;
        for (long l = 0; l < qden; ++l) {
            sum += g(cur);
            cur = angle_step_map(rho, phi, cur);
        }
        return sum / static_cast<double>(qden);
    }
};

inline MixedGeometry mixed_geometry(double rho, double phi, std::array<double, 2> w) {
    double w2 = w[0] * w[0] + w[1] * w[1];
    Mat q(3, 2);
    q(0, 0) = (1.0 + w2) - w[0] * w[0];
    q(0, 1) = -w[0] * w[1];
    q(1, 0) = -w[1] * w[0];
    q(1, 1) = (1.0 + w2) - w[1] * w[1];
    q(2, 0) = -w[0];
    q(2, 1) = -w[1];
    return {rho, phi, std::move(q)};
}

}  // namespace detail

// Second outer angular spectrum of the mixed system, from a directly supplied
// eigenvector shape w (the parameterization used for the resonance surfaces).
inline ClosedFormResult sigma2_mixed_from_w(const NormalFormParams& params, std::array<double, 2> w,
                                            const Angle& phi_angle, const ClosedFormControls& ctl = {}) {
    params.validate();
    double rho = params.rho, phi = params.phi.value;
    detail::MixedGeometry geom = detail::mixed_geometry(rho, phi, w);
    ClosedFormResult res;
    res.spectrum.add_point(0.0, {"plane x plane", {}, {}});
    Rationality rat = classify_angle(phi_angle, ctl.q_max);
    if (!rat.rational) {
        auto integrand = [&](double xi) { return geom.g(psi(rho, xi)); };
        PeriodicIntegral integ = periodic_trapezoid(integrand, 0.0, 2.0 * M_PI, ctl.ergodic_points);
        if (integ.refinement_delta > 1e-6)
            integ = periodic_trapezoid(integrand, 0.0, 2.0 * M_PI, 4 * ctl.ergodic_points);
        res.spectrum.add_point(integ.value / (2.0 * M_PI), {"mixed ergodic", {}, {}});
        res.case_label = SpectrumCase::PointErgodic;
        return res;
    }
    long qden = rat.q;
    auto theta2 = [&](double eta) { return geom.theta2_rational(qden, eta); };
    ScalarMinimum lo = minimize_periodic(theta2, M_PI, ctl.scan_points / 2, ctl.polish_xtol);
    auto neg = [&](double eta) { return -theta2(eta); };
    ScalarMinimum hi = minimize_periodic(neg, M_PI, ctl.scan_points / 2, ctl.polish_xtol);
    res.spectrum.add(lo.value, -hi.value, {"mixed resonant q=" + std::to_string(qden), {lo.x}, {hi.x}});
    res.case_label = SpectrumCase::IntervalResonant;
    return res;
}

inline ClosedFormResult sigma2_mixed(const MixedParams& params, const ClosedFormControls& ctl = {}) {
    params.validate();
    return sigma2_mixed_from_w(params.normal, params.eigenvector_w(), params.normal.phi, ctl);
}

// --- Extraction from general matrices ---------------------------------------

// Balanced rotation form of a 2x2 matrix with a complex eigenvalue pair:
// M = sigma * U A(rho, phi_raw) U^T with U orthogonal (up to a reflection),
// rho in (0,1], phi_raw in (0,pi).
struct PlaneNormalForm {
    double rho = 1.0;
    double phi_raw = 0.0;  // (0, pi); reflect with pi-phi for the spectrum
    double sigma = 1.0;    // eigenvalue modulus
};

inline PlaneNormalForm normal_form_2x2(const Mat& m) {
    if (m.rows() != 2 || m.cols() != 2) throw DimensionMismatch("normal_form_2x2: need 2x2");
    double theta = 0.5 * std::atan2(m(1, 1) - m(0, 0), m(0, 1) + m(1, 0));
    double c = std::cos(theta), s = std::sin(theta);
    Mat g(2, 2, {c, -s, s, c});
    Mat n = g.transposed() * m * g;
    double off = n(0, 1) * n(1, 0);
    if (off >= 0.0) throw NotSupported("normal_form_2x2: eigenvalues are real");
    if (n(1, 0) < 0.0) {
        // Conjugate by diag(1,-1) so the rotation is counterclockwise.
        n(0, 1) = -n(0, 1);
        n(1, 0) = -n(1, 0);
    }
    double sigma = std::sqrt(n(0, 0) * n(0, 0) - off);
    double rho = std::sqrt(n(1, 0) / -n(0, 1));
    if (rho > 1.0) rho = 1.0 / rho;
    double phi = std::atan2(std::sqrt(-off), n(0, 0));
    return {rho, phi, sigma};
}

// First spectrum of a 2x2 block with complex eigenvalues; scale and
// orientation invariance reduce it to A(rho, phi) with phi in (0, pi/2].
inline ClosedFormResult sigma1_of_2x2_block(const Mat& m, const ClosedFormControls& ctl = {}) {
    PlaneNormalForm nf = normal_form_2x2(m);
    double phi = nf.phi_raw > M_PI / 2.0 ? M_PI - nf.phi_raw : nf.phi_raw;
    return sigma1_closed_form({nf.rho, Angle::radians(phi)}, ctl);
}

// Schur-like reduction of a 3x3 matrix with one real eigenvalue and a complex
// pair to MixedParams: order the pair block first, scale by 1/|pair| and
// balance; an obtuse phi is reflected via conjugation by diag(1,-1,1) and a
// sign flip, both of which leave angular spectra invariant.
struct MixedReduction {
    MixedParams params;
    double pair_modulus = 1.0;
    double real_eigenvalue = 0.0;
};

inline MixedReduction mixed_from_matrix(const Mat& m) {
    if (m.rows() != 3 || m.cols() != 3) throw DimensionMismatch("mixed_from_matrix: need 3x3");
    auto eigs = eigenvalues3(m);
    int real_idx = -1;
    double scale = 0.0;
    for (const auto& e : eigs) scale = std::max(scale, std::abs(e));
    for (int i = 0; i < 3; ++i)
        if (std::abs(eigs[i].imag()) < 1e-9 * scale) real_idx = i;
    int pair_count = 0;
    for (const auto& e : eigs)
        if (std::abs(e.imag()) >= 1e-9 * scale) ++pair_count;
    if (real_idx < 0 || pair_count != 2)
        throw NotSupported("mixed_from_matrix: need one real eigenvalue and a complex pair");
    double lam = eigs[real_idx].real();
    // Invariant plane of the pair = range(M - lam I).
    Mat shifted_m = m - lam * Mat::identity(3);
    SVDResult s = svd(shifted_m);
    Mat q(3, 3);
    for (int i = 0; i < 3; ++i) {
        q(i, 0) = s.u(i, 0);
        q(i, 1) = s.u(i, 1);
        q(i, 2) = s.u(i, 2);
    }
    Mat t = q.transposed() * m * q;
    double sigma_pair = std::sqrt(std::abs(t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0)));
    Mat block(2, 2, {t(0, 0), t(0, 1), t(1, 0), t(1, 1)});
    std::array<double, 2> b{t(0, 2) / sigma_pair, t(1, 2) / sigma_pair};
    double lambda = t(2, 2) / sigma_pair;

    double theta = 0.5 * std::atan2(block(1, 1) - block(0, 0), block(0, 1) + block(1, 0));
    double c = std::cos(theta), sn = std::sin(theta);
    Mat g(2, 2, {c, -sn, sn, c});
    Mat n = g.transposed() * block * g;
    std::array<double, 2> b2{(g(0, 0) * b[0] + g(1, 0) * b[1]), (g(0, 1) * b[0] + g(1, 1) * b[1])};
    if (n(0, 1) * n(1, 0) >= 0.0) throw NotSupported("mixed_from_matrix: block eigenvalues not complex");
    if (n(1, 0) < 0.0) {
        n(0, 1) = -n(0, 1);
        n(1, 0) = -n(1, 0);
        b2[1] = -b2[1];
    }
    n = (1.0 / sigma_pair) * n;
    double rho = std::sqrt(n(1, 0) / -n(0, 1));
    if (rho > 1.0) {
        // Conjugate by K = [[0,-1],[1,0]], which maps the balanced block to
        // A(1/rho, phi) and keeps all angles.
        rho = 1.0 / rho;
        double t0 = b2[0], t1 = b2[1];
        b2[0] = t1;
        b2[1] = -t0;
    }
    double phi = std::atan2(std::sqrt(-n(0, 1) * n(1, 0)), n(0, 0));
    if (phi > M_PI / 2.0) {
        phi = M_PI - phi;
        b2[0] = -b2[0];
        lambda = -lambda;
    }
    MixedReduction red;
    red.params = {{rho, Angle::radians(phi)}, lambda, b2};
    red.pair_modulus = sigma_pair;
    red.real_eigenvalue = lam;
    return red;
}

// --- Parameter sweep ---------------------------------------------------------

struct SweepCell {
    double rho;
    Angle phi;
    SpectrumCase case_label;
    double lo, hi;
};

inline std::vector<SweepCell> sweep_sigma1(const std::vector<double>& rho_grid,
                                           const std::vector<Angle>& phi_grid,
                                           const ClosedFormControls& ctl = {}) {
    std::vector<SweepCell> cells;
    cells.reserve(rho_grid.size() * phi_grid.size());
    for (double rho : rho_grid)
        for (const Angle& phi : phi_grid) {
            ClosedFormResult r = sigma1_closed_form({rho, phi}, ctl);
            cells.push_back({rho, phi, r.case_label, r.spectrum.min(), r.spectrum.max()});
        }
    return cells;
}

}  // namespace angular
