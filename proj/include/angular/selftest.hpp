#pragma once

// Compact property suites behind the command-line `validate` verb: metric
// axioms, drift bounds, invariances, oracle cross-checks. Each suite returns
// pass/fail with a short detail string. The psi hook exists so a mutated
// implementation can be injected to confirm the suite actually bites.

#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "angular/dichotomy.hpp"
#include "angular/models.hpp"
#include "angular/normalform.hpp"
#include "angular/spectra.hpp"

namespace angular::selftest {

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct Hooks {
    std::function<double(double, double)> psi;  // override for mutation testing
};

namespace detail {

using Rng = std::mt19937_64;

inline Mat rand_mat(int r, int c, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = g(rng);
    return m;
}

inline Subspace rand_space(int d, int s, Rng& rng) {
    while (true) {
        Mat m = rand_mat(d, s, rng);
        SVDResult sv = svd(m);
        if (sv.sigma.back() > 1e-3 * sv.sigma.front()) return orthonormalize(m);
    }
}

template <typename F>
CheckResult run(const std::string& name, F&& body) {
    CheckResult res;
    res.name = name;
    try {
        std::string detail;
        res.ok = body(detail);
        res.detail = detail;
    } catch (const std::exception& e) {
        res.ok = false;
        res.detail = e.what();
    }
    return res;
}

}  // namespace detail

inline std::vector<CheckResult> run_property_suites(const Hooks& hooks = {}) {
    using detail::rand_mat;
    using detail::rand_space;
    using detail::run;
    std::vector<CheckResult> out;
    auto psi_fn = hooks.psi ? hooks.psi : [](double rho, double t) { return psi(rho, t); };

    out.push_back(run("psi-identities", [&](std::string& detail) {
        detail::Rng rng(101);
        std::uniform_real_distribution<double> ut(-6.0, 6.0), ur(0.05, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 2000; ++i) {
            double rho = ur(rng), t = ut(rng);
            worst = std::max(worst, std::abs(psi_fn(rho, t + M_PI) - psi_fn(rho, t) - M_PI));
            worst = std::max(worst, std::abs(psi_fn(rho, psi_fn(1.0 / rho, t)) - t));
            worst = std::max(worst, std::abs(psi_fn(rho, 0.0)));
            worst = std::max(worst, std::abs(psi_fn(1.0, t) - t));
        }
        std::ostringstream os;
        os << "worst residual " << worst;
        detail = os.str();
        return worst < 1e-12;
    }));

    out.push_back(run("grassmann-metric-axioms", [&](std::string& detail) {
        detail::Rng rng(102);
        double worst = 0.0;
        for (int i = 0; i < 300; ++i) {
            Subspace u = rand_space(3, 2, rng), v = rand_space(3, 2, rng), w = rand_space(3, 2, rng);
            worst = std::max(worst, std::abs(max_angle(u, v) - max_angle(v, u)));
            worst = std::max(worst, max_angle(u, w) - max_angle(u, v) - max_angle(v, w));
        }
        std::ostringstream os;
        os << "worst violation " << worst;
        detail = os.str();
        return worst < 1e-10;
    }));

    out.push_back(run("mapped-angle-inequalities", [&](std::string& detail) {
        detail::Rng rng(103);
        const double c_pi = M_PI / 2 + std::sqrt(M_PI * M_PI / 4 + 1);
        std::normal_distribution<double> g(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 300; ++i) {
            Subspace v = rand_space(3, 2, rng), w = rand_space(3, 2, rng);
            Mat s = rand_mat(3, 3, rng);
            if (smallest_singular_ratio(s) < 1e-2) continue;
            double kappa = condition_number(s);
            double lhs = grassmann_distance(orthonormalize(s * v.basis()), orthonormalize(s * w.basis()));
            worst = std::max(worst, lhs - M_PI * kappa * (1 + kappa) * grassmann_distance(v, w));
            Mat near_id = Mat::identity(3);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) near_id(a, b) += 0.05 * g(rng);
            double dev = std::abs(max_angle(orthonormalize(near_id * v.basis()), w) - max_angle(v, w));
            worst = std::max(worst, dev - c_pi * spectral_norm(near_id - Mat::identity(3)));
        }
        std::ostringstream os;
        os << "worst violation " << worst;
        detail = os.str();
        return worst < 1e-10;
    }));

    out.push_back(run("average-drift-bound", [&](std::string& detail) {
        detail::Rng rng(104);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            auto mats = std::make_shared<std::vector<Mat>>();
            for (int n = 0; n < 60; ++n) {
                Mat m = rand_mat(3, 3, rng);
                while (smallest_singular_ratio(m) < 5e-2) m = rand_mat(3, 3, rng);
                mats->push_back(m);
            }
            SystemSpec sys{3, [mats](long n) { return (*mats)[static_cast<size_t>(n % 60)]; }, "r", -1};
            AngleSeries ser = propagate(sys, rand_space(3, 1, rng), 60);
            for (long n = 1; n < 60; ++n)
                worst = std::max(worst, std::abs(alpha(ser, n) - alpha(ser, n + 1)) - M_PI / (n + 1));
        }
        std::ostringstream os;
        os << "worst excess " << worst;
        detail = os.str();
        return worst <= 1e-15;
    }));

    out.push_back(run("scaling-invariance", [&](std::string& detail) {
        detail::Rng rng(105);
        SystemSpec sys = make_rotation_example(0.6);
        SystemSpec scaled = scaled_system(sys, [](long n) { return n % 2 ? -1.7 : 0.4; });
        Subspace v = rand_space(3, 1, rng);
        AngleSeries a = propagate(sys, v, 60), b = propagate(scaled, v, 60);
        double worst = 0.0;
        for (size_t j = 0; j < a.values.size(); ++j)
            worst = std::max(worst, std::abs(a.values[j] - b.values[j]));
        std::ostringstream os;
        os << "worst difference " << worst;
        detail = os.str();
        return worst < 1e-12;
    }));

    out.push_back(run("propagate-vs-dense-product", [&](std::string& detail) {
        detail::Rng rng(106);
        std::normal_distribution<double> g(0.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            auto mats = std::make_shared<std::vector<Mat>>();
            for (int n = 0; n < 50; ++n) {
                Mat perturb = Mat::identity(3);
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) perturb(i, j) += 0.1 * g(rng);
                mats->push_back(qr_thin(rand_mat(3, 3, rng)).q * perturb);
            }
            SystemSpec sys{3, [mats](long n) { return (*mats)[static_cast<size_t>(n)]; }, "m", 50};
            Subspace v = rand_space(3, 2, rng);
            PropagatedFrame frame = propagate_frame(sys, v, 50);
            Mat m = v.basis();
            for (long n = 0; n < 50; ++n) {
                m = sys.at(n) * m;
                m = (1.0 / m.frobenius()) * m;
            }
            Subspace direct = orthonormalize(m);
            Mat pa = frame.frame.basis() * frame.frame.basis().transposed();
            Mat pb = direct.basis() * direct.basis().transposed();
            worst = std::max(worst, (pa - pb).max_abs());
        }
        std::ostringstream os;
        os << "worst projector distance " << worst;
        detail = os.str();
        return worst < 1e-8;
    }));

    out.push_back(run("closed-form-vs-simulation", [&](std::string& detail) {
        NormalFormParams params{0.8, Angle::radians(0.5)};
        if (skewness(params) > 1.0) return false;
        Mat a = normal_form_matrix(params.rho, params.phi.value);
        SystemSpec sys{2, [a](long) { return a; }, "nf", -1};
        AngleSeries ser = propagate(sys, Subspace::span_of(Vec{1.0, 0.3}), 50000);
        double dev = std::abs(alpha(ser, ser.size()) - params.phi.value);
        std::ostringstream os;
        os << "deviation " << dev;
        detail = os.str();
        return dev < 1e-3;
    }));

    out.push_back(run("maxmin-angle-oracle", [&](std::string& detail) {
        detail::Rng rng(107);
        double worst = 0.0;
        for (int trial = 0; trial < 3; ++trial) {
            Subspace v = rand_space(4, 2, rng), w = rand_space(4, 2, rng);
            double fast = max_angle(v, w);
            double oracle = 0.0;
            for (int i = 0; i < 240; ++i) {
                double aa = i * M_PI / 240;
                Vec vv(4);
                for (int r = 0; r < 4; ++r)
                    vv[static_cast<size_t>(r)] = std::cos(aa) * v.basis()(r, 0) + std::sin(aa) * v.basis()(r, 1);
                double inner = M_PI;
                for (int j = 0; j < 240; ++j) {
                    double bb = j * M_PI / 240;
                    Vec ww(4);
                    for (int r = 0; r < 4; ++r)
                        ww[static_cast<size_t>(r)] = std::cos(bb) * w.basis()(r, 0) + std::sin(bb) * w.basis()(r, 1);
                    inner = std::min(inner, vector_angle(vv, ww));
                }
                oracle = std::max(oracle, inner);
            }
            worst = std::max(worst, std::abs(fast - oracle));
        }
        std::ostringstream os;
        os << "worst disagreement " << worst;
        detail = os.str();
        return worst < 1e-3;
    }));

    return out;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.ok) return false;
    return true;
}

}  // namespace angular::selftest
