#include "doctest.h"

#include "angular/models.hpp"
#include "angular/system.hpp"
#include "oracles.hpp"

using namespace angular;

namespace {
SystemSpec random_system(int d, oracles::Rng& rng) {
    auto mats = std::make_shared<std::vector<Mat>>();
    for (int n = 0; n < 80; ++n) mats->push_back(oracles::random_invertible(d, rng, 0.05));
    return {d, [mats](long n) { return (*mats)[static_cast<size_t>(n % 80)]; }, "random", -1};
}
}  // namespace

TEST_CASE("propagate on the identity system gives zero angles") {
    SystemSpec sys{3, [](long) { return Mat::identity(3); }, "id", -1};
    oracles::Rng rng(31);
    AngleSeries ser = propagate(sys, oracles::random_subspace(3, 2, rng), 20);
    for (double b : ser.values) CHECK(b < 1e-12);
}

TEST_CASE("rotation example angle series") {
    double phi = 0.7;
    SystemSpec sys = make_rotation_example(phi);
    SUBCASE("start span(e1): every angle is phi") {
        AngleSeries ser = propagate(sys, Subspace::span_of(Vec{1, 0, 0}), 200);
        for (double b : ser.values) CHECK(b == doctest::Approx(phi).epsilon(1e-12));
    }
    SUBCASE("start with nonzero third component: angles decay to zero") {
        Subspace v = Subspace::span_of(Vec{1, 0, 1});
        AngleSeries ser = propagate(sys, v, 200);
        CHECK(ser.values.back() < 1e-6);
        // Dense-product oracle: the propagated span is Phi(N,0)V.
        PropagatedFrame frame = propagate_frame(sys, v, 200);
        Subspace oracle = oracles::dense_product_span(sys, v, 200);
        CHECK(oracles::projector_distance(frame.frame, oracle) < 1e-8);
    }
}

TEST_CASE("propagate rejects singular matrices") {
    SystemSpec sys{2, [](long n) {
        return n == 5 ? Mat(2, 2, {1, 0, 0, 0}) : Mat::identity(2);
    }, "sing", -1};
    CHECK_THROWS_AS(propagate(sys, Subspace::span_of(Vec{1, 0}), 10), SingularMatrix);
}

TEST_CASE("alpha and windowed alpha") {
    AngleSeries ser{{}, Subspace::span_of(Vec{1, 0})};
    for (int j = 0; j < 64; ++j) ser.values.push_back(0.3);
    SUBCASE("constant series") {
        for (long n : {1L, 5L, 64L}) CHECK(alpha(ser, n) == doctest::Approx(0.3));
    }
    SUBCASE("window with k = 0 reduces to alpha") {
        CHECK(alpha_window(ser, 10, 0) == doctest::Approx(alpha(ser, 10)));
    }
    SUBCASE("range errors") {
        CHECK_THROWS_AS(alpha(ser, 0), OutOfRange);
        CHECK_THROWS_AS(alpha(ser, 65), OutOfRange);
        CHECK_THROWS_AS(alpha_window(ser, 10, 60), OutOfRange);
    }
}

TEST_CASE("consecutive averages drift at most pi/(n+1)") {
    oracles::Rng rng(32);
    int checked = 0;
    for (int trial = 0; trial < 25; ++trial) {
        SystemSpec sys = random_system(2 + static_cast<int>(rng() % 2), rng);
        Subspace v = oracles::random_subspace(sys.dim, 1, rng);
        AngleSeries ser = propagate(sys, v, 40);
        for (long n = 1; n < 40; ++n) {
            CHECK(std::abs(alpha(ser, n) - alpha(ser, n + 1)) <= M_PI / (n + 1) + 1e-15);
            ++checked;
        }
    }
    CHECK(checked >= 900);
}

TEST_CASE("windowed averages of an autonomous system forget the offset") {
    SystemSpec sys = make_rotation_example(0.9);
    AngleSeries ser = propagate(sys, Subspace::span_of(Vec{1, 0, 0}), 600);
    for (long k : {0L, 50L, 200L})
        CHECK(std::abs(alpha_window(ser, 300, k) - alpha_window(ser, 300, 0)) < 1e-10);
}

TEST_CASE("scaling invariance of the angle series") {
    oracles::Rng rng(33);
    SystemSpec sys = random_system(3, rng);
    SystemSpec scaled = scaled_system(sys, [](long n) { return (n % 2 == 0) ? 2.5 : -0.3; });
    Subspace v = oracles::random_subspace(3, 1, rng);
    AngleSeries a = propagate(sys, v, 50);
    AngleSeries b = propagate(scaled, v, 50);
    for (size_t j = 0; j < a.values.size(); ++j) CHECK(std::abs(a.values[j] - b.values[j]) < 1e-12);
}

TEST_CASE("orthogonal conjugation invariance") {
    oracles::Rng rng(34);
    SystemSpec sys = random_system(3, rng);
    Mat q = oracles::random_orthogonal(3, rng);
    SystemSpec conj{3, [sys, q](long n) { return q * sys.at(n) * q.transposed(); }, "conj", -1};
    Subspace v = oracles::random_subspace(3, 2, rng);
    Subspace qv = orthonormalize(q * v.basis());
    AngleSeries a = propagate(sys, v, 50);
    AngleSeries b = propagate(conj, qv, 50);
    for (size_t j = 0; j < a.values.size(); ++j) CHECK(std::abs(a.values[j] - b.values[j]) < 1e-10);
}

TEST_CASE("propagated frames span the dense product for short horizons") {
    // Near-orthogonal factors keep the dense scaled product well conditioned
    // over the whole horizon, so the oracle span stays meaningful.
    oracles::Rng rng(35);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 2 + static_cast<int>(rng() % 3);
        int s = 1 + static_cast<int>(rng() % d);
        auto mats = std::make_shared<std::vector<Mat>>();
        for (int n = 0; n < 50; ++n) {
            Mat perturb(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) perturb(i, j) = (i == j ? 1.0 : 0.0) + 0.1 * g(rng);
            mats->push_back(oracles::random_orthogonal(d, rng) * perturb);
        }
        SystemSpec sys{d, [mats](long n) { return (*mats)[static_cast<size_t>(n)]; }, "mild", 50};
        Subspace v = oracles::random_subspace(d, s, rng);
        PropagatedFrame frame = propagate_frame(sys, v, 50);
        Subspace oracle = oracles::dense_product_span(sys, v, 50);
        CHECK(oracles::projector_distance(frame.frame, oracle) < 1e-8);
        CHECK(frame.frame.orthonormality_defect() < 1e-12);
    }
}

TEST_CASE("perturbed systems") {
    SystemSpec base = make_rotation_example(0.5);
    SUBCASE("zero perturbation changes nothing") {
        PerturbedSystem p = perturb_l1(base, [](long) { return Mat(3, 3); });
        Subspace v = Subspace::span_of(Vec{1, 0, 1});
        AngleSeries a = propagate(base, v, 30);
        AngleSeries b = propagate(p.system, v, 30);
        for (size_t j = 0; j < a.values.size(); ++j) CHECK(a.values[j] == b.values[j]);
        CHECK(p.partial_l1_norm(20) == doctest::Approx(0.0));
    }
    SUBCASE("harmonic factors are not summable") {
        SystemSpec scalar = make_scalar_counterexample(1.5);
        PerturbedSystem p = perturb_l1(
            SystemSpec{1, [](long) { return Mat(1, 1, {1.5}); }, "a", -1},
            [](long n) { return Mat(1, 1, {1.5 / static_cast<double>(n + 1)}); });
        CHECK(p.system.at(7)(0, 0) == doctest::Approx(scalar.at(7)(0, 0)));
        double n1 = p.partial_l1_norm(100), n2 = p.partial_l1_norm(1000);
        CHECK(n2 - n1 > 1.0);  // keeps growing like log n
    }
}

TEST_CASE("shifted views relabel time") {
    SystemSpec sys{2, [](long n) { return Mat(2, 2, {1.0 + n, 0, 0, 1.0}); }, "t", 100};
    SystemSpec sh = shifted(sys, 10);
    CHECK(sh.at(0)(0, 0) == doctest::Approx(11.0));
    CHECK(sh.horizon == 90);
}
