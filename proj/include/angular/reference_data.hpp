#pragma once

// Published reference values that the reproduction paths and the acceptance
// suite compare against: dichotomy intervals and angular spectra of the 3D
// quadratic map (homoclinic, autonomous and multi-humped variants) and of
// the h-step Lorenz map, plus derived scalar diagnostics. Points are stored
// as degenerate intervals.

#include <array>
#include <string>
#include <vector>

namespace angular::reference {

using Interval = std::array<double, 2>;

struct SpectraRow {
    std::string id;  // N, M or h as printed
    std::vector<Interval> dichotomy;
    std::vector<Interval> sigma1;
    std::vector<Interval> sigma2;
};

// 3D map, variational system along the homoclinic orbit.
inline const std::vector<SpectraRow>& henon_homoclinic_rows() {
    static const std::vector<SpectraRow> rows{
        {"50", {{1.467, 1.482}, {0.775, 0.787}}, {{0.358, 0.358}, {1.108, 1.264}},
         {{0.487, 0.487}, {1.211, 1.275}}},
        {"100", {{1.468, 1.482}, {0.776, 0.785}}, {{0.178, 0.178}, {1.222, 1.307}},
         {{0.242, 0.242}, {1.289, 1.296}}},
        {"1000", {{1.470, 1.478}, {0.779, 0.784}}, {{0.018, 0.018}, {1.325, 1.333}},
         {{0.024, 0.024}, {1.324, 1.325}}},
        {"2000", {{1.471, 1.477}, {0.779, 0.784}}, {{0.009, 0.009}, {1.330, 1.331}},
         {{0.012, 0.012}, {1.326, 1.327}}}};
    return rows;
}

// 3D map, autonomous system at the fixed point.
inline const std::vector<SpectraRow>& henon_autonomous_rows() {
    static const std::vector<SpectraRow> rows{
        {"50", {{1.473, 1.474}, {0.781, 0.782}}, {{1e-16, 1e-16}, {1.328, 1.344}},
         {{1e-16, 1e-16}, {1.320, 1.337}}},
        {"100", {{1.473, 1.474}, {0.781, 0.782}}, {{1e-16, 1e-16}, {1.328, 1.341}},
         {{1e-16, 1e-16}, {1.321, 1.334}}},
        {"1000", {{1.473, 1.474}, {0.781, 0.782}}, {{1e-16, 1e-16}, {1.335, 1.336}},
         {{1e-15, 1e-15}, {1.328, 1.328}}},
        {"2000", {{1.473, 1.474}, {0.781, 0.782}}, {{1e-16, 1e-16}, {1.335, 1.336}},
         {{1e-15, 1e-15}, {1.328, 1.328}}}};
    return rows;
}

// 3D map, multi-humped orbits with center parts of length M.
inline const std::vector<SpectraRow>& henon_multihump_rows() {
    static const std::vector<SpectraRow> rows{
        {"50", {{1.4992, 1.4994}, {0.8298, 0.8302}, {0.7230, 0.7234}},
         {{0.353, 0.353}, {1.135, 1.135}, {1.260, 1.260}},
         {{0.480, 0.480}, {1.248, 1.248}, {1.264, 1.264}}},
        {"100", {{1.4868, 1.4870}, {0.8077, 0.8079}, {0.7492, 0.7494}},
         {{0.177, 0.177}, {1.229, 1.229}, {1.300, 1.300}},
         {{0.239, 0.239}, {1.295, 1.295}, {1.296, 1.296}}},
        {"200", {{1.4775, 1.4827}, {0.7935, 0.7966}, {0.7634, 0.7662}},
         {{0.088, 0.088}, {1.281, 1.281}, {1.318, 1.318}},
         {{0.120, 0.120}, {1.312, 1.312}, {1.313, 1.313}}},
        {"400", {{1.4741, 1.4791}, {0.7733, 0.7884}},
         {{0.044, 0.044}, {1.311, 1.314}},
         {{0.060, 0.060}, {1.320, 1.321}}}};
    return rows;
}

// h-step Lorenz map along an attractor orbit.
inline const std::vector<SpectraRow>& lorenz_rows() {
    static const std::vector<SpectraRow> rows{
        {"0.05", {{1.0445, 1.0478}, {0.9995, 1.0005}, {0.4821, 0.4833}},
         {{0.2039, 0.2039}, {0.3803, 0.3803}, {0.4234, 0.4234}},
         {{0.0689, 0.0689}, {0.3604, 0.3604}, {0.4188, 0.4188}}},
        {"0.1", {{1.0928, 1.0971}, {0.9995, 1.0007}, {0.2325, 0.2332}},
         {{0.3925, 0.3925}, {0.7282, 0.7282}, {0.8268, 0.8268}},
         {{0.1356, 0.1356}, {0.7021, 0.7021}, {0.8197, 0.8197}}},
        {"0.2", {{1.1956, 1.2004}, {0.9994, 1.0006}, {0.0542, 0.0544}},
         {{0.6552, 0.6552}, {0.7334, 0.7334}, {0.9727, 0.9727}},
         {{0.2475, 0.2475}, {0.7934, 0.7934}, {0.9752, 0.9752}}}};
    return rows;
}

// Mean angle between successive Lorenz iterates, h in {0.05, 0.1, 0.2}.
inline const std::array<double, 3>& lorenz_angle_on_average() {
    static const std::array<double, 3> v{0.4227, 0.8322, 1.0993};
    return v;
}

// Normalized continuous-time values, h in {0.025, 0.05, 0.1, 0.2}.
inline const std::array<double, 4>& lorenz_theta1_cont() {
    static const std::array<double, 4> v{8.4798, 8.4672, 8.2896, 4.8752};
    return v;
}
inline const std::array<double, 4>& lorenz_theta2_cont() {
    static const std::array<double, 4> v{8.3816, 8.3753, 8.2209, 4.8941};
    return v;
}

// Closed-form limits of the autonomous 3D map spectra.
constexpr double henon_sigma1_limit = 1.33566342;
constexpr double henon_sigma2_limit = 1.32818438;

}  // namespace angular::reference
