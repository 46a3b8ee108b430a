// Command-line front end: run built-in experiments, reproduce the reference
// tables and figure data, analyze user-supplied orbits, and emit CSV/JSON.
// Angles are always radians; rates are multiplicative (not logs).
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure,
// 4 validation-suite failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "angular/models.hpp"
#include "angular/normalform.hpp"
#include "angular/parallel.hpp"
#include "angular/selftest.hpp"
#include "angular/reference_data.hpp"
#include "angular/spectra.hpp"

using namespace angular;

namespace {

constexpr const char* kVersion = "0.1.0";

// User-input problems exit with 2, numeric failures from the library with 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- experiment configuration --------------------------------------------------

struct ExperimentConfig {
    std::string system = "rotation3d";
    std::vector<int> dims{1, 2};
    long n_steps = 1000;
    long union_upper = 0;  // 0: plain finite-time spectrum
    long buffer = 500;
    long window = 0;  // 0: auto
    long stride = 0;
    int starts = 64;
    int threads = 0;  // 0: all cores
    bool timing = false;
    // model parameters
    double phi = 0.7;
    double phi0 = 0.2, phi1 = 1.1;
    double omega = 0.2;
    double h = 0.05;
    long hump_length = 50;
    long total = 2000;
    long half_length = 0;  // 0: derived from N and buffer
    std::string orbit_file;
    std::string map_name;

    std::string to_json() const {
        std::ostringstream os;
        os << "{";
        os << "\"system\":\"" << system << "\",";
        os << "\"s\":[";
        for (size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
        os << "],";
        os << "\"N\":" << n_steps << ",";
        os << "\"union_upper\":" << union_upper << ",";
        os << "\"buffer\":" << buffer << ",";
        os << "\"window\":" << window << ",";
        os << "\"stride\":" << stride << ",";
        os << "\"starts\":" << starts << ",";
        os << "\"threads\":" << threads << ",";
        os << "\"phi\":" << fmt(phi) << ",";
        os << "\"phi0\":" << fmt(phi0) << ",";
        os << "\"phi1\":" << fmt(phi1) << ",";
        os << "\"omega\":" << fmt(omega) << ",";
        os << "\"h\":" << fmt(h) << ",";
        os << "\"hump_length\":" << hump_length << ",";
        os << "\"total\":" << total << ",";
        os << "\"half_length\":" << half_length << ",";
        os << "\"orbit_file\":\"" << orbit_file << "\",";
        os << "\"map\":\"" << map_name << "\"";
        os << "}";
        return os.str();
    }
};

struct PreparedSystem {
    SystemSpec sys;
    long n0 = 0;          // analysis window start
    std::vector<Vec> orbit;  // when orbit-backed (for angle-on-average)
};

PreparedSystem prepare_system(const ExperimentConfig& cfg) {
    PreparedSystem p;
    if (cfg.system == "rotation3d") {
        p.sys = make_rotation_example(cfg.phi);
        p.n0 = cfg.buffer;
    } else if (cfg.system == "henon-autonomous") {
        p.sys = henon_autonomous_variational({cfg.omega});
        p.n0 = cfg.buffer;
    } else if (cfg.system == "henon-homoclinic") {
        HenonConfig hc;
        hc.omega = cfg.omega;
        long half = cfg.half_length > 0 ? cfg.half_length
                                        : std::max<long>(1000, cfg.n_steps / 2 + cfg.buffer);
        OrbitSegment orbit = henon_homoclinic(hc, half);
        p.orbit = orbit.points;
        p.sys = henon_variational(hc, orbit, false);
        p.n0 = half - cfg.n_steps / 2;
        if (p.n0 < 0) throw OutOfRange("analysis window exceeds the computed orbit");
    } else if (cfg.system == "henon-multihump") {
        HenonConfig hc;
        hc.omega = cfg.omega;
        OrbitSegment primary = henon_homoclinic(hc, 1000);
        OrbitSegment mh = henon_multihump(hc, primary, cfg.hump_length, cfg.total);
        p.orbit = mh.points;
        p.sys = henon_variational(hc, mh, true);
        p.n0 = cfg.total;
    } else if (cfg.system == "lorenz") {
        LorenzConfig lc;
        lc.h = cfg.h;
        LorenzSystem lor = lorenz_step_map(lc, cfg.n_steps + 2 * cfg.buffer);
        p.orbit = lor.orbit;
        p.sys = lor.variational;
        p.n0 = cfg.buffer;
    } else if (cfg.system == "switching-e1") {
        p.sys = make_switching_e1(cfg.phi0, cfg.phi1);
        p.n0 = 0;
    } else if (cfg.system == "switching-e2") {
        p.sys = make_switching_e2();
        p.n0 = 0;
    } else if (cfg.system == "orbit-file") {
        if (cfg.orbit_file.empty()) throw ConfigError("orbit-file system requires --orbit-file");
        std::vector<Vec> orbit = read_orbit_csv(cfg.orbit_file);
        p.orbit = orbit;
        if (cfg.map_name == "henon") {
            HenonConfig hc;
            hc.omega = cfg.omega;
            OrbitSegment seg;
            seg.points = orbit;
            p.sys = henon_variational(hc, seg, false);
        } else if (cfg.map_name == "lorenz") {
            LorenzConfig lc;
            lc.h = cfg.h;
            auto jacs = std::make_shared<std::vector<Mat>>();
            for (size_t n = 0; n + 1 < orbit.size(); ++n)
                jacs->push_back(lorenz_step_jacobian(lc, orbit[n]));
            p.sys = SystemSpec{3, [jacs](long n) { return (*jacs)[static_cast<size_t>(n)]; },
                               "orbit-file", static_cast<long>(jacs->size())};
        } else {
            throw ConfigError("unknown --map (use henon or lorenz)");
        }
        long len = p.sys.horizon;
        p.n0 = std::max<long>(0, (len - cfg.n_steps) / 2);
    } else {
        throw ConfigError("unknown system '" + cfg.system + "'");
    }
    return p;
}

// --- result serialization -------------------------------------------------------

std::string spectrum_set_json(const AngularSpectrumSet& set) {
    std::ostringstream os;
    os << "[";
    bool first = true;
    for (const auto& e : set.elements()) {
        if (!first) os << ",";
        first = false;
        os << "[" << fmt(e.lo) << "," << fmt(e.hi) << "]";
    }
    os << "]";
    return os.str();
}

std::string result_json(const ExperimentConfig& cfg, const PipelineResult& res,
                        const std::map<int, AngularSpectrumSet>& unions, double aoa,
                        bool have_aoa, long timing_ms) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"tool\": \"angular-cli\",\n";
    os << "  \"version\": \"" << kVersion << "\",\n";
    os << "  \"config\": " << cfg.to_json() << ",\n";
    os << "  \"dichotomy\": {\"intervals\": [";
    for (size_t k = 0; k < res.spectrum.intervals.size(); ++k) {
        const auto& iv = res.spectrum.intervals[k];
        os << (k ? "," : "") << "[" << fmt(iv.lo) << "," << fmt(iv.hi) << "]";
    }
    os << "], \"dims\": [";
    for (size_t k = 0; k < res.spectrum.intervals.size(); ++k)
        os << (k ? "," : "") << res.spectrum.intervals[k].dim;
    os << "], \"gap_points\": [";
    for (size_t k = 0; k < res.spectrum.gap_points.size(); ++k)
        os << (k ? "," : "") << fmt(res.spectrum.gap_points[k]);
    os << "]},\n";
    os << "  \"bundles\": {\"dimensions\": [";
    for (size_t k = 0; k < res.bundles.bundles.size(); ++k)
        os << (k ? "," : "") << res.bundles.bundles[k].space.dim_sub();
    os << "], \"at_time\": " << res.bundles.at_time
       << ", \"transversality\": " << fmt(res.bundles.transversality()) << "},\n";
    os << "  \"sigma\": {";
    bool first = true;
    for (const auto& [s, set] : res.sigma) {
        if (!first) os << ", ";
        first = false;
        os << "\"" << s << "\": " << spectrum_set_json(set);
    }
    os << "}";
    if (!unions.empty()) {
        os << ",\n  \"sigma_union\": {";
        first = true;
        for (const auto& [s, set] : unions) {
            if (!first) os << ", ";
            first = false;
            os << "\"" << s << "\": " << spectrum_set_json(set);
        }
        os << "}";
    }
    if (have_aoa) os << ",\n  \"angle_on_average\": " << fmt(aoa);
    if (timing_ms >= 0) os << ",\n  \"timing_ms\": " << timing_ms;
    os << "\n}\n";
    return os.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path);
    out << content;
}

int run_analyze(const ExperimentConfig& cfg, const std::string& out_path) {
    auto t0 = std::chrono::steady_clock::now();
    PreparedSystem prep = prepare_system(cfg);
    PipelineOptions po;
    po.n0 = prep.n0;
    po.n_steps = cfg.union_upper > 0 ? std::max(cfg.n_steps, cfg.union_upper) : cfg.n_steps;
    po.window = cfg.window;
    po.stride = cfg.stride;
    po.margin = cfg.buffer;
    po.right_extra = cfg.buffer;
    po.dims = cfg.dims;
    po.opt.grid_1d = cfg.starts;
    PipelineResult res = run_pipeline(prep.sys, po);
    if (cfg.union_upper > 0) {
        // The headline sigma is still the N-spectrum when a union is requested.
        for (int s : cfg.dims) res.sigma[s] = sigma_finite(res.fibers, s, cfg.n_steps, po.opt);
    }
    std::map<int, AngularSpectrumSet> unions;
    if (cfg.union_upper > 0)
        for (int s : cfg.dims)
            unions[s] = sigma_union(res.fibers, s, cfg.n_steps, cfg.union_upper, po.opt);
    double aoa = 0.0;
    bool have_aoa = !prep.orbit.empty() &&
                    static_cast<long>(prep.orbit.size()) > prep.n0 + cfg.n_steps;
    if (have_aoa) aoa = angle_on_average(prep.orbit, prep.n0, prep.n0 + cfg.n_steps);
    long ms = cfg.timing ? std::chrono::duration_cast<std::chrono::milliseconds>(
                               std::chrono::steady_clock::now() - t0)
                               .count()
                         : -1;
    write_output(out_path, result_json(cfg, res, unions, aoa, have_aoa, ms));
    return 0;
}

// --- reproduction tables ----------------------------------------------------------

// Sorted ascending positional comparison of interval unions.
double union_delta(std::vector<std::array<double, 2>> got, std::vector<std::array<double, 2>> ref) {
    auto by_lo = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
        return a[0] < b[0];
    };
    std::sort(got.begin(), got.end(), by_lo);
    std::sort(ref.begin(), ref.end(), by_lo);
    if (got.size() != ref.size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (size_t i = 0; i < got.size(); ++i)
        worst = std::max({worst, std::abs(got[i][0] - ref[i][0]), std::abs(got[i][1] - ref[i][1])});
    return worst;
}

std::vector<std::array<double, 2>> to_pairs(const SpectralIntervals& spec) {
    std::vector<std::array<double, 2>> out;
    for (const auto& iv : spec.intervals) out.push_back({iv.lo, iv.hi});
    return out;
}

std::vector<std::array<double, 2>> to_pairs(const AngularSpectrumSet& set) {
    std::vector<std::array<double, 2>> out;
    for (const auto& e : set.elements()) out.push_back({e.lo, e.hi});
    return out;
}

void emit_comparison_rows(std::ostringstream& os, const std::string& key, const std::string& row_id,
                          const std::string& quantity,
                          const std::vector<std::array<double, 2>>& got,
                          const std::vector<std::array<double, 2>>& ref) {
    double delta = union_delta(got, ref);
    for (size_t i = 0; i < std::max(got.size(), ref.size()); ++i) {
        os << key << "=" << row_id << "," << quantity << "," << i << ",";
        if (i < got.size()) os << fmt(got[i][0]) << "," << fmt(got[i][1]);
        else os << ",";
        os << ",";
        if (i < ref.size()) os << fmt(ref[i][0]) << "," << fmt(ref[i][1]);
        else os << ",";
        os << "," << fmt(delta) << "\n";
    }
}

int run_reproduce(const std::string& table, const std::string& out_path, int threads) {
    global_thread_count() = threads > 0 ? threads : global_thread_count();
    std::ostringstream os;
    auto emit_header = [&] { os << "row,quantity,element,lo,hi,ref_lo,ref_hi,delta\n"; };
    if (table == "t2" || table == "t3") {
        emit_header();
        const auto& ref = table == "t2" ? reference::henon_homoclinic_rows()
                                        : reference::henon_autonomous_rows();
        HenonConfig hc;
        for (const reference::SpectraRow& row : ref) {
            long n = std::stol(row.id);
            PreparedSystem prep;
            ExperimentConfig cfg;
            cfg.system = table == "t2" ? "henon-homoclinic" : "henon-autonomous";
            cfg.n_steps = n;
            prep = prepare_system(cfg);
            PipelineOptions po;
            po.n0 = prep.n0;
            po.n_steps = n;
            PipelineResult res = run_pipeline(prep.sys, po);
            emit_comparison_rows(os, "N", row.id, "dichotomy", to_pairs(res.spectrum), row.dichotomy);
            emit_comparison_rows(os, "N", row.id, "sigma1", to_pairs(res.sigma[1]), row.sigma1);
            emit_comparison_rows(os, "N", row.id, "sigma2", to_pairs(res.sigma[2]), row.sigma2);
        }
    } else if (table == "t4") {
        emit_header();
        HenonConfig hc;
        OrbitSegment primary = henon_homoclinic(hc, 1000);
        for (const reference::SpectraRow& row : reference::henon_multihump_rows()) {
            long m = std::stol(row.id);
            OrbitSegment mh = henon_multihump(hc, primary, m, 2000);
            SystemSpec sys = henon_variational(hc, mh, true);
            PipelineOptions po;
            po.n0 = 2000;
            po.n_steps = 2001;
            PipelineResult res = run_pipeline(sys, po);
            emit_comparison_rows(os, "M", row.id, "dichotomy", to_pairs(res.spectrum), row.dichotomy);
            emit_comparison_rows(os, "M", row.id, "sigma1", to_pairs(res.sigma[1]), row.sigma1);
            emit_comparison_rows(os, "M", row.id, "sigma2", to_pairs(res.sigma[2]), row.sigma2);
        }
    } else if (table == "t5" || table == "t6") {
        emit_header();
        const auto& aoa_ref = reference::lorenz_angle_on_average();
        int idx = 0;
        for (const reference::SpectraRow& row : reference::lorenz_rows()) {
            double h = std::stod(row.id);
            LorenzConfig lc;
            lc.h = h;
            LorenzSystem lor = lorenz_step_map(lc, 11000);
            if (table == "t5") {
                PipelineOptions po;
                po.n0 = 500;
                po.n_steps = 10001;
                PipelineResult res = run_pipeline(lor.variational, po);
                emit_comparison_rows(os, "h", row.id, "dichotomy", to_pairs(res.spectrum), row.dichotomy);
                emit_comparison_rows(os, "h", row.id, "sigma1", to_pairs(res.sigma[1]), row.sigma1);
                emit_comparison_rows(os, "h", row.id, "sigma2", to_pairs(res.sigma[2]), row.sigma2);
            } else {
                double aoa = angle_on_average(lor.orbit, 500, 10501);
                emit_comparison_rows(os, "h", row.id, "angle_on_average", {{aoa, aoa}},
                                     {{aoa_ref[idx], aoa_ref[idx]}});
            }
            ++idx;
        }
    } else if (table == "t7") {
        emit_header();
        const auto& ref1 = reference::lorenz_theta1_cont();
        const auto& ref2 = reference::lorenz_theta2_cont();
        static const double hs[4] = {0.025, 0.05, 0.1, 0.2};
        for (int i = 0; i < 4; ++i) {
            LorenzConfig lc;
            lc.h = hs[i];
            long nbuf = std::lround(25.0 / hs[i]);
            long nsteps = std::lround(500.0 / hs[i]);
            LorenzSystem lor = lorenz_step_map(lc, nsteps + 2 * nbuf);
            SpectrumOptions so;
            so.n0 = nbuf;
            so.n_steps = nsteps;
            so.margin = nbuf;
            SpectralIntervals spec = approx_spectrum(lor.variational, so);
            BundleOptions bo;
            bo.n0 = nbuf;
            bo.n_steps = nsteps;
            bo.right_extra = nbuf;
            FiberSequences fib = fiber_sequences(lor.variational, spec, bo);
            double t1 = continuous_normalized(fib, 1, hs[i], 500.0);
            double t2 = continuous_normalized(fib, 2, hs[i], 500.0);
            emit_comparison_rows(os, "h", fmt(hs[i]), "theta1_cont", {{t1, t1}}, {{ref1[i], ref1[i]}});
            emit_comparison_rows(os, "h", fmt(hs[i]), "theta2_cont", {{t2, t2}}, {{ref2[i], ref2[i]}});
        }
    } else if (table == "fig2") {
        os << "rho,phi,case,lo,hi\n";
        // Irrational-like grid plus exact resonant columns.
        std::vector<double> rho_grid;
        for (int i = 1; i <= 40; ++i) rho_grid.push_back(i / 40.0);
        std::vector<Angle> phi_grid;
        const double golden = 0.6180339887498949;
        for (int j = 0; j < 40; ++j)
            phi_grid.push_back(Angle::radians(M_PI / 2 * (j + 1 - golden) / 40.0));
        for (long q : {3L, 4L, 5L, 6L, 8L}) phi_grid.push_back(Angle::pi_fraction(1, q));
        std::vector<SweepCell> cells = sweep_sigma1(rho_grid, phi_grid);
        for (const auto& c : cells)
            os << fmt(c.rho) << "," << fmt(c.phi.value) << "," << to_string(c.case_label) << ","
               << fmt(c.lo) << "," << fmt(c.hi) << "\n";
    } else if (table == "fig3") {
        os << "case,gamma_w,rho,lo,hi\n";
        struct Case {
            const char* name;
            Angle phi;
        };
        std::vector<Case> cases{{"non-resonant", Angle::radians(1.25)},
                                {"resonant", Angle::pi_fraction(2, 5)}};
        std::vector<std::array<double, 3>> rows(21 * 20 * 2);
        for (const Case& cse : cases) {
            for (int gi = 1; gi <= 21; ++gi) {
                double gw = gi * (M_PI / 2) / 21.0;
                double wlen = std::cos(gw) / std::sqrt(1.0 + std::cos(gw) * std::cos(gw));
                for (int ri = 1; ri <= 20; ++ri) {
                    double rho = ri / 20.0;
                    ClosedFormResult r =
                        sigma2_mixed_from_w({rho, cse.phi}, {wlen, 0.0}, cse.phi);
                    os << cse.name << "," << fmt(gw) << "," << fmt(rho) << ","
                       << fmt(r.spectrum.elements().back().lo) << ","
                       << fmt(r.spectrum.elements().back().hi) << "\n";
                }
            }
        }
    } else {
        throw ConfigError("unknown reproduction id '" + table + "'");
    }
    write_output(out_path, os.str());
    return 0;
}

int run_validate() {
    auto results = selftest::run_property_suites();
    bool ok = selftest::all_passed(results);
    for (const auto& r : results)
        std::printf("[%s] %-28s %s\n", r.ok ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::printf("%s\n", ok ? "all property suites passed" : "property suite failures detected");
    return ok ? 0 : 4;
}

int run_sweep(double rho_min, double rho_max, int rho_count, int phi_count,
              const std::string& rationals, const std::string& out_path) {
    std::vector<double> rho_grid;
    for (int i = 0; i < rho_count; ++i)
        rho_grid.push_back(rho_min + (rho_max - rho_min) * i / std::max(1, rho_count - 1));
    std::vector<Angle> phi_grid;
    const double golden = 0.6180339887498949;
    for (int j = 0; j < phi_count; ++j)
        phi_grid.push_back(Angle::radians(M_PI / 2 * (j + 1 - golden) / phi_count));
    if (!rationals.empty()) {
        std::istringstream ss(rationals);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto slash = tok.find('/');
            if (slash == std::string::npos) throw ConfigError("rationals must look like p/q");
            phi_grid.push_back(Angle::pi_fraction(std::stol(tok.substr(0, slash)),
                                                  std::stol(tok.substr(slash + 1))));
        }
    }
    std::vector<SweepCell> cells(rho_grid.size() * phi_grid.size());
    parallel_for(static_cast<long>(rho_grid.size()), [&](long i) {
        for (size_t j = 0; j < phi_grid.size(); ++j) {
            ClosedFormResult r = sigma1_closed_form({rho_grid[static_cast<size_t>(i)], phi_grid[j]});
            cells[static_cast<size_t>(i) * phi_grid.size() + j] = {
                rho_grid[static_cast<size_t>(i)], phi_grid[j], r.case_label, r.spectrum.min(),
                r.spectrum.max()};
        }
    });
    std::ostringstream os;
    os << "rho,phi,case,lo,hi\n";
    for (const auto& c : cells)
        os << fmt(c.rho) << "," << fmt(c.phi.value) << "," << to_string(c.case_label) << ","
           << fmt(c.lo) << "," << fmt(c.hi) << "\n";
    write_output(out_path, os.str());
    return 0;
}

int run_orbit_solve(const std::string& system, long half_length, long hump_length, long total,
                    double h, long length, const std::string& out_path) {
    std::vector<Vec> points;
    if (system == "henon-homoclinic") {
        points = henon_homoclinic({}, half_length).points;
    } else if (system == "henon-multihump") {
        OrbitSegment primary = henon_homoclinic({}, 1000);
        points = henon_multihump({}, primary, hump_length, total).points;
    } else if (system == "lorenz") {
        LorenzConfig lc;
        lc.h = h;
        points = lorenz_step_map(lc, length).orbit;
    } else {
        throw ConfigError("unknown orbit system '" + system + "'");
    }
    if (out_path.empty()) throw ConfigError("orbit solve requires -o <file>");
    write_orbit_csv(out_path, points);
    std::printf("wrote %zu orbit points to %s\n", points.size(), out_path.c_str());
    return 0;
}

int run_orbit_import(const std::string& file, const std::string& map_name, double h) {
    std::vector<Vec> points = read_orbit_csv(file);
    double residual = 0.0;
    if (map_name == "henon") {
        for (size_t n = 0; n + 1 < points.size(); ++n) {
            Vec f = henon_map({}, points[n]);
            for (int i = 0; i < 3; ++i)
                residual = std::max(residual, std::abs(points[n + 1][static_cast<size_t>(i)] -
                                                       f[static_cast<size_t>(i)]));
        }
    } else if (map_name == "lorenz") {
        LorenzConfig lc;
        lc.h = h;
        size_t step = std::max<size_t>(1, points.size() / 32);
        for (size_t n = 0; n + 1 < points.size(); n += step) {
            Vec f = lorenz_step(lc, points[n]);
            for (int i = 0; i < 3; ++i)
                residual = std::max(residual, std::abs(points[n + 1][static_cast<size_t>(i)] -
                                                       f[static_cast<size_t>(i)]));
        }
    } else {
        throw ConfigError("unknown --map (use henon or lorenz)");
    }
    std::printf("%zu points, orbit residual %.3e under the %s map\n", points.size(), residual,
                map_name.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"angular spectra of linear discrete-time systems"};
    app.require_subcommand(1);
    // `--h` is the h-step flag, so help is long-form only.
    app.set_help_flag("--help", "print help");

    ExperimentConfig cfg;
    std::string out_path;

    auto* analyze = app.add_subcommand("analyze", "run the spectrum pipeline on a system");
    analyze->set_help_flag("--help", "print help");
    analyze->add_option("--system", cfg.system,
                        "rotation3d|henon-autonomous|henon-homoclinic|henon-multihump|lorenz|"
                        "switching-e1|switching-e2|orbit-file");
    analyze->add_option("--s", cfg.dims, "spectrum dimensions (e.g. --s 1 2)");
    analyze->add_option("--N", cfg.n_steps, "finite-time horizon");
    analyze->add_option("--union-upper", cfg.union_upper, "upper index M of the union spectrum");
    analyze->add_option("--buffer", cfg.buffer, "buffer length trimmed on both sides");
    analyze->add_option("--window", cfg.window, "dichotomy window (0 = auto)");
    analyze->add_option("--stride", cfg.stride, "dichotomy stride (0 = auto)");
    analyze->add_option("--starts", cfg.starts, "optimizer seed grid per circle");
    analyze->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    analyze->add_flag("--timing", cfg.timing, "include timing_ms in the record");
    analyze->add_option("--phi", cfg.phi, "rotation angle");
    analyze->add_option("--phi0", cfg.phi0, "switching angle 0");
    analyze->add_option("--phi1", cfg.phi1, "switching angle 1");
    analyze->add_option("--omega", cfg.omega, "3D map rotation parameter");
    analyze->add_option("--h", cfg.h, "step size of the h-step map");
    analyze->add_option("--hump-length", cfg.hump_length, "center-part length M");
    analyze->add_option("--total", cfg.total, "multi-hump orbit length");
    analyze->add_option("--half-length", cfg.half_length, "homoclinic half length (0 = derive)");
    analyze->add_option("--orbit-file", cfg.orbit_file, "orbit CSV (n,x1,x2,x3)");
    analyze->add_option("--map", cfg.map_name, "map for --orbit-file (henon|lorenz)");
    analyze->add_option("-o,--output", out_path, "output JSON path (default stdout)");

    std::string table;
    int rep_threads = 0;
    auto* reproduce = app.add_subcommand("reproduce", "reproduce a reference table or figure data");
    reproduce->set_help_flag("--help", "print help");
    reproduce->add_option("table", table, "t2|t3|t4|t5|t6|t7|fig2|fig3")->required();
    reproduce->add_option("-o,--output", out_path, "output CSV path (default stdout)");
    reproduce->add_option("--threads", rep_threads, "worker threads");

    double rho_min = 0.05, rho_max = 1.0;
    int rho_count = 20, phi_count = 20;
    std::string rationals;
    auto* sweep = app.add_subcommand("sweep", "closed-form first-spectrum parameter sweep");
    sweep->set_help_flag("--help", "print help");
    sweep->add_option("--rho-min", rho_min);
    sweep->add_option("--rho-max", rho_max);
    sweep->add_option("--rho-count", rho_count);
    sweep->add_option("--phi-count", phi_count);
    sweep->add_option("--rationals", rationals, "extra exact pi-fractions, e.g. 1/3,2/5");
    sweep->add_option("-o,--output", out_path, "output CSV path (default stdout)");

    auto* validate = app.add_subcommand("validate", "run the property suites");
    validate->set_help_flag("--help", "print help");

    auto* orbit = app.add_subcommand("orbit", "solve, import or export orbits");
    orbit->set_help_flag("--help", "print help");
    orbit->require_subcommand(1);
    std::string orbit_system = "henon-homoclinic", orbit_file, orbit_map = "henon";
    long half_length = 1000, hump_length = 50, total = 2000, length = 11000;
    double orbit_h = 0.05;
    auto* solve_cmd = orbit->add_subcommand("solve", "solve an orbit and export it as CSV");
    solve_cmd->add_option("--system", orbit_system, "henon-homoclinic|henon-multihump|lorenz");
    solve_cmd->add_option("--half-length", half_length);
    solve_cmd->add_option("--hump-length", hump_length);
    solve_cmd->add_option("--total", total);
    solve_cmd->add_option("--h", orbit_h);
    solve_cmd->add_option("--length", length);
    solve_cmd->add_option("-o,--output", out_path, "orbit CSV path")->required();
    auto* import_cmd = orbit->add_subcommand("import", "check an external orbit CSV against a map");
    import_cmd->add_option("--file", orbit_file)->required();
    import_cmd->add_option("--map", orbit_map, "henon|lorenz");
    import_cmd->add_option("--h", orbit_h);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) {
            global_thread_count() = cfg.threads > 0 ? cfg.threads : global_thread_count();
            return run_analyze(cfg, out_path);
        }
        if (*reproduce) return run_reproduce(table, out_path, rep_threads);
        if (*sweep) return run_sweep(rho_min, rho_max, rho_count, phi_count, rationals, out_path);
        if (*validate) return run_validate();
        if (*orbit) {
            if (*solve_cmd)
                return run_orbit_solve(orbit_system, half_length, hump_length, total, orbit_h,
                                       length, out_path);
            if (*import_cmd) return run_orbit_import(orbit_file, orbit_map, orbit_h);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const angular::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
