#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <iomanip>

#include "angular/selftest.hpp"
#include "json.hpp"

#ifndef ANGULAR_CLI_PATH
#define ANGULAR_CLI_PATH "angular-cli"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output_file_content;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunResult run_cli(const std::string& args, const std::string& out_file = "") {
    std::string cmd = std::string(ANGULAR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    if (!out_file.empty()) r.output_file_content = slurp(out_file);
    return r;
}

}  // namespace

TEST_CASE("analyze emits a valid record with the expected spectra") {
    std::string out = "/tmp/angular_cli_rot.json";
    RunResult r = run_cli("analyze --system rotation3d --phi 0.7 --s 1 2 --N 100 -o " + out, out);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.output_file_content);
    CHECK(j["config"]["system"] == "rotation3d");
    CHECK(j["config"]["N"] == 100);
    auto s1 = j["sigma"]["1"];
    REQUIRE(s1.size() == 2);
    CHECK(std::abs(s1[0][0].get<double>()) < 1e-10);
    CHECK(std::abs(s1[1][0].get<double>() - 0.7) < 1e-10);
    auto s2 = j["sigma"]["2"];
    REQUIRE(s2.size() == 2);
    CHECK(std::abs(s2[1][1].get<double>() - 0.7) < 1e-10);
    auto dich = j["dichotomy"]["intervals"];
    REQUIRE(dich.size() == 2);
    CHECK(std::abs(dich[0][0].get<double>() - 2.0) < 1e-6);
    std::remove(out.c_str());
}

TEST_CASE("two identical runs produce byte-identical records") {
    std::string out1 = "/tmp/angular_cli_d1.json", out2 = "/tmp/angular_cli_d2.json";
    std::string args = "analyze --system henon-autonomous --s 1 2 --N 150 --threads 2 -o ";
    RunResult r1 = run_cli(args + out1, out1);
    RunResult r2 = run_cli(args + out2, out2);
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    CHECK(r1.output_file_content == r2.output_file_content);
    CHECK(!r1.output_file_content.empty());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("the config echo reruns the experiment exactly") {
    std::string out1 = "/tmp/angular_cli_e1.json", out2 = "/tmp/angular_cli_e2.json";
    RunResult r1 = run_cli("analyze --system rotation3d --phi 0.31 --s 1 --N 64 -o " + out1, out1);
    REQUIRE(r1.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r1.output_file_content);
    auto c = j["config"];
    std::ostringstream args;
    args << "analyze --system " << c["system"].get<std::string>();
    args << " --N " << c["N"].get<long>() << " --buffer " << c["buffer"].get<long>();
    args << " --window " << c["window"].get<long>() << " --stride " << c["stride"].get<long>();
    args << " --starts " << c["starts"].get<int>();
    args << " --phi " << std::setprecision(17) << c["phi"].get<double>();
    args << " --s";
    for (auto& s : c["s"]) args << " " << s.get<int>();
    args << " -o " << out2;
    RunResult r2 = run_cli(args.str(), out2);
    REQUIRE(r2.exit_code == 0);
    CHECK(r1.output_file_content == r2.output_file_content);
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("analyze with a union range reports both spectra") {
    std::string out = "/tmp/angular_cli_union.json";
    RunResult r = run_cli(
        "analyze --system rotation3d --phi 0.5 --s 1 --N 50 --union-upper 120 -o " + out, out);
    REQUIRE(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.output_file_content);
    REQUIRE(j.contains("sigma_union"));
    auto u = j["sigma_union"]["1"];
    REQUIRE(u.size() == 2);
    CHECK(std::abs(u[1][0].get<double>() - 0.5) < 1e-9);
    std::remove(out.c_str());
}

TEST_CASE("exit codes") {
    CHECK(run_cli("analyze --no-such-flag 1").exit_code == 2);
    CHECK(run_cli("reproduce nope").exit_code == 2);
    CHECK(run_cli("validate").exit_code == 0);
    // numeric failure: analysis window larger than the computed orbit
    CHECK(run_cli("analyze --system henon-homoclinic --half-length 200 --N 2000").exit_code == 3);
}

TEST_CASE("orbit solve and import round trip") {
    std::string orbit = "/tmp/angular_cli_orbit.csv";
    RunResult r = run_cli("orbit solve --system henon-homoclinic --half-length 300 -o " + orbit, orbit);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output_file_content.rfind("n,x1,x2,x3\n", 0) == 0);
    CHECK(run_cli("orbit import --file " + orbit + " --map henon").exit_code == 0);
    // analyzing the imported orbit works end to end
    std::string out = "/tmp/angular_cli_orbitrec.json";
    RunResult r2 = run_cli("analyze --system orbit-file --orbit-file " + orbit +
                               " --map henon --s 1 --N 100 --buffer 100 -o " + out,
                           out);
    REQUIRE(r2.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r2.output_file_content);
    CHECK(j["dichotomy"]["intervals"].size() == 2);
    std::remove(orbit.c_str());
    std::remove(out.c_str());
}

TEST_CASE("sweep emits resonant and non-resonant cells") {
    std::string out = "/tmp/angular_cli_sweep.csv";
    RunResult r = run_cli("sweep --rho-count 3 --phi-count 3 --rationals 1/4 -o " + out, out);
    REQUIRE(r.exit_code == 0);
    std::istringstream is(r.output_file_content);
    std::string line;
    std::getline(is, line);
    CHECK(line == "rho,phi,case,lo,hi");
    int rows = 0;
    bool saw_resonant = false, saw_no_turnover = false;
    while (std::getline(is, line)) {
        ++rows;
        if (line.find("interval-resonant") != std::string::npos) saw_resonant = true;
        if (line.find("point-no-turnover") != std::string::npos) saw_no_turnover = true;
    }
    CHECK(rows == 12);
    CHECK(saw_resonant);
    CHECK(saw_no_turnover);
    std::remove(out.c_str());
}

TEST_CASE("a mutated psi fails the property suite") {
    // The validate verb runs the same suites; here the hook is exercised
    // directly through the library to confirm the suite bites.
    // (Kept in the CLI test binary because it guards the validate verb.)
    angular::selftest::Hooks hooks;
    hooks.psi = [](double rho, double t) { return angular::psi(rho, t) + 1e-9; };
    auto results = angular::selftest::run_property_suites(hooks);
    bool psi_failed = false;
    for (auto& r : results)
        if (r.name == "psi-identities" && !r.ok) psi_failed = true;
    CHECK(psi_failed);
    CHECK_FALSE(angular::selftest::all_passed(results));
}
