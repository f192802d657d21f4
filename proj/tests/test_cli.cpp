#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "unirigid/cli.hpp"

using namespace unirigid;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scenario(const char* name) { return std::string(UNIRIGID_SCENARIO_DIR) + "/" + name + ".json"; }

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

double field(const std::string& text, const std::string& key) {
    const auto at = text.find(key + "=");
    return at == std::string::npos ? -1.0 : std::stod(text.substr(at + key.size() + 1));
}

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / ("unirigid_test_cli_" + std::to_string(::getpid()) + name);
}

}  // namespace

TEST(Cli, NoCommandPrintsUsage) {
    const Outcome r = cli({});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_TRUE(contains(r.err, "simulate"));
    EXPECT_EQ(cli({"frobnicate"}).code, kExitInput);
}

TEST(Simulate, MissingScenario) {
    const Outcome r = cli({"simulate", "--dt", "1e-3"});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_TRUE(contains(r.err, "--scenario"));
    EXPECT_TRUE(contains(r.err, "Usage"));
}

TEST(Simulate, HelpExitsZero) {
    const Outcome r = cli({"simulate", "--help"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(contains(r.out, "--formulation"));
}

TEST(Simulate, BadFormulationIsInputError) {
    const Outcome r = cli({"simulate", "--scenario", scenario("euler-top"), "--formulation", "hamilton"});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_TRUE(contains(r.err, "formulation"));
}

TEST(Simulate, InvalidScenarioNamesTheField) {
    const auto path = temp_file("bad.json");
    std::ofstream(path) << R"({"inertia": {"mass": 1, "principal": [1, 1, 3]}})";
    const Outcome r = cli({"simulate", "--scenario", path.string()});
    std::filesystem::remove(path);
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_TRUE(contains(r.err, "inertia triangle inequality")) << r.err;
}

TEST(Simulate, FreeSphereConservesEnergy) {
    for (const char* f : {"newton-euler", "kirchhoff", "lagrange", "gauss"}) {
        const std::string integrator = std::string(f) == "lagrange" ? "rk4" : "lie-rk4";
        const Outcome r = cli({"simulate", "--scenario", scenario("free-sphere"), "--formulation", f, "--integrator",
                           integrator, "--dt", "1e-3", "--t-end", "1"});
        ASSERT_EQ(r.code, kExitOk) << f << r.err;
        EXPECT_TRUE(contains(r.err, "final t=1 ")) << r.err;
        const double drift = field(r.err, "energy_drift");
        EXPECT_GE(drift, 0.0) << r.err;
        EXPECT_LE(drift, 1e-12) << f;
    }
}

TEST(Simulate, WritesCsvFile) {
    const auto path = temp_file("out.csv");
    const Outcome r = cli({"simulate", "--scenario", scenario("euler-top"), "--dt", "0.01", "--t-end", "0.1",
                       "--output", path.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_TRUE(contains(r.out, "samples=11"));
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "t,qw,qx,qy,qz,x,y,z,wx,wy,wz,vx,vy,vz,energy,Lx,Ly,Lz");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) ++rows;
    EXPECT_EQ(rows, 11u);
    std::filesystem::remove(path);
}

TEST(Simulate, OutputIsReproducible) {
    const std::vector<std::string> args = {"simulate", "--scenario", scenario("heavy-top-generic"), "--t-end", "0.5"};
    const Outcome a = cli(args);
    const Outcome b = cli(args);
    ASSERT_EQ(a.code, kExitOk);
    EXPECT_EQ(a.out, b.out);
}

TEST(Simulate, GimbalLockExitsTwo) {
    const Outcome r = cli({"simulate", "--scenario", scenario("gimbal-crossing"), "--formulation", "lagrange"});
    EXPECT_EQ(r.code, kExitAborted);
    EXPECT_TRUE(contains(r.err, "gimbal lock at t=")) << r.err;
    // The samples recorded before the abort are still written.
    EXPECT_TRUE(contains(r.out, "t,qw"));
}

TEST(Compare, NeedsTwoFormulations) {
    const Outcome r = cli({"compare", "--scenario", scenario("euler-top"), "--dt", "1e-3", "--t-end", "1",
                       "--formulation", "kirchhoff"});
    EXPECT_EQ(r.code, kExitInput);
    EXPECT_TRUE(contains(r.err, "need at least two"));
}

TEST(Compare, EulerTopAgrees) {
    const Outcome r = cli({"compare", "--scenario", scenario("euler-top"), "--dt", "1e-3", "--t-end", "10",
                       "--formulation", "newton-euler", "--formulation", "kirchhoff", "--formulation", "lagrange"});
    EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
    EXPECT_TRUE(contains(r.out, "gap newton-euler vs kirchhoff"));
    EXPECT_TRUE(contains(r.out, "gap kirchhoff vs lagrange"));
    EXPECT_TRUE(contains(r.out, "PASS"));
}

TEST(Compare, TightToleranceFails) {
    const Outcome r = cli({"compare", "--scenario", scenario("euler-top"), "--dt", "1e-2", "--t-end", "2",
                       "--formulation", "kirchhoff", "--formulation", "lagrange", "--tol", "1e-14"});
    EXPECT_EQ(r.code, kExitGap);
    EXPECT_TRUE(contains(r.out, "FAIL"));
}

TEST(Compare, ChildFailureExitsTwo) {
    const Outcome r = cli({"compare", "--scenario", scenario("gimbal-crossing"), "--dt", "1e-3", "--t-end", "1",
                       "--formulation", "kirchhoff", "--formulation", "lagrange"});
    EXPECT_EQ(r.code, kExitAborted);
    EXPECT_TRUE(contains(r.err, "gimbal lock at t="));
}

TEST(Validate, AllSuitesPass) {
    const Outcome r = cli({"validate"});
    EXPECT_EQ(r.code, kExitOk) << r.out;
    for (const char* s : {"se3-structure-constants", "gauss-minimality", "euler-roundtrip", "axisymmetric-analytic",
                          "steady-precession"})
        EXPECT_TRUE(contains(r.out, s)) << s;
    EXPECT_FALSE(contains(r.out, "FAIL"));
}

TEST(Validate, SingleSuite) {
    const Outcome r = cli({"validate", "--suite", "gauss-minimality"});
    EXPECT_EQ(r.code, kExitOk);
    EXPECT_TRUE(contains(r.out, "gauss-minimality"));
    EXPECT_FALSE(contains(r.out, "se3-structure-constants"));
    EXPECT_FALSE(contains(r.out, "steady-precession"));
}

TEST(Validate, UnknownSuite) {
    EXPECT_EQ(cli({"validate", "--suite", "nope"}).code, kExitInput);
}
