#include "unirigid/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "unirigid/builtin_scenarios.hpp"

namespace unirigid {

namespace {

constexpr std::uint64_t kSeed = 20240607;

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, format, a, b);
    return buf;
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
    Vec3 vec(double scale) { return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)}; }
    Vec6 vec6(double scale) {
        Vec6 v;
        v << vec(scale), vec(scale);
        return v;
    }

    Rotation rotation(double max_angle = 3.0) {
        Vec3 axis = vec(1.0);
        while (axis.norm() < 1e-3) {
            axis = vec(1.0);
        }
        return exp_so3(axis.normalized() * uniform(0.0, max_angle));
    }

    Pose pose() { return {rotation(), vec(2.0)}; }

    Pose euler_valid_pose() {
        const EulerAngles e{uniform(-3.0, 3.0), uniform(0.2, std::numbers::pi - 0.2), uniform(-3.0, 3.0)};
        return {euler_to_rotation(e), vec(2.0)};
    }

    SpatialInertia inertia() {
        const double l1 = uniform(0.5, 2.0);
        const double l2 = uniform(0.5, 2.0);
        const double l3 = uniform(std::abs(l1 - l2) + 0.05, l1 + l2 - 0.05);
        const Mat3 q = rotation().matrix();
        SpatialInertia si;
        si.mass = uniform(0.5, 2.0);
        si.c = vec(0.3);
        const Mat3 hc = hat(si.c);
        const Mat3 jg = q * Vec3(l1, l2, l3).asDiagonal() * q.transpose();
        si.j = jg + si.mass * hc.transpose() * hc;
        si.j = 0.5 * (si.j + si.j.transpose()).eval();
        return si;
    }

private:
    std::mt19937_64 rng_;
};

// c^k_ij of se(3) in the (rotation, translation) basis.
double se3_structure_constant(int k, int i, int j) {
    const auto eps = [](int a, int b, int c) -> double {
        if (a == b || b == c || a == c) return 0.0;
        return ((a + 1) % 3 == b) ? 1.0 : -1.0;
    };
    const bool ri = i < 3, rj = j < 3, rk = k < 3;
    if (ri && rj) return rk ? eps(i, j, k) : 0.0;
    if (ri && !rj) return rk ? 0.0 : eps(i, j - 3, k - 3);
    if (!ri && rj) return rk ? 0.0 : eps(i - 3, j, k - 3);
    return 0.0;
}

SuiteResult structure_constants() {
    Sampler s(kSeed);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const Pose p = s.pose();
        const HamelTensor body = hamel_coefficients(ChartId::BodyTwist, p);
        const HamelTensor spatial = hamel_coefficients(ChartId::SpatialTwist, p);
        for (int k = 0; k < 6; ++k)
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    const double c = se3_structure_constant(k, i, j);
                    worst = std::max(worst, std::abs(body[k][i][j] + c));
                    worst = std::max(worst, std::abs(spatial[k][i][j] - c));
                }
    }
    return {"se3-structure-constants", worst <= 1e-6, fmt("max deviation %.2e (tol 1e-6)", worst)};
}

SuiteResult gauss_minimality() {
    Sampler s(kSeed + 1);
    double worst_decrease = 0.0;
    double worst_feasibility = 0.0;
    double worst_free = 0.0;
    for (int n = 0; n < 100; ++n) {
        const SpatialInertia si = s.inertia();
        const Twist nu = Twist::from_vector(s.vec6(2.0), Frame::Body);
        const Vec6 f = s.vec6(3.0);
        const Wrench w{f.head<3>(), f.tail<3>(), Frame::Body};
        const Vec6 free = kirchhoff_rhs(si, nu, w);
        worst_free = std::max(worst_free,
                              (constrained_accel(si, nu, w, AccelConstraint::none()).nu_dot - free)
                                  .cwiseAbs()
                                  .maxCoeff());

        const int k = 1 + n % 4;
        AccelConstraint con;
        con.a.resize(k, 6);
        con.b.resize(k);
        for (int r = 0; r < k; ++r) {
            con.a.row(r) = s.vec6(1.0).transpose();
            con.b[r] = s.uniform(-1.0, 1.0);
        }
        const ConstrainedAccel sol = constrained_accel(si, nu, w, con);
        worst_feasibility = std::max(worst_feasibility, (con.a * sol.nu_dot - con.b).cwiseAbs().maxCoeff());

        // Projector onto the null space of A.
        const Eigen::MatrixXd at = con.a.transpose();
        const Mat6 proj = Mat6::Identity() - at * (con.a * at).ldlt().solve(con.a);
        const double g0 = gauss_functional(si, sol.nu_dot, free);
        for (int m = 0; m < 100; ++m) {
            const Vec6 delta = proj * s.vec6(1.0);
            worst_decrease = std::max(worst_decrease, g0 - gauss_functional(si, sol.nu_dot + delta, free));
        }
    }
    const bool ok = worst_decrease <= 1e-12 && worst_feasibility <= 1e-10 && worst_free <= 1e-12;
    return {"gauss-minimality", ok,
            fmt("max decrease %.2e (tol 1e-12), max |A a - b| %.2e (tol 1e-10)", worst_decrease,
                worst_feasibility)};
}

double wrap(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

SuiteResult euler_roundtrip() {
    Sampler s(kSeed + 2);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const EulerAngles e{s.uniform(-std::numbers::pi, std::numbers::pi), s.uniform(1e-3, std::numbers::pi - 1e-3),
                            s.uniform(-std::numbers::pi, std::numbers::pi)};
        const EulerAngles back = rotation_to_euler(euler_to_rotation(e));
        worst = std::max({worst, std::abs(wrap(back.phi - e.phi)), std::abs(back.theta - e.theta),
                          std::abs(wrap(back.psi - e.psi))});
    }
    return {"euler-roundtrip", worst <= 1e-10, fmt("max angle error %.2e (tol 1e-10)", worst)};
}

SuiteResult chart_roundtrip() {
    Sampler s(kSeed + 3);
    double worst = 0.0;
    for (ChartId id : kAllCharts) {
        for (int n = 0; n < 1000; ++n) {
            const Pose p = id == ChartId::EulerCoM ? s.euler_valid_pose() : s.pose();
            const Twist nu = Twist::from_vector(s.vec6(2.0), Frame::Body);
            const Vec6 u = chart_from_body_twist(id, p, nu);
            const Twist back = body_twist(id, {p, u});
            worst = std::max(worst, (back.as_vector() - nu.as_vector()).cwiseAbs().maxCoeff());
        }
    }
    return {"chart-roundtrip", worst <= 1e-10, fmt("max residual %.2e (tol 1e-10)", worst)};
}

SuiteResult axisymmetric_analytic() {
    const Scenario sc = builtin::axisymmetric_free();
    const Trajectory traj = simulate(sc, Formulation::Kirchhoff, IntegratorId::LieRK4, 1e-3, 10.0, 1);
    double unwrapped = 0.0;
    double prev = std::atan2(traj.front().nu.omega.y(), traj.front().nu.omega.x());
    for (const auto& smp : traj) {
        const double a = std::atan2(smp.nu.omega.y(), smp.nu.omega.x());
        unwrapped += std::remainder(a - prev, 2.0 * std::numbers::pi);
        prev = a;
    }
    const double rate = unwrapped / traj.back().t;
    const double expected = (2.0 - 1.0) / 1.0 * 1.0;
    const double rel = std::abs(std::abs(rate) - expected) / expected;
    return {"axisymmetric-analytic", rel <= 1e-6,
            fmt("measured rate %.12f rad/s, relative error %.2e (tol 1e-6)", rate, rel)};
}

SuiteResult steady_precession() {
    double worst = 0.0;
    for (int root = 0; root < 2; ++root) {
        const Scenario sc = builtin::heavy_top_steady(root);
        const Trajectory traj = simulate(sc, Formulation::Gauss, IntegratorId::LieRK4, 1e-3, 5.0, 10);
        const double theta0 = builtin::HeavyTop{}.theta0;
        for (const auto& smp : traj) {
            worst = std::max(worst, std::abs(rotation_to_euler(smp.pose.rotation).theta - theta0));
        }
    }
    return {"steady-precession", worst <= 1e-4,
            fmt("max nutation deviation %.2e rad over both roots (tol 1e-4)", worst)};
}

SuiteResult formulation_equivalence() {
    const Scenario sc = builtin::euler_top();
    const Trajectory ne = simulate(sc, Formulation::NewtonEuler, IntegratorId::LieRK4, 1e-3, 10.0, 10);
    const Trajectory ki = simulate(sc, Formulation::Kirchhoff, IntegratorId::LieRK4, 1e-3, 10.0, 10);
    const Trajectory la = simulate(sc, Formulation::Lagrange, IntegratorId::RK4, 1e-3, 10.0, 10);
    double worst = 0.0;
    for (std::size_t i = 0; i < ne.size(); ++i) {
        worst = std::max({worst, geodesic_distance(ne[i].pose.rotation, ki[i].pose.rotation),
                          geodesic_distance(ne[i].pose.rotation, la[i].pose.rotation),
                          geodesic_distance(ki[i].pose.rotation, la[i].pose.rotation)});
    }
    return {"formulation-equivalence", worst <= 1e-5,
            fmt("max pairwise orientation gap %.2e rad (tol 1e-5)", worst)};
}

using SuiteFn = SuiteResult (*)();

struct Entry {
    const char* name;
    SuiteFn fn;
};

constexpr Entry kSuites[] = {
    {"se3-structure-constants", structure_constants},
    {"gauss-minimality", gauss_minimality},
    {"euler-roundtrip", euler_roundtrip},
    {"chart-roundtrip", chart_roundtrip},
    {"axisymmetric-analytic", axisymmetric_analytic},
    {"steady-precession", steady_precession},
    {"formulation-equivalence", formulation_equivalence},
};

}  // namespace

const std::vector<std::string>& validation_suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : kSuites) out.emplace_back(e.name);
        return out;
    }();
    return names;
}

SuiteResult run_validation_suite(std::string_view name) {
    for (const auto& e : kSuites) {
        if (name == e.name) {
            try {
                return e.fn();
            } catch (const Error& err) {
                return {e.name, false, std::string("error: ") + err.what()};
            }
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + std::string(name) + "'");
}

}  // namespace unirigid
