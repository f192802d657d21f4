#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "support.hpp"
#include "unirigid/dynamics.hpp"

using namespace unirigid;
using unirigid::testing::Sampler;
using unirigid::testing::max_abs;

namespace {

ForceModel no_forces() {
    ForceModel f;
    f.gravity_spatial.setZero();
    return f;
}

Wrench zero_wrench() { return {}; }

}  // namespace

TEST(Inertia, Validation) {
    SpatialInertia si;
    si.j = Vec3(1, 2, 3).asDiagonal();
    EXPECT_NO_THROW(si.validate());

    SpatialInertia bad = si;
    bad.mass = -1.0;
    try {
        bad.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
        EXPECT_NE(std::string(e.what()).find("mass"), std::string::npos);
    }

    bad = si;
    bad.j = Vec3(1, 1, 3).asDiagonal();
    try {
        bad.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("triangle"), std::string::npos);
    }

    bad = si;
    bad.j(0, 1) = 0.1;
    EXPECT_THROW(bad.validate(), Error);

    bad = si;
    bad.j = Vec3(1, -2, 3).asDiagonal();
    try {
        bad.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
    }
}

TEST(Inertia, PrincipalMomentsAreSortedEigenvalues) {
    Sampler s(40);
    const Mat3 q = s.rotation().matrix();
    const Mat3 j = q * Vec3(3.0, 1.0, 2.5).asDiagonal() * q.transpose();
    const Vec3 l = principal_moments(j);
    EXPECT_NEAR(l[0], 1.0, 1e-14);
    EXPECT_NEAR(l[1], 2.5, 1e-14);
    EXPECT_NEAR(l[2], 3.0, 1e-14);
}

TEST(Inertia, SpatialInertiaBlocks) {
    Sampler s(41);
    const SpatialInertia si = s.inertia();
    const Mat6 m = assemble_inertia(si);
    EXPECT_LT(max_abs(m - m.transpose()), 1e-15);
    // About the origin, the point mass at c contributes m (|c|^2 I - c c^T).
    const Mat3 jc = si.j - si.mass * (si.c.squaredNorm() * Mat3::Identity() - si.c * si.c.transpose());
    EXPECT_GT(principal_moments(jc)[0], 0.0);
    SpatialInertia bad = si;
    bad.c = Vec3(10, 0, 0);
    EXPECT_THROW(assemble_inertia(bad), Error);
}

TEST(Momentum, IsTheGradientOfKineticEnergy) {
    Sampler s(42);
    for (int n = 0; n < 20; ++n) {
        const SpatialInertia si = s.inertia();
        const Vec6 nu = s.vec6();
        const Momentum mu = momentum(si, Twist::from_vector(nu, Frame::Body));
        Vec6 grad;
        const double h = 1e-6;
        for (int i = 0; i < 6; ++i) {
            const Vec6 d = h * Vec6::Unit(i);
            grad[i] = (kinetic_energy(si, Twist::from_vector(nu + d, Frame::Body)) -
                       kinetic_energy(si, Twist::from_vector(nu - d, Frame::Body))) /
                      (2 * h);
        }
        Vec6 m;
        m << mu.pi, mu.p;
        EXPECT_LT((m - grad).norm(), 1e-8);
    }
}

TEST(KineticEnergy, KoenigDecomposition) {
    Sampler s(43);
    for (int n = 0; n < 50; ++n) {
        const SpatialInertia si = s.inertia();
        const Twist nu = s.twist();
        const Vec3 v_com = nu.vel + nu.omega.cross(si.c);
        const Mat3 jc = si.j - si.mass * (si.c.squaredNorm() * Mat3::Identity() - si.c * si.c.transpose());
        const double ref = 0.5 * si.mass * v_com.squaredNorm() + 0.5 * nu.omega.dot(jc * nu.omega);
        EXPECT_NEAR(kinetic_energy(si, nu), ref, 1e-13);
    }
}

TEST(Coadjoint, IsMinusAdTranspose) {
    Sampler s(44);
    for (int n = 0; n < 50; ++n) {
        const Vec6 nu = s.vec6(), mu = s.vec6();
        EXPECT_LT((coadjoint_term(nu, mu) + ad_matrix(nu).transpose() * mu).norm(), 1e-15);
        // Pairing identity: <ad*_nu mu, nu> = 0
        EXPECT_NEAR(coadjoint_term(nu, mu).dot(nu), 0.0, 1e-15);
    }
}

TEST(Kirchhoff, EulerEquationsForPrincipalAxes) {
    SpatialInertia si;
    si.j = Vec3(1, 2, 3).asDiagonal();
    const Vec6 acc = kirchhoff_rhs(si, {Vec3(1, 1, 1), Vec3::Zero()}, zero_wrench());
    // J1 w1' = (J2 - J3) w2 w3 and cyclic.
    EXPECT_NEAR(acc[0], -1.0, 1e-15);
    EXPECT_NEAR(acc[1], 2.0 / 2.0, 1e-15);
    EXPECT_NEAR(acc[2], -1.0 / 3.0, 1e-15);
    EXPECT_LT(acc.tail<3>().norm(), 1e-15);
}

TEST(Kirchhoff, MatchesNewtonEulerAtCoM) {
    Sampler s(45);
    for (int n = 0; n < 100; ++n) {
        const SpatialInertia si = s.inertia(0.0);
        const Twist nu = s.twist();
        const Wrench w = s.wrench();
        EXPECT_LT((kirchhoff_rhs(si, nu, w) - newton_euler_rhs(si, nu, w)).norm(), 1e-12);
    }
}

TEST(NewtonEuler, RequiresFrameAtCoM) {
    SpatialInertia si;
    si.c = Vec3(0.1, 0, 0);
    try {
        newton_euler_rhs(si, Twist{}, zero_wrench());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::FrameNotAtCoM);
    }
}

TEST(Kirchhoff, OffsetFrameMatchesCoMFrame) {
    // Shifting the body frame by -c: the CoM-frame twist is Ad of the shift.
    Sampler s(46);
    for (int n = 0; n < 50; ++n) {
        const SpatialInertia si = s.inertia();
        const Twist nu = s.twist();
        const Wrench w = s.wrench();
        const Pose shift{Rotation(), si.c};  // CoM frame expressed in the body frame
        const Mat6 to_com = adjoint_inverse(shift);
        SpatialInertia at_com;
        at_com.mass = si.mass;
        at_com.j = si.j - si.mass * (si.c.squaredNorm() * Mat3::Identity() - si.c * si.c.transpose());
        const Vec6 nu_c = to_com * nu.as_vector();
        // Wrenches transform with the transpose of the twist map.
        const Vec6 w_c = adjoint(shift).transpose() * w.as_vector();
        const Vec6 acc_c = newton_euler_rhs(at_com, Twist::from_vector(nu_c, Frame::Body),
                                            {w_c.head<3>(), w_c.tail<3>(), Frame::Body});
        EXPECT_LT((to_com * kirchhoff_rhs(si, nu, w) - acc_c).norm(), 1e-12);
    }
}

TEST(ChartRhs, BodyChartIsKirchhoff) {
    Sampler s(47);
    ForceModel f;
    for (int n = 0; n < 50; ++n) {
        const SpatialInertia si = s.inertia();
        const Pose p = s.pose();
        const Vec6 u = s.vec6();
        const Vec6 wrench = body_wrench(si, f, 0.0, p, Twist::from_vector(u, Frame::Body));
        const Vec6 ref = kirchhoff_rhs(si, Twist::from_vector(u, Frame::Body),
                                       {wrench.head<3>(), wrench.tail<3>(), Frame::Body});
        EXPECT_LT((chart_rhs(ChartId::BodyTwist, si, {p, u}, f, 0.0) - ref).norm(), 1e-13);
    }
}

TEST(ChartRhs, EveryChartReproducesTheBodyAcceleration) {
    // nu' = Phi u' + Phi' u must equal the Kirchhoff acceleration.
    Sampler s(48);
    ForceModel f;
    f.constant_body_wrench = {Vec3(0.1, -0.2, 0.3), Vec3(1, 0, -1), Frame::Body};
    for (ChartId id : kAllCharts) {
        for (int n = 0; n < 50; ++n) {
            const SpatialInertia si = s.inertia();
            const Pose p = id == ChartId::EulerCoM ? s.euler_pose() : s.pose();
            const Twist nu = s.twist();
            const Vec6 u = chart_from_body_twist(id, p, nu);
            const ChartEval ev = chart_eval(id, p, u);
            const Vec6 wrench = body_wrench(si, f, 0.0, p, nu);
            const Vec6 ref =
                kirchhoff_rhs(si, nu, {wrench.head<3>(), wrench.tail<3>(), Frame::Body});
            const Vec6 acc = ev.phi * chart_rhs(id, si, {p, u}, f, 0.0) + ev.phi_dot * u;
            EXPECT_LT((acc - ref).norm(), 1e-10) << to_string(id);
        }
    }
}

namespace {

// Independent Euler-Lagrange oracle in long double for the EulerCoM chart.
// q = (phi, theta, psi, x), qd = (phi', theta', psi', x').
using LD = long double;
using Q = std::array<LD, 6>;

struct V3 {
    LD x, y, z;
};

V3 add(V3 a, V3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
LD dot(V3 a, V3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
V3 cross(V3 a, V3 b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
// Inverse elementary rotations applied to vectors.
V3 rz_t(LD a, V3 v) { return {std::cos(a) * v.x + std::sin(a) * v.y, -std::sin(a) * v.x + std::cos(a) * v.y, v.z}; }
V3 rx_t(LD a, V3 v) { return {v.x, std::cos(a) * v.y + std::sin(a) * v.z, -std::sin(a) * v.y + std::cos(a) * v.z}; }
// R^T v for R = Rz(phi) Rx(theta) Rz(psi).
V3 rt(const Q& q, V3 v) { return rz_t(q[2], rx_t(q[1], rz_t(q[0], v))); }

struct Body {
    LD mass;
    LD jc[3][3];  // about the CoM
    V3 c;
    V3 g;
    V3 torque;  // constant body wrench, about the body origin
    V3 force;
};

// Body-frame angular velocity by composing the three elementary rotation rates.
V3 omega_body(const Q& q, const Q& qd) {
    const V3 inner = add(V3{qd[1], 0, 0}, rx_t(q[1], V3{0, 0, qd[0]}));
    return add(V3{0, 0, qd[2]}, rz_t(q[2], inner));
}

LD lagrangian(const Body& b, const Q& q, const Q& qd) {
    const V3 w = omega_body(q, qd);
    const V3 v = rt(q, V3{qd[3], qd[4], qd[5]});
    const V3 vc = add(v, cross(w, b.c));
    LD rot = 0;
    const LD wv[3] = {w.x, w.y, w.z};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rot += wv[i] * b.jc[i][j] * wv[j];
    // Potential -m g . (x + R c) with g . R c = (R^T g) . c
    const LD pot = -b.mass * (b.g.x * q[3] + b.g.y * q[4] + b.g.z * q[5] + dot(rt(q, b.g), b.c));
    return 0.5L * b.mass * dot(vc, vc) + 0.5L * rot - pot;
}

// Generalized force of the constant body wrench: F . d nu / d qd_i.
LD generalized_force(const Body& b, const Q& q, int i) {
    Q e{};
    e[i] = 1;
    const V3 w = omega_body(q, e);
    const V3 v = rt(q, V3{e[3], e[4], e[5]});
    return dot(b.torque, w) + dot(b.force, v);
}

// d/dt(dL/dqd) - dL/dq - Q at the acceleration qdd, by nested central differences.
Q euler_lagrange_residual(const Body& b, const Q& q, const Q& qd, const Q& qdd) {
    const LD h = 1e-5L;
    const auto shifted = [](Q a, int i, LD d) {
        a[i] += d;
        return a;
    };
    const auto dl_dqd = [&](const Q& qq, const Q& vv, int i) {
        return (lagrangian(b, qq, shifted(vv, i, h)) - lagrangian(b, qq, shifted(vv, i, -h))) / (2 * h);
    };
    Q out;
    for (int i = 0; i < 6; ++i) {
        LD ddt = 0;
        for (int j = 0; j < 6; ++j) {
            ddt += (dl_dqd(shifted(q, j, h), qd, i) - dl_dqd(shifted(q, j, -h), qd, i)) / (2 * h) * qd[j];
            ddt += (dl_dqd(q, shifted(qd, j, h), i) - dl_dqd(q, shifted(qd, j, -h), i)) / (2 * h) * qdd[j];
        }
        const LD dl_dq = (lagrangian(b, shifted(q, i, h), qd) - lagrangian(b, shifted(q, i, -h), qd)) / (2 * h);
        out[i] = ddt - dl_dq - generalized_force(b, q, i);
    }
    return out;
}

}  // namespace

TEST(ChartRhs, EulerChartMatchesEulerLagrangeOracle) {
    Sampler s(49);
    for (int n = 0; n < 100; ++n) {
        const SpatialInertia si = s.inertia();
        ForceModel f;
        f.gravity_spatial = s.vec(10.0);
        f.constant_body_wrench = s.wrench();
        const Pose p = s.euler_pose();
        const EulerAngles e = rotation_to_euler(p.rotation);
        const Vec6 u = s.vec6();

        Body b;
        b.mass = si.mass;
        const Mat3 jc = si.j - si.mass * (si.c.squaredNorm() * Mat3::Identity() - si.c * si.c.transpose());
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) b.jc[i][j] = jc(i, j);
        b.c = {si.c.x(), si.c.y(), si.c.z()};
        b.g = {f.gravity_spatial.x(), f.gravity_spatial.y(), f.gravity_spatial.z()};
        const Wrench& w = f.constant_body_wrench;
        b.torque = {w.torque.x(), w.torque.y(), w.torque.z()};
        b.force = {w.force.x(), w.force.y(), w.force.z()};

        const Q q{e.phi, e.theta, e.psi, p.position.x(), p.position.y(), p.position.z()};
        const Q qd{u[0], u[1], u[2], u[3], u[4], u[5]};
        const Vec6 acc = chart_rhs(ChartId::EulerCoM, si, {p, u}, f, 0.0);
        const Q qdd{acc[0], acc[1], acc[2], acc[3], acc[4], acc[5]};
        const Q residual = euler_lagrange_residual(b, q, qd, qdd);
        for (int i = 0; i < 6; ++i) EXPECT_LT(std::abs(static_cast<double>(residual[i])), 1e-5) << i;
    }
}

TEST(Dynamics, PowerBalance) {
    // d/dt (T + V) equals the power of the non-gravitational wrench.
    Sampler s(50);
    for (int n = 0; n < 50; ++n) {
        const SpatialInertia si = s.inertia();
        ForceModel f;
        f.constant_body_wrench = s.wrench();
        const Pose p = s.pose();
        const Twist nu = s.twist();
        const Vec6 wrench = body_wrench(si, f, 0.0, p, nu);
        const Vec6 acc = kirchhoff_rhs(si, nu, {wrench.head<3>(), wrench.tail<3>(), Frame::Body});
        const double h = 1e-6;
        const auto energy = [&](double t) {
            const Pose pt = pose_compose(p, exp_se3(t * nu.as_vector()));
            const Twist nt = Twist::from_vector(nu.as_vector() + t * acc, Frame::Body);
            return kinetic_energy(si, nt) + potential_energy(si, f, pt);
        };
        const double rate = (energy(h) - energy(-h)) / (2 * h);
        EXPECT_NEAR(rate, f.constant_body_wrench.as_vector().dot(nu.as_vector()), 1e-7);
    }
}

TEST(Dynamics, SpatialMomentumConservedWithoutForces) {
    Sampler s(51);
    const ForceModel f = no_forces();
    for (int n = 0; n < 50; ++n) {
        const SpatialInertia si = s.inertia();
        const Pose p = s.pose();
        const Twist nu = s.twist();
        const Vec6 acc = kirchhoff_rhs(si, nu, zero_wrench());
        const double h = 1e-6;
        const auto l = [&](double t) {
            const Pose pt = pose_compose(p, exp_se3(t * nu.as_vector()));
            return spatial_angular_momentum(si, pt, Twist::from_vector(nu.as_vector() + t * acc, Frame::Body));
        };
        EXPECT_LT(((l(h) - l(-h)) / (2 * h)).norm(), 1e-8);
        EXPECT_LT(body_wrench(si, f, 0.0, p, nu).norm(), 1e-300);
    }
}

TEST(Dynamics, AxisymmetricSpinIsConstant) {
    SpatialInertia si;
    si.j = Vec3(1, 1, 2).asDiagonal();
    Sampler s(52);
    for (int n = 0; n < 20; ++n) {
        const Vec6 acc = kirchhoff_rhs(si, s.twist(), zero_wrench());
        EXPECT_NEAR(acc[2], 0.0, 1e-15);
    }
}

TEST(Dynamics, GravityActsAtTheCoM) {
    SpatialInertia si;
    si.mass = 2.0;
    si.c = Vec3(0, 0, 0.5);
    ForceModel f;
    const Pose p{Rotation::about_x(std::numbers::pi / 2), Vec3(1, 2, 3)};
    const Vec6 w = body_wrench(si, f, 0.0, p, Twist{});
    const Vec3 weight_body = p.rotation.transpose() * Vec3(0, 0, -2.0 * 9.81);
    EXPECT_LT((w.tail<3>() - weight_body).norm(), 1e-14);
    EXPECT_LT((w.head<3>() - si.c.cross(weight_body)).norm(), 1e-14);
    EXPECT_NEAR(potential_energy(si, f, p), 2.0 * 9.81 * com_position(si, p).z(), 1e-13);
}

TEST(Dynamics, CallbackWrenchIsAdded) {
    SpatialInertia si;
    ForceModel f = no_forces();
    f.callback = [](double t, const Pose&, const Twist& nu) {
        return Wrench{-0.5 * nu.omega, Vec3(t, 0, 0), Frame::Body};
    };
    const Twist nu{Vec3(1, 2, 3), Vec3::Zero()};
    const Vec6 w = body_wrench(si, f, 2.0, Pose{}, nu);
    EXPECT_LT((w.head<3>() + 0.5 * nu.omega).norm(), 1e-15);
    EXPECT_EQ(w[3], 2.0);
    f.callback = [](double, const Pose&, const Twist&) { return Wrench{{}, {}, Frame::Spatial}; };
    EXPECT_THROW(body_wrench(si, f, 0.0, Pose{}, nu), Error);
}
