// Equations of motion in quasi-velocity form.
//
// Momenta and wrenches are taken about the body-frame origin, which need not
// coincide with the center of mass. With nu = (omega, v) the body twist and
// M the 6x6 spatial inertia, every formulation here is a projection of
//
//     M nu' + ad*_nu (M nu) = F,     ad*_nu (pi, p) = (omega x pi + v x p, omega x p).
#pragma once

#include <functional>

#include "unirigid/charts.hpp"

namespace unirigid {

struct SpatialInertia {
    double mass = 1.0;
    Mat3 j = Mat3::Identity();  ///< about the body origin, body axes
    Vec3 c = Vec3::Zero();      ///< center of mass in body coordinates

    /// Throws ValidationError naming the violated invariant.
    void validate() const;
};

struct Momentum {
    Vec3 pi = Vec3::Zero();
    Vec3 p = Vec3::Zero();
};

struct Wrench {
    Vec3 torque = Vec3::Zero();
    Vec3 force = Vec3::Zero();
    Frame frame = Frame::Body;

    Vec6 as_vector() const;
};

/// Extra wrench as a pure function of time, pose and body twist. Must return
/// a body-frame wrench about the body origin.
using WrenchCallback = std::function<Wrench(double t, const Pose& pose, const Twist& nu)>;

struct ForceModel {
    Vec3 gravity_spatial{0.0, 0.0, -9.81};
    Wrench constant_body_wrench{};
    WrenchCallback callback;
};

/// Principal moments of j in ascending order; throws NotPositiveDefinite.
Vec3 principal_moments(const Mat3& j);

/// [[j, m hat(c)], [-m hat(c), m I]]; throws NotPositiveDefinite.
Mat6 assemble_inertia(const SpatialInertia& si);

Momentum momentum(const SpatialInertia& si, const Twist& nu);

/// ad*_nu mu with the sign convention given at the top of this header.
Vec6 coadjoint_term(const Vec6& nu, const Vec6& mu);

/// Total body-frame wrench about the body origin: gravity at the CoM, the
/// constant body wrench and the callback.
Vec6 body_wrench(const SpatialInertia& si, const ForceModel& forces, double t, const Pose& pose,
                 const Twist& nu);

/// nu' from the Kirchhoff equations M nu' = (tau - w x pi - v x p, f - w x p).
Vec6 kirchhoff_rhs(const SpatialInertia& si, const Twist& nu, const Wrench& w);

/// Newton-Euler split for a frame at the CoM: w' = J^-1 (tau - w x J w),
/// v' = f/m - w x v. Throws FrameNotAtCoM when ||c|| > 1e-12.
Vec6 newton_euler_rhs(const SpatialInertia& si, const Twist& nu, const Wrench& w);

/// The chart-parameterized engine: solves
///   (Phi^T M Phi) u' = Phi^T (F - M Phi' u - ad*_nu(M nu)),  nu = Phi u.
Vec6 chart_rhs(ChartId id, const SpatialInertia& si, const ChartState& state,
               const ForceModel& forces, double t);

double kinetic_energy(const SpatialInertia& si, const Twist& nu);
/// -m g . (x + R c)
double potential_energy(const SpatialInertia& si, const ForceModel& forces, const Pose& pose);
/// R pi + x x (R p)
Vec3 spatial_angular_momentum(const SpatialInertia& si, const Pose& pose, const Twist& nu);

/// Space-frame position of the center of mass.
Vec3 com_position(const SpatialInertia& si, const Pose& pose);

}  // namespace unirigid
