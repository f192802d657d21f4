// Gauss principle of least constraint in the body-twist chart.
//
// The constrained acceleration minimizes
//     G(a) = 1/2 (a - a_free)^T M (a - a_free)
// over the affine set A a = b, where a_free is the Kirchhoff acceleration.
#pragma once

#include <Eigen/Core>
#include <array>

#include "unirigid/dynamics.hpp"

namespace unirigid {

inline constexpr double kConstraintRankTol = 1e-10;

/// Acceleration-level constraint A nu' = b, with 0 <= rows <= 6.
struct AccelConstraint {
    Eigen::Matrix<double, Eigen::Dynamic, 6> a;
    Eigen::VectorXd b;

    static AccelConstraint none();
    int rows() const { return static_cast<int>(a.rows()); }
};

/// A body point pinned in space (heavy top). Gains are opt-in.
struct FixedPointConstraint {
    Vec3 r_b = Vec3::Zero();
    double baumgarte_alpha = 0.0;
    double baumgarte_beta = 0.0;
};

struct ConstrainedAccel {
    Vec6 nu_dot;
    /// Reaction wrench coordinates: the constraint wrench is A^T lambda, so
    /// M nu' + ad*_nu(M nu) = F + A^T lambda.
    Eigen::VectorXd lambda;
};

double gauss_functional(const SpatialInertia& si, const Vec6& nu_dot_candidate,
                        const Vec6& nu_dot_free);

/// Throws RankDeficientConstraint or NotPositiveDefinite.
ConstrainedAccel constrained_accel(const SpatialInertia& si, const Twist& nu, const Wrench& wrench,
                                   const AccelConstraint& con);

/// Velocity-level residual of the pin: v + omega x r_b (body frame).
Vec3 fixed_point_velocity_residual(const FixedPointConstraint& fp, const Twist& nu);

/// A = [-hat(r_b) | I], b = -omega x c_v - 2 alpha c_v - beta^2 c_x, where
/// c_x is the body-frame position drift of the pinned point.
AccelConstraint fixed_point_constraint(const FixedPointConstraint& fp, const Twist& nu,
                                       const Vec3& position_drift = Vec3::Zero());

/// Body-frame drift R^T (x + R r_b - anchor) of the pinned point.
Vec3 fixed_point_position_drift(const FixedPointConstraint& fp, const Pose& pose,
                                const Vec3& anchor);

/// Rotation-only Euler-angle equations for a body pinned at r_b: the
/// translational coordinates are eliminated through x = anchor - R r_b and the
/// Lagrangian uses the inertia about the pin. Returns the EulerCoM chart rate
/// u' with the linear block given by the pinned-point kinematics.
Vec6 pinned_euler_rhs(const SpatialInertia& si, const FixedPointConstraint& fp,
                      const ChartState& state, const ForceModel& forces, double t);

/// Both roots of the steady-precession condition for a symmetric top,
///   j1_pivot phi'^2 cos(theta0) - j3 omega3 phi' + m g l = 0,
/// smaller root first. j1_pivot is the transverse moment about the pin, l the
/// pin-to-CoM distance and omega3 the spin component along the symmetry axis.
/// Throws InvalidArgument when the roots are complex or the equation degenerates.
std::array<double, 2> steady_precession_rates(double j1_pivot, double j3, double mass,
                                              double gravity, double l, double theta0,
                                              double omega3);

}  // namespace unirigid
