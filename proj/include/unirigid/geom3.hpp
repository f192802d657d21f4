// Rotation and rigid-placement algebra on SO(3) and SE(3).
//
// Conventions used throughout the library:
//  - matrices act on column vectors from the left;
//  - a Pose (R, x) maps body coordinates p to space coordinates R p + x;
//  - twists and wrenches are ordered (angular, linear);
//  - Euler angles follow the Z-X-Z convention: R = Rz(phi) Rx(theta) Rz(psi).
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

#include "unirigid/errors.hpp"

namespace unirigid {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double kOrthogonalityTol = 1e-9;
inline constexpr double kSmallAngle = 1e-6;
/// log_so3 refuses trace(R) <= -1 + kNearPiTraceMargin.
inline constexpr double kNearPiTraceMargin = 1e-9;
/// rotation_to_euler refuses |R(2,2)| >= 1 - kEulerPoleMargin.
inline constexpr double kEulerPoleMargin = 1e-12;
/// Minimum |sin(theta)| for the Euler-angle velocity chart.
inline constexpr double kGimbalSinTol = 1e-8;

bool all_finite(const Vec3& v);
bool all_finite(const Mat3& m);

/// Proper rotation matrix. Construction verifies orthogonality and det = +1.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}
    explicit Rotation(const Mat3& m);

    static Rotation identity() { return Rotation(); }
    static Rotation about_x(double angle);
    static Rotation about_y(double angle);
    static Rotation about_z(double angle);

    const Mat3& matrix() const { return m_; }
    Rotation transpose() const;
    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    Rotation operator*(const Rotation& other) const;

    /// ||R^T R - I||_F.
    double orthogonality_error() const;

private:
    struct Unchecked {};
    Rotation(const Mat3& m, Unchecked) : m_(m) {}
    friend Rotation exp_so3(const Vec3& w);
    friend struct Pose exp_se3(const Vec6& xi);

    Mat3 m_;
};

struct Pose {
    Rotation rotation;
    Vec3 position = Vec3::Zero();

    static Pose identity() { return {}; }
};

struct EulerAngles {
    double phi = 0.0;    ///< precession
    double theta = 0.0;  ///< nutation
    double psi = 0.0;    ///< spin
};

Mat3 hat(const Vec3& w);
Vec3 vee(const Mat3& s);

/// Rodrigues formula; Taylor coefficients below kSmallAngle.
Rotation exp_so3(const Vec3& w);
/// exp(hat(w)) - I, without the cancellation of forming it from exp_so3.
Mat3 expm1_so3(const Vec3& w);
/// Principal logarithm, angle in [0, pi). Throws AngleNearPi close to pi.
Vec3 log_so3(const Rotation& r);

/// Rotation angle of a^T b.
double geodesic_distance(const Rotation& a, const Rotation& b);

Rotation euler_to_rotation(const EulerAngles& e);
/// theta in (0, pi), phi and psi in (-pi, pi]. Throws GimbalLock at the poles.
EulerAngles rotation_to_euler(const Rotation& r);

Pose pose_compose(const Pose& a, const Pose& b);
Pose pose_inverse(const Pose& a);

/// Adjoint action on (angular, linear) twists: [[R, 0], [hat(x) R, R]].
Mat6 adjoint(const Pose& p);
/// Inverse of adjoint(p), formed directly.
Mat6 adjoint_inverse(const Pose& p);

// se(3) helpers shared by the chart, dynamics and integrator modules.

/// ad_xi as a 6x6 matrix: [[hat(w), 0], [hat(v), hat(w)]].
Mat6 ad_matrix(const Vec6& xi);
/// Lie bracket [a, b] = ad_a b.
Vec6 se3_bracket(const Vec6& a, const Vec6& b);
/// Group exponential of a twist (angular, linear), as a Pose.
Pose exp_se3(const Vec6& xi);

}  // namespace unirigid
