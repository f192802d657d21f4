#include "unirigid/geom3.hpp"

#include <cmath>
#include <numbers>

namespace unirigid {

bool all_finite(const Vec3& v) { return v.allFinite(); }
bool all_finite(const Mat3& m) { return m.allFinite(); }

Rotation::Rotation(const Mat3& m) : m_(m) {
    if (!m.allFinite()) {
        throw Error(ErrorKind::InvalidRotation, "rotation matrix has non-finite entries");
    }
    const double orth = orthogonality_error();
    if (orth > kOrthogonalityTol) {
        throw Error(ErrorKind::InvalidRotation,
                    "rotation matrix not orthogonal: ||R^T R - I|| = " + std::to_string(orth));
    }
    if (std::abs(m.determinant() - 1.0) > kOrthogonalityTol) {
        throw Error(ErrorKind::InvalidRotation, "rotation matrix is not proper (det != 1)");
    }
}

Rotation Rotation::about_x(double a) {
    Mat3 m;
    m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
    return Rotation(m, Unchecked{});
}

Rotation Rotation::about_y(double a) {
    Mat3 m;
    m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
    return Rotation(m, Unchecked{});
}

Rotation Rotation::about_z(double a) {
    Mat3 m;
    m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return Rotation(m, Unchecked{});
}

Rotation Rotation::transpose() const { return Rotation(m_.transpose(), Unchecked{}); }

Rotation Rotation::operator*(const Rotation& other) const {
    return Rotation(m_ * other.m_, Unchecked{});
}

double Rotation::orthogonality_error() const {
    return (m_.transpose() * m_ - Mat3::Identity()).norm();
}

Mat3 hat(const Vec3& w) {
    Mat3 s;
    s << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
    return s;
}

Vec3 vee(const Mat3& s) { return {s(2, 1), s(0, 2), s(1, 0)}; }

namespace {

// sin(t)/t and (1 - cos(t))/t^2, with 4th-order Taylor series near zero.
void rodrigues_coefficients(double t, double& a, double& b) {
    if (t < kSmallAngle) {
        const double t2 = t * t;
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    } else {
        const double half = std::sin(0.5 * t) / t;
        a = std::sin(t) / t;
        b = 2.0 * half * half;
    }
}

}  // namespace

Rotation exp_so3(const Vec3& w) {
    const double t = w.norm();
    double a = 0.0;
    double b = 0.0;
    rodrigues_coefficients(t, a, b);
    const Mat3 s = hat(w);
    return Rotation(Mat3::Identity() + a * s + b * s * s, Rotation::Unchecked{});
}

Mat3 expm1_so3(const Vec3& w) {
    double a = 0.0;
    double b = 0.0;
    rodrigues_coefficients(w.norm(), a, b);
    const Mat3 s = hat(w);
    return a * s + b * s * s;
}

Vec3 log_so3(const Rotation& r) {
    const Mat3& m = r.matrix();
    const double tr = m.trace();
    if (tr <= -1.0 + kNearPiTraceMargin) {
        throw Error(ErrorKind::AngleNearPi,
                    "log_so3: rotation angle within tolerance of pi (trace = " +
                        std::to_string(tr) + ")");
    }
    const Vec3 axial = 0.5 * vee(m - m.transpose());  // sin(t) * n
    const double c = 0.5 * (tr - 1.0);
    const double s = axial.norm();
    const double t = std::atan2(s, c);

    if (t < kSmallAngle) {
        // t / sin(t) = 1 + t^2/6 + 7 t^4/360
        const double t2 = t * t;
        return (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * axial;
    }
    if (c > -0.9) {
        return (t / s) * axial;
    }
    // Near pi the antisymmetric part is small; recover the axis from the
    // symmetric part (1 - c) n n^T and take its sign from the axial vector.
    const Mat3 sym = 0.5 * (m + m.transpose()) - c * Mat3::Identity();
    Eigen::Index i = 0;
    sym.diagonal().maxCoeff(&i);
    Vec3 n = sym.col(i) / std::sqrt(sym(i, i) * (1.0 - c));
    if (n.dot(axial) < 0.0) {
        n = -n;
    }
    return t * n.normalized();
}

double geodesic_distance(const Rotation& a, const Rotation& b) {
    return log_so3(a.transpose() * b).norm();
}

Rotation euler_to_rotation(const EulerAngles& e) {
    return Rotation::about_z(e.phi) * Rotation::about_x(e.theta) * Rotation::about_z(e.psi);
}

EulerAngles rotation_to_euler(const Rotation& r) {
    const Mat3& m = r.matrix();
    if (std::abs(m(2, 2)) >= 1.0 - kEulerPoleMargin) {
        throw Error(ErrorKind::GimbalLock,
                    "rotation_to_euler: nutation angle at a pole (|R33| = " +
                        std::to_string(std::abs(m(2, 2))) + ")");
    }
    EulerAngles e;
    e.theta = std::atan2(std::hypot(m(2, 0), m(2, 1)), m(2, 2));
    e.phi = std::atan2(m(0, 2), -m(1, 2));
    e.psi = std::atan2(m(2, 0), m(2, 1));
    return e;
}

Pose pose_compose(const Pose& a, const Pose& b) {
    return {a.rotation * b.rotation, a.position + a.rotation * b.position};
}

Pose pose_inverse(const Pose& a) {
    const Rotation rt = a.rotation.transpose();
    return {rt, -(rt * a.position)};
}

Mat6 adjoint(const Pose& p) {
    const Mat3& r = p.rotation.matrix();
    Mat6 ad = Mat6::Zero();
    ad.topLeftCorner<3, 3>() = r;
    ad.bottomRightCorner<3, 3>() = r;
    ad.bottomLeftCorner<3, 3>() = hat(p.position) * r;
    return ad;
}

Mat6 adjoint_inverse(const Pose& p) {
    const Mat3 rt = p.rotation.matrix().transpose();
    Mat6 ad = Mat6::Zero();
    ad.topLeftCorner<3, 3>() = rt;
    ad.bottomRightCorner<3, 3>() = rt;
    ad.bottomLeftCorner<3, 3>() = -rt * hat(p.position);
    return ad;
}

Mat6 ad_matrix(const Vec6& xi) {
    Mat6 ad = Mat6::Zero();
    const Mat3 w = hat(xi.head<3>());
    ad.topLeftCorner<3, 3>() = w;
    ad.bottomRightCorner<3, 3>() = w;
    ad.bottomLeftCorner<3, 3>() = hat(xi.tail<3>());
    return ad;
}

Vec6 se3_bracket(const Vec6& a, const Vec6& b) {
    Vec6 out;
    const Vec3 wa = a.head<3>();
    const Vec3 wb = b.head<3>();
    out.head<3>() = wa.cross(wb);
    out.tail<3>() = wa.cross(b.tail<3>()) - wb.cross(a.tail<3>());
    return out;
}

Pose exp_se3(const Vec6& xi) {
    const Vec3 w = xi.head<3>();
    const double t = w.norm();
    double a = 0.0;
    double b = 0.0;  // (1 - cos t)/t^2
    rodrigues_coefficients(t, a, b);
    double c = 0.0;  // (t - sin t)/t^3
    if (t < 0.1) {
        const double t2 = t * t;
        c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362880.0;
    } else {
        c = (t - std::sin(t)) / (t * t * t);
    }
    const Mat3 s = hat(w);
    const Mat3 v = Mat3::Identity() + b * s + c * s * s;
    return {Rotation(Mat3::Identity() + a * s + b * s * s, Rotation::Unchecked{}), v * xi.tail<3>()};
}

}  // namespace unirigid
