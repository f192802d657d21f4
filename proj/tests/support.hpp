#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "unirigid/dynamics.hpp"

namespace unirigid::testing {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed = 12345) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }

    Vec3 vec(double scale = 1.0) {
        return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
    }

    Vec6 vec6(double scale = 1.0) {
        Vec6 v;
        v << vec(scale), vec(scale);
        return v;
    }

    Vec3 unit() {
        Vec3 v = vec();
        while (v.norm() < 1e-3) v = vec();
        return v.normalized();
    }

    Rotation rotation(double max_angle = 3.0) { return exp_so3(unit() * uniform(0.0, max_angle)); }

    Pose pose() { return {rotation(), vec(2.0)}; }

    /// Pose whose Z-X-Z nutation angle stays away from the poles.
    Pose euler_pose() {
        const EulerAngles e{uniform(-3.0, 3.0), uniform(0.3, std::numbers::pi - 0.3),
                            uniform(-3.0, 3.0)};
        return {euler_to_rotation(e), vec(2.0)};
    }

    SpatialInertia inertia(double com_scale = 0.3) {
        const double l1 = uniform(0.5, 2.0);
        const double l2 = uniform(0.5, 2.0);
        const double l3 = uniform(std::abs(l1 - l2) + 0.05, l1 + l2 - 0.05);
        const Mat3 q = rotation().matrix();
        SpatialInertia si;
        si.mass = uniform(0.5, 2.0);
        si.c = vec(com_scale);
        const Mat3 hc = hat(si.c);
        const Mat3 jc = q * Vec3(l1, l2, l3).asDiagonal() * q.transpose();
        si.j = jc + si.mass * hc.transpose() * hc;
        si.j = (0.5 * (si.j + si.j.transpose())).eval();
        return si;
    }

    Twist twist(double scale = 1.0) { return Twist::from_vector(vec6(scale), Frame::Body); }

    Wrench wrench(double scale = 1.0) { return {vec(scale), vec(scale), Frame::Body}; }

private:
    std::mt19937_64 rng_;
};

inline double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

/// Rotation as a dense matrix exponential by scaling and squaring a Taylor series.
inline Mat3 expm_reference(const Mat3& a) {
    int squarings = 0;
    double norm = a.norm();
    while (norm > 0.01) {
        norm *= 0.5;
        ++squarings;
    }
    const Mat3 scaled = a / std::pow(2.0, squarings);
    Mat3 term = Mat3::Identity();
    Mat3 sum = Mat3::Identity();
    for (int k = 1; k < 20; ++k) {
        term = (term * scaled / k).eval();
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = (sum * sum).eval();
    return sum;
}

/// 4x4 homogeneous form of a pose.
inline Eigen::Matrix4d homogeneous(const Pose& p) {
    Eigen::Matrix4d h = Eigen::Matrix4d::Identity();
    h.topLeftCorner<3, 3>() = p.rotation.matrix();
    h.topRightCorner<3, 1>() = p.position;
    return h;
}

}  // namespace unirigid::testing
