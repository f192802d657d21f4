#include "unirigid/charts.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <string>

namespace unirigid {

Vec6 Twist::as_vector() const {
    Vec6 v;
    v << omega, vel;
    return v;
}

Twist Twist::from_vector(const Vec6& v, Frame frame) {
    return {v.head<3>(), v.tail<3>(), frame};
}

std::string_view to_string(ChartId id) {
    switch (id) {
        case ChartId::BodyTwist: return "BodyTwist";
        case ChartId::SpatialTwist: return "SpatialTwist";
        case ChartId::EulerCoM: return "EulerCoM";
    }
    return "Unknown";
}

EulerAngles chart_euler_angles(const Pose& pose) {
    const EulerAngles e = rotation_to_euler(pose.rotation);
    if (std::abs(std::sin(e.theta)) < kGimbalSinTol) {
        throw Error(ErrorKind::GimbalLock, "Euler chart singular: |sin(theta)| below tolerance");
    }
    return e;
}

namespace {

// omega_body = B(theta, psi) * (phi', theta', psi')
Mat3 euler_rate_matrix(double theta, double psi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(psi), cp = std::cos(psi);
    Mat3 b;
    b << st * sp, cp, 0.0,
         st * cp, -sp, 0.0,
         ct, 0.0, 1.0;
    return b;
}

Mat3 euler_rate_matrix_dot(double theta, double psi, double theta_dot, double psi_dot) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(psi), cp = std::cos(psi);
    Mat3 d_theta;
    d_theta << ct * sp, 0.0, 0.0,
               ct * cp, 0.0, 0.0,
               -st, 0.0, 0.0;
    Mat3 d_psi;
    d_psi << st * cp, -sp, 0.0,
             -st * sp, -cp, 0.0,
             0.0, 0.0, 0.0;
    return d_theta * theta_dot + d_psi * psi_dot;
}

}  // namespace

ChartEval chart_eval(ChartId id, const Pose& pose, const Vec6& u) {
    ChartEval out;
    switch (id) {
        case ChartId::BodyTwist:
            out.phi.setIdentity();
            out.phi_dot.setZero();
            break;
        case ChartId::SpatialTwist: {
            // d/dt Ad(g)^{-1} = -ad(nu) Ad(g)^{-1}
            out.phi = adjoint_inverse(pose);
            const Vec6 nu = out.phi * u;
            out.phi_dot = -ad_matrix(nu) * out.phi;
            break;
        }
        case ChartId::EulerCoM: {
            const EulerAngles e = chart_euler_angles(pose);
            const Mat3 b = euler_rate_matrix(e.theta, e.psi);
            const Mat3 rt = pose.rotation.matrix().transpose();
            const Vec3 omega = b * u.head<3>();
            out.phi.setZero();
            out.phi.topLeftCorner<3, 3>() = b;
            out.phi.bottomRightCorner<3, 3>() = rt;
            out.phi_dot.setZero();
            out.phi_dot.topLeftCorner<3, 3>() = euler_rate_matrix_dot(e.theta, e.psi, u[1], u[2]);
            // d/dt R^T = -hat(omega) R^T
            out.phi_dot.bottomRightCorner<3, 3>() = -hat(omega) * rt;
            break;
        }
    }
    return out;
}

Twist body_twist(ChartId id, const ChartState& state) {
    const ChartEval ev = chart_eval(id, state.pose, state.u);
    return Twist::from_vector(ev.phi * state.u, Frame::Body);
}

Vec6 chart_from_body_twist(ChartId id, const Pose& pose, const Twist& nu) {
    if (nu.frame != Frame::Body) {
        throw Error(ErrorKind::InvalidArgument, "chart_from_body_twist expects a body-frame twist");
    }
    const Vec6 v = nu.as_vector();
    if (id == ChartId::BodyTwist) {
        return v;
    }
    const Mat6 phi = chart_eval(id, pose, Vec6::Zero()).phi;
    const Eigen::JacobiSVD<Mat6> svd(phi);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(5);
    if (!(cond <= kMaxChartCondition)) {
        throw Error(ErrorKind::IllConditioned,
                    "chart matrix condition estimate " + std::to_string(cond) + " exceeds limit");
    }
    if (id == ChartId::SpatialTwist) {
        return adjoint(pose) * v;
    }
    return phi.partialPivLu().solve(v);
}

Pose advance_pose(ChartId id, const ChartState& state, double dt) {
    switch (id) {
        case ChartId::BodyTwist:
            return pose_compose(state.pose, exp_se3(state.u * dt));
        case ChartId::SpatialTwist:
            return pose_compose(exp_se3(state.u * dt), state.pose);
        case ChartId::EulerCoM: {
            EulerAngles e = chart_euler_angles(state.pose);
            e.phi += dt * state.u[0];
            e.theta += dt * state.u[1];
            e.psi += dt * state.u[2];
            if (!(e.theta > 0.0 && e.theta < std::numbers::pi) ||
                std::abs(std::sin(e.theta)) < kGimbalSinTol) {
                throw Error(ErrorKind::GimbalLock, "Euler chart left its valid region (theta = " +
                                                       std::to_string(e.theta) + ")");
            }
            return {euler_to_rotation(e), state.pose.position + dt * state.u.tail<3>()};
        }
    }
    return state.pose;
}

HamelTensor hamel_coefficients(ChartId id, const Pose& pose, double step) {
    const Mat6 phi = chart_eval(id, pose, Vec6::Zero()).phi;
    const auto lu = phi.partialPivLu();

    // dphi[i] = derivative of Phi along the basis field X_i at pose.
    std::array<Mat6, 6> dphi;
    for (int i = 0; i < 6; ++i) {
        const Vec6 xi = phi.col(i);
        const Pose fwd = pose_compose(pose, exp_se3(step * xi));
        const Pose bwd = pose_compose(pose, exp_se3(-step * xi));
        dphi[i] = (chart_eval(id, fwd, Vec6::Zero()).phi - chart_eval(id, bwd, Vec6::Zero()).phi) /
                  (2.0 * step);
    }

    HamelTensor gamma{};
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            // Left-trivialized vector-field bracket [X_i, X_j].
            const Vec6 bracket = se3_bracket(phi.col(i), phi.col(j)) + dphi[i].col(j) -
                                 dphi[j].col(i);
            const Vec6 coeffs = lu.solve(bracket);
            for (int k = 0; k < 6; ++k) {
                gamma[k][i][j] = -coeffs[k];
            }
        }
    }
    return gamma;
}

}  // namespace unirigid
