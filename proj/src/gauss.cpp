#include "unirigid/gauss.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <string>

namespace unirigid {

AccelConstraint AccelConstraint::none() {
    return {Eigen::Matrix<double, Eigen::Dynamic, 6>(0, 6), Eigen::VectorXd(0)};
}

double gauss_functional(const SpatialInertia& si, const Vec6& nu_dot_candidate,
                        const Vec6& nu_dot_free) {
    const Vec6 d = nu_dot_candidate - nu_dot_free;
    return 0.5 * d.dot(assemble_inertia(si) * d);
}

ConstrainedAccel constrained_accel(const SpatialInertia& si, const Twist& nu, const Wrench& wrench,
                                   const AccelConstraint& con) {
    const int k = con.rows();
    if (k > 6 || con.b.size() != k) {
        throw Error(ErrorKind::InvalidArgument, "constraint must have 0..6 rows and matching b");
    }
    const Vec6 free = kirchhoff_rhs(si, nu, wrench);
    if (k == 0) {
        return {free, Eigen::VectorXd(0)};
    }

    Eigen::ColPivHouseholderQR<Eigen::Matrix<double, 6, Eigen::Dynamic>> qr(con.a.transpose());
    qr.setThreshold(kConstraintRankTol);
    if (qr.rank() < k) {
        throw Error(ErrorKind::RankDeficientConstraint,
                    "constraint rows are linearly dependent (rank " + std::to_string(qr.rank()) +
                        " < " + std::to_string(k) + ")");
    }

    // Range-space elimination of the bordered system
    //   [[M, A^T], [A, 0]] (a, mu) = (M a_free, b),  lambda = -mu.
    const Eigen::LLT<Mat6> m_llt(assemble_inertia(si));
    const Eigen::Matrix<double, 6, Eigen::Dynamic> y = m_llt.solve(con.a.transpose());
    const Eigen::MatrixXd schur = con.a * y;
    const Eigen::LLT<Eigen::MatrixXd> s_llt(schur);
    if (s_llt.info() != Eigen::Success) {
        throw Error(ErrorKind::RankDeficientConstraint, "constraint Schur complement is singular");
    }
    const Eigen::VectorXd mu = s_llt.solve(con.a * free - con.b);
    return {free - y * mu, -mu};
}

Vec3 fixed_point_velocity_residual(const FixedPointConstraint& fp, const Twist& nu) {
    return nu.vel + nu.omega.cross(fp.r_b);
}

AccelConstraint fixed_point_constraint(const FixedPointConstraint& fp, const Twist& nu,
                                       const Vec3& position_drift) {
    AccelConstraint con;
    con.a.resize(3, 6);
    con.a.leftCols<3>() = -hat(fp.r_b);
    con.a.rightCols<3>() = Mat3::Identity();
    const Vec3 cv = fixed_point_velocity_residual(fp, nu);
    const double alpha = fp.baumgarte_alpha;
    const double beta = fp.baumgarte_beta;
    con.b = -nu.omega.cross(cv) - 2.0 * alpha * cv - beta * beta * position_drift;
    return con;
}

Vec3 fixed_point_position_drift(const FixedPointConstraint& fp, const Pose& pose,
                                const Vec3& anchor) {
    return pose.rotation.transpose() * (pose.position + pose.rotation * fp.r_b - anchor);
}

Vec6 pinned_euler_rhs(const SpatialInertia& si, const FixedPointConstraint& fp,
                      const ChartState& state, const ForceModel& forces, double t) {
    const ChartEval ev = chart_eval(ChartId::EulerCoM, state.pose, state.u);
    const Mat3 b = ev.phi.topLeftCorner<3, 3>();
    const Mat3 b_dot = ev.phi_dot.topLeftCorner<3, 3>();
    const Vec3 rates = state.u.head<3>();
    const Vec3 omega = b * rates;

    // Inertia about the pin, through the CoM.
    const Vec3 lever = si.c - fp.r_b;
    const Mat3 hc = hat(si.c);
    const Mat3 hl = hat(lever);
    const Mat3 j_pin = si.j + si.mass * (hl.transpose() * hl - hc.transpose() * hc);

    const Twist nu{omega, -omega.cross(fp.r_b), Frame::Body};
    const Vec6 wrench = body_wrench(si, forces, t, state.pose, nu);
    // Move the moment from the body origin to the pin.
    const Vec3 torque = wrench.head<3>() - fp.r_b.cross(wrench.tail<3>());

    const Mat3 reduced = b.transpose() * j_pin * b;
    const Vec3 rhs = b.transpose() * (torque - j_pin * (b_dot * rates) - omega.cross(j_pin * omega));
    const Vec3 rates_dot = reduced.llt().solve(rhs);

    const Vec3 omega_dot = b * rates_dot + b_dot * rates;
    const Mat3& r = state.pose.rotation.matrix();
    Vec6 out;
    out.head<3>() = rates_dot;
    out.tail<3>() = -r * (omega.cross(omega.cross(fp.r_b)) + omega_dot.cross(fp.r_b));
    return out;
}

std::array<double, 2> steady_precession_rates(double j1_pivot, double j3, double mass,
                                              double gravity, double l, double theta0,
                                              double omega3) {
    const double a = j1_pivot * std::cos(theta0);
    const double b = -j3 * omega3;
    const double c = mass * gravity * l;
    if (std::abs(a) < 1e-14) {
        throw Error(ErrorKind::InvalidArgument, "steady precession: cos(theta0) = 0");
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
        throw Error(ErrorKind::InvalidArgument,
                    "steady precession: spin too slow for a real precession rate");
    }
    // Cancellation-free form of the quadratic roots.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = q / a;
    double r2 = c / q;
    if (r1 > r2) {
        std::swap(r1, r2);
    }
    return {r1, r2};
}

}  // namespace unirigid
