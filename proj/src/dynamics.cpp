#include "unirigid/dynamics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace unirigid {

namespace {

[[noreturn]] void invalid(const std::string& what) {
    throw Error(ErrorKind::ValidationError, what);
}

void require_twist_frame(const Twist& nu) {
    if (nu.frame != Frame::Body) {
        throw Error(ErrorKind::InvalidArgument, "expected a body-frame twist");
    }
}

void require_wrench_frame(const Wrench& w) {
    if (w.frame != Frame::Body) {
        throw Error(ErrorKind::InvalidArgument, "expected a body-frame wrench");
    }
}

}  // namespace

Vec6 Wrench::as_vector() const {
    Vec6 v;
    v << torque, force;
    return v;
}

void SpatialInertia::validate() const {
    if (!std::isfinite(mass) || !j.allFinite() || !c.allFinite()) {
        invalid("inertia: non-finite entries");
    }
    if (!(mass > 0.0)) {
        invalid("mass");
    }
    if ((j - j.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        invalid("inertia symmetry");
    }
    const Vec3 l = principal_moments(j);
    const double tol = 1e-12 * std::max(1.0, l.maxCoeff());
    if (l[2] > l[0] + l[1] + tol) {
        invalid("inertia triangle inequality");
    }
}

Vec3 principal_moments(const Mat3& j) {
    const Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (j + j.transpose()),
                                                 Eigen::EigenvaluesOnly);
    const Vec3 l = es.eigenvalues();
    if (!(l[0] > 0.0)) {
        throw Error(ErrorKind::NotPositiveDefinite,
                    "inertia tensor not positive definite (smallest eigenvalue " +
                        std::to_string(l[0]) + ")");
    }
    return l;
}

Mat6 assemble_inertia(const SpatialInertia& si) {
    principal_moments(si.j);
    if (!(si.mass > 0.0)) {
        throw Error(ErrorKind::NotPositiveDefinite, "mass must be positive");
    }
    Mat6 m = Mat6::Zero();
    const Mat3 mc = si.mass * hat(si.c);
    m.topLeftCorner<3, 3>() = si.j;
    m.topRightCorner<3, 3>() = mc;
    m.bottomLeftCorner<3, 3>() = -mc;
    m.bottomRightCorner<3, 3>() = si.mass * Mat3::Identity();
    // Positive definite iff the Schur complement j - m hat(c)^T hat(c) is.
    if (Eigen::LLT<Mat6>(m).info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite,
                    "spatial inertia not positive definite (j too small for the CoM offset)");
    }
    return m;
}

Momentum momentum(const SpatialInertia& si, const Twist& nu) {
    require_twist_frame(nu);
    const Vec6 mu = assemble_inertia(si) * nu.as_vector();
    return {mu.head<3>(), mu.tail<3>()};
}

Vec6 coadjoint_term(const Vec6& nu, const Vec6& mu) {
    const Vec3 w = nu.head<3>();
    const Vec3 v = nu.tail<3>();
    const Vec3 pi = mu.head<3>();
    const Vec3 p = mu.tail<3>();
    Vec6 out;
    out << w.cross(pi) + v.cross(p), w.cross(p);
    return out;
}

Vec6 body_wrench(const SpatialInertia& si, const ForceModel& forces, double t, const Pose& pose,
                 const Twist& nu) {
    require_wrench_frame(forces.constant_body_wrench);
    const Vec3 weight = si.mass * (pose.rotation.transpose() * forces.gravity_spatial);
    Vec6 f;
    f << si.c.cross(weight), weight;
    f += forces.constant_body_wrench.as_vector();
    if (forces.callback) {
        const Wrench extra = forces.callback(t, pose, nu);
        require_wrench_frame(extra);
        f += extra.as_vector();
    }
    return f;
}

Vec6 kirchhoff_rhs(const SpatialInertia& si, const Twist& nu, const Wrench& w) {
    require_twist_frame(nu);
    require_wrench_frame(w);
    const Mat6 m = assemble_inertia(si);
    const Vec6 v = nu.as_vector();
    const Vec6 rhs = w.as_vector() - coadjoint_term(v, m * v);
    return m.llt().solve(rhs);
}

Vec6 newton_euler_rhs(const SpatialInertia& si, const Twist& nu, const Wrench& w) {
    require_twist_frame(nu);
    require_wrench_frame(w);
    if (si.c.norm() > 1e-12) {
        throw Error(ErrorKind::FrameNotAtCoM,
                    "Newton-Euler form requires the body frame at the center of mass");
    }
    principal_moments(si.j);
    const Vec3& omega = nu.omega;
    Vec6 out;
    out.head<3>() = si.j.llt().solve(w.torque - omega.cross(si.j * omega));
    out.tail<3>() = w.force / si.mass - omega.cross(nu.vel);
    return out;
}

Vec6 chart_rhs(ChartId id, const SpatialInertia& si, const ChartState& state,
               const ForceModel& forces, double t) {
    const Mat6 m = assemble_inertia(si);
    const ChartEval ev = chart_eval(id, state.pose, state.u);
    const Vec6 nu = ev.phi * state.u;
    const Vec6 f = body_wrench(si, forces, t, state.pose, Twist::from_vector(nu, Frame::Body));
    const Vec6 rhs = ev.phi.transpose() * (f - m * (ev.phi_dot * state.u) - coadjoint_term(nu, m * nu));
    if (id == ChartId::BodyTwist) {
        return m.llt().solve(rhs);
    }
    const Eigen::JacobiSVD<Mat6> svd(ev.phi);
    const auto& sv = svd.singularValues();
    if (!(sv(0) <= kMaxChartCondition * sv(5))) {
        throw Error(ErrorKind::IllConditioned, "chart matrix ill-conditioned at this state");
    }
    const Mat6 reduced = ev.phi.transpose() * m * ev.phi;
    const Eigen::LLT<Mat6> llt(0.5 * (reduced + reduced.transpose()));
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::NotPositiveDefinite, "reduced chart inertia not positive definite");
    }
    return llt.solve(rhs);
}

double kinetic_energy(const SpatialInertia& si, const Twist& nu) {
    require_twist_frame(nu);
    const Vec6 v = nu.as_vector();
    return 0.5 * v.dot(assemble_inertia(si) * v);
}

double potential_energy(const SpatialInertia& si, const ForceModel& forces, const Pose& pose) {
    return -si.mass * forces.gravity_spatial.dot(com_position(si, pose));
}

Vec3 spatial_angular_momentum(const SpatialInertia& si, const Pose& pose, const Twist& nu) {
    const Momentum mu = momentum(si, nu);
    return pose.rotation * mu.pi + pose.position.cross(pose.rotation * mu.p);
}

Vec3 com_position(const SpatialInertia& si, const Pose& pose) {
    return pose.position + pose.rotation * si.c;
}

}  // namespace unirigid
