// Velocity charts: configuration-dependent linear identifications of a
// 6-vector of chart velocities u with the body twist nu = Phi(q) u.
//
// Chart velocity ordering:
//   BodyTwist    u = (omega_body, v_body)       body twist itself
//   SpatialTwist u = (omega_space, v_space)     right-invariant twist, Ad(g) nu
//   EulerCoM     u = (phi', theta', psi', x')   Z-X-Z Euler rates and the
//                                               space-frame velocity of the body
//                                               origin (the CoM when c = 0)
#pragma once

#include <array>

#include "unirigid/geom3.hpp"

namespace unirigid {

enum class Frame { Body, Spatial };

struct Twist {
    Vec3 omega = Vec3::Zero();
    Vec3 vel = Vec3::Zero();
    Frame frame = Frame::Body;

    Vec6 as_vector() const;
    static Twist from_vector(const Vec6& v, Frame frame);
};

enum class ChartId { BodyTwist, SpatialTwist, EulerCoM };

inline constexpr std::array<ChartId, 3> kAllCharts = {ChartId::BodyTwist, ChartId::SpatialTwist,
                                                      ChartId::EulerCoM};

inline constexpr double kMaxChartCondition = 1e8;

std::string_view to_string(ChartId id);

struct ChartEval {
    Mat6 phi;      ///< nu = phi * u
    Mat6 phi_dot;  ///< d/dt phi along the motion generated by u
};

struct ChartState {
    Pose pose;
    Vec6 u = Vec6::Zero();
};

/// Euler angles of a pose for the EulerCoM chart; throws GimbalLock when
/// |sin(theta)| < kGimbalSinTol or the rotation sits at a pole.
EulerAngles chart_euler_angles(const Pose& pose);

ChartEval chart_eval(ChartId id, const Pose& pose, const Vec6& u);

Twist body_twist(ChartId id, const ChartState& state);

/// u = Phi^{-1} nu. Throws IllConditioned when cond(Phi) > kMaxChartCondition.
Vec6 chart_from_body_twist(ChartId id, const Pose& pose, const Twist& nu);

/// Exact flow of the chart velocity held constant for dt.
///  BodyTwist:    g <- g exp(nu dt)
///  SpatialTwist: g <- exp(xi_s dt) g
///  EulerCoM:     angles and origin position advanced linearly
Pose advance_pose(ChartId id, const ChartState& state, double dt);

/// Hamel coefficients gamma[k][i][j] of the chart basis fields X_i = Phi e_i,
/// sign convention [X_i, X_j] = -gamma^k_ij X_k. For the body-twist chart
/// these are minus the se(3) structure constants; for a holonomic chart
/// (EulerCoM) they vanish.
using HamelTensor = std::array<std::array<std::array<double, 6>, 6>, 6>;
HamelTensor hamel_coefficients(ChartId id, const Pose& pose, double step = 1e-5);

}  // namespace unirigid
