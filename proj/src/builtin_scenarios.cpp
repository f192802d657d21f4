#include "unirigid/builtin_scenarios.hpp"

#include <cmath>
#include <numbers>

namespace unirigid::builtin {

namespace {

Scenario torque_free(std::string name, const Vec3& principal, const Vec3& omega,
                     const EulerAngles& orientation, double t_end) {
    Scenario sc;
    sc.name = std::move(name);
    sc.inertia.mass = 1.0;
    sc.inertia.j = principal.asDiagonal();
    sc.initial_pose.rotation = euler_to_rotation(orientation);
    sc.initial_twist.omega = omega;
    sc.forces.gravity_spatial.setZero();
    sc.run = {Formulation::Kirchhoff, IntegratorId::LieRK4, 1e-3, t_end, 1};
    return sc;
}

Scenario heavy_top(std::string name, const HeavyTop& top, const EulerAngles& e,
                   const Vec3& rates) {
    Scenario sc;
    sc.name = std::move(name);
    sc.inertia.mass = top.mass;
    sc.inertia.j = Vec3(top.j1, top.j1, top.j3).asDiagonal();
    sc.forces.gravity_spatial = {0.0, 0.0, -top.gravity};
    sc.constraint = FixedPointConstraint{{0.0, 0.0, -top.l}, 0.0, 0.0};
    sc.initial_pose.rotation = euler_to_rotation(e);
    sc.initial_pose.position = -(sc.initial_pose.rotation * sc.constraint->r_b);
    const double st = std::sin(e.theta), ct = std::cos(e.theta);
    const double sp = std::sin(e.psi), cp = std::cos(e.psi);
    sc.initial_twist.omega = {rates[0] * st * sp + rates[1] * cp,
                              rates[0] * st * cp - rates[1] * sp, rates[0] * ct + rates[2]};
    sc.initial_twist.vel = -sc.initial_twist.omega.cross(sc.constraint->r_b);
    sc.run = {Formulation::Gauss, IntegratorId::LieRK4, 1e-3, 5.0, 1};
    return sc;
}

}  // namespace

Scenario free_sphere() {
    Scenario sc = torque_free("free-sphere", Vec3::Constant(0.4), {0.3, -0.2, 0.5},
                              {0.1, 1.0, 0.2}, 1.0);
    sc.initial_twist.vel = {1.0, 0.0, 0.5};
    return sc;
}

Scenario euler_top() {
    return torque_free("euler-top", {1.0, 2.0, 3.0}, {0.01, 1.0, 0.01},
                       {0.0, std::numbers::pi / 2, 0.0}, 10.0);
}

Scenario dzhanibekov() {
    Scenario sc = euler_top();
    sc.name = "dzhanibekov";
    sc.run.t_end = 20.0;
    return sc;
}

Scenario axisymmetric_free() {
    return torque_free("axisymmetric-free", {1.0, 1.0, 2.0}, {0.3, 0.0, 1.0}, {0.0, 1.0, 0.0},
                       10.0);
}

Scenario heavy_top_steady(int root, const HeavyTop& top) {
    const auto rates = steady_precession_rates(top.j1_pivot(), top.j3, top.mass, top.gravity,
                                               top.l, top.theta0, top.omega3);
    const double precession = rates.at(root == 0 ? 0 : 1);
    const double spin = top.omega3 - precession * std::cos(top.theta0);
    return heavy_top("heavy-top-steady", top, {0.0, top.theta0, 0.0}, {precession, 0.0, spin});
}

Scenario heavy_top_generic(const HeavyTop& top) {
    return heavy_top("heavy-top-generic", top, {0.0, 0.8, 0.0}, {0.5, 0.3, 8.0});
}

Scenario gimbal_crossing() {
    Scenario sc = torque_free("gimbal-crossing", {1.0, 2.0, 3.0}, {-1.0, 0.0, 0.0},
                              {0.0, 0.05, 0.0}, 1.0);
    sc.run.formulation = Formulation::Lagrange;
    sc.run.integrator = IntegratorId::RK4;
    return sc;
}

}  // namespace unirigid::builtin
