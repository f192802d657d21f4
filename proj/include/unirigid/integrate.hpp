// Fixed-step time integration of chart states, and trajectory simulation.
//
// Twist charts (BodyTwist, SpatialTwist) are advanced on the group:
//   LieEuler  g <- g exp(h nu0), u <- u + h u'.
//   RK4       classical RK4 in exponential coordinates centered at the
//             pre-step pose, using the full dexp^{-1} series; the pose is
//             g0 exp(Theta) with Theta the RK4-averaged coordinate increment.
//   LieRK4    Munthe-Kaas RK4 in which dexp^{-1} is truncated after the
//             first commutator:
//               Theta2 = k1/2, Theta3 = k2/2 + [k1,k2]/8, Theta4 = k3,
//               Theta  = (k1 + 2 k2 + 2 k3 + k4)/6 + [k1,k4]/12,
//             with k_i = h nu_i and brackets signed for the right
//             (body-frame) trivialization. This truncation keeps 4th order.
// The EulerCoM chart is a coordinate chart: all integrators act on the
// Euler angles and origin position as ordinary coordinates, and LieRK4
// coincides with RK4. No step re-orthogonalizes a rotation.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "unirigid/gauss.hpp"

namespace unirigid {

enum class IntegratorId { RK4, LieEuler, LieRK4 };
enum class Formulation { NewtonEuler, Kirchhoff, Lagrange, Gauss };

std::string_view to_string(IntegratorId id);
std::string_view to_string(Formulation f);

/// Chart the formulation integrates in.
ChartId formulation_chart(Formulation f);

/// u' as a function of time and chart state.
using ChartRhs = std::function<Vec6(double t, const ChartState& state)>;

/// Right-trivialized inverse differential of exp on se(3): the rate of
/// exponential coordinates Theta whose pose g0 exp(Theta) moves with body twist nu.
Vec6 dexp_inv_right(const Vec6& theta, const Vec6& nu);

ChartState step(IntegratorId integrator, ChartId chart, const ChartRhs& rhs,
                const ChartState& state, double t, double dt);

struct RunConfig {
    Formulation formulation = Formulation::Kirchhoff;
    IntegratorId integrator = IntegratorId::LieRK4;
    double dt = 1e-3;
    double t_end = 1.0;
    int sample_every = 1;
};

struct Scenario {
    std::string name;
    SpatialInertia inertia;
    Pose initial_pose;
    Twist initial_twist;  ///< body frame
    ForceModel forces;
    std::optional<FixedPointConstraint> constraint;
    RunConfig run;

    /// Space position of the pinned point, fixed by the initial pose.
    Vec3 constraint_anchor() const;
};

struct TrajectorySample {
    double t = 0.0;
    Pose pose;
    Vec6 u = Vec6::Zero();
    Twist nu;
    double energy = 0.0;  ///< kinetic + gravitational potential
    Vec3 l_spatial = Vec3::Zero();
};

using Trajectory = std::vector<TrajectorySample>;

/// Raised when integration stops early. Carries the samples recorded so far.
class SimulationAborted : public Error {
public:
    SimulationAborted(ErrorKind kind, const std::string& message, double time,
                      Trajectory partial)
        : Error(kind, message), time_(time), partial_(std::move(partial)) {}

    double time() const { return time_; }
    /// Index of the last good sample, -1 when none was recorded.
    long last_good_sample() const { return static_cast<long>(partial_.size()) - 1; }
    const Trajectory& partial() const { return partial_; }

private:
    double time_;
    Trajectory partial_;
};

/// Chart velocity and rate function for a scenario under one formulation.
ChartRhs make_rhs(const Scenario& scenario, Formulation formulation);
ChartState initial_chart_state(const Scenario& scenario, Formulation formulation);

TrajectorySample make_sample(const Scenario& scenario, ChartId chart, const ChartState& state,
                             double t);

Trajectory simulate(const Scenario& scenario, Formulation formulation, IntegratorId integrator,
                    double dt, double t_end, int sample_every = 1);

/// Largest relative deviations from the initial sample over a trajectory.
/// Momentum is taken about the constraint anchor (the space origin when
/// unconstrained); with gravity only its component along gravity is conserved
/// and compared.
struct DriftReport {
    double energy = 0.0;
    double momentum = 0.0;
};

DriftReport conservation_drift(const Scenario& scenario, const Trajectory& trajectory);

/// Uses scenario.run for the formulation, integrator and step settings.
Trajectory simulate(const Scenario& scenario);

}  // namespace unirigid
