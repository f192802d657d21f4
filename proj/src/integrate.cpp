#include "unirigid/integrate.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace unirigid {

std::string_view to_string(IntegratorId id) {
    switch (id) {
        case IntegratorId::RK4: return "rk4";
        case IntegratorId::LieEuler: return "lie-euler";
        case IntegratorId::LieRK4: return "lie-rk4";
    }
    return "unknown";
}

std::string_view to_string(Formulation f) {
    switch (f) {
        case Formulation::NewtonEuler: return "newton-euler";
        case Formulation::Kirchhoff: return "kirchhoff";
        case Formulation::Lagrange: return "lagrange";
        case Formulation::Gauss: return "gauss";
    }
    return "unknown";
}

ChartId formulation_chart(Formulation f) {
    return f == Formulation::Lagrange ? ChartId::EulerCoM : ChartId::BodyTwist;
}

Vec6 dexp_inv_right(const Vec6& theta, const Vec6& nu) {
    // sum_k B_k / k! ad_{-Theta}^k nu; odd Bernoulli numbers beyond B_1 vanish.
    static constexpr double kEven[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                       -1.0 / 1209600.0, 1.0 / 47900160.0};
    const Mat6 ad = ad_matrix(theta);
    Vec6 out = nu + 0.5 * (ad * nu);
    Vec6 even = ad * (ad * nu);
    for (double coeff : kEven) {
        out += coeff * even;
        even = ad * (ad * even);
    }
    return out;
}

namespace {

struct Coords {
    EulerAngles e;
    Vec3 x;
};

Coords euler_coords(const Pose& pose) {
    return {chart_euler_angles(pose), pose.position};
}

ChartState euler_state(const Coords& c, const Vec6& u) {
    if (!(c.e.theta > 0.0 && c.e.theta < std::numbers::pi) ||
        std::abs(std::sin(c.e.theta)) < kGimbalSinTol) {
        throw Error(ErrorKind::GimbalLock, "Euler chart left its valid region (theta = " +
                                               std::to_string(c.e.theta) + ")");
    }
    return {{euler_to_rotation(c.e), c.x}, u};
}

Coords displaced(const Coords& c, const Vec6& dq) {
    return {{c.e.phi + dq[0], c.e.theta + dq[1], c.e.psi + dq[2]}, c.x + dq.tail<3>()};
}

// One step as increments of the state, so callers can accumulate them with
// compensated summation. For the Euler chart `coords` holds (phi, theta, psi, x);
// otherwise `rotation` holds R1 - R0.
struct Increment {
    Vec6 coords = Vec6::Zero();
    Mat3 rotation = Mat3::Zero();
    Vec3 position = Vec3::Zero();
    Vec6 u = Vec6::Zero();
};

Increment euler_chart_increment(IntegratorId integrator, const ChartRhs& rhs, const Coords& q0,
                                const Vec6& u0, double t, double h) {
    Increment inc;
    const Vec6 a1 = rhs(t, euler_state(q0, u0));
    if (integrator == IntegratorId::LieEuler) {
        inc.coords = h * u0;
        inc.u = h * a1;
        return inc;
    }
    const Vec6 u2 = u0 + 0.5 * h * a1;
    const Vec6 a2 = rhs(t + 0.5 * h, euler_state(displaced(q0, 0.5 * h * u0), u2));
    const Vec6 u3 = u0 + 0.5 * h * a2;
    const Vec6 a3 = rhs(t + 0.5 * h, euler_state(displaced(q0, 0.5 * h * u2), u3));
    const Vec6 u4 = u0 + h * a3;
    const Vec6 a4 = rhs(t + h, euler_state(displaced(q0, h * u3), u4));
    inc.coords = (h / 6.0) * (u0 + 2.0 * u2 + 2.0 * u3 + u4);
    inc.u = (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    return inc;
}

// Increment of g0 -> g0 exp(theta).
void set_body_motion(Increment& inc, const Pose& g0, const Vec6& theta) {
    const Mat3& r0 = g0.rotation.matrix();
    inc.rotation = r0 * expm1_so3(theta.head<3>());
    inc.position = r0 * exp_se3(theta).position;
}

Increment twist_chart_increment(IntegratorId integrator, ChartId chart, const ChartRhs& rhs,
                                const ChartState& s0, double t, double h) {
    const auto body = [chart](const ChartState& s) {
        return Vec6(chart_eval(chart, s.pose, s.u).phi * s.u);
    };
    const auto at = [&s0](const Vec6& theta, const Vec6& u) {
        return ChartState{pose_compose(s0.pose, exp_se3(theta)), u};
    };
    const Vec6& u0 = s0.u;
    const Vec6 a1 = rhs(t, s0);
    Increment inc;

    if (integrator == IntegratorId::LieEuler) {
        if (chart == ChartId::BodyTwist) {
            set_body_motion(inc, s0.pose, h * u0);
        } else {
            const Pose g1 = advance_pose(chart, s0, h);
            inc.rotation = g1.rotation.matrix() - s0.pose.rotation.matrix();
            inc.position = g1.position - s0.pose.position;
        }
        inc.u = h * a1;
        return inc;
    }

    if (integrator == IntegratorId::LieRK4) {
        const Vec6 k1 = h * body(s0);
        const ChartState s2 = at(0.5 * k1, u0 + 0.5 * h * a1);
        const Vec6 k2 = h * body(s2);
        const Vec6 a2 = rhs(t + 0.5 * h, s2);
        const ChartState s3 = at(0.5 * k2 + se3_bracket(k1, k2) / 8.0, u0 + 0.5 * h * a2);
        const Vec6 k3 = h * body(s3);
        const Vec6 a3 = rhs(t + 0.5 * h, s3);
        const ChartState s4 = at(k3, u0 + h * a3);
        const Vec6 k4 = h * body(s4);
        const Vec6 a4 = rhs(t + h, s4);
        set_body_motion(inc, s0.pose,
                        (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0 + se3_bracket(k1, k4) / 12.0);
        inc.u = (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        return inc;
    }

    // Classical RK4 on (Theta, u) with Theta' = dexp^{-1}_{-Theta}(nu).
    const Vec6 d1 = body(s0);
    const Vec6 th2 = 0.5 * h * d1;
    const ChartState s2 = at(th2, u0 + 0.5 * h * a1);
    const Vec6 d2 = dexp_inv_right(th2, body(s2));
    const Vec6 a2 = rhs(t + 0.5 * h, s2);
    const Vec6 th3 = 0.5 * h * d2;
    const ChartState s3 = at(th3, u0 + 0.5 * h * a2);
    const Vec6 d3 = dexp_inv_right(th3, body(s3));
    const Vec6 a3 = rhs(t + 0.5 * h, s3);
    const Vec6 th4 = h * d3;
    const ChartState s4 = at(th4, u0 + h * a3);
    const Vec6 d4 = dexp_inv_right(th4, body(s4));
    const Vec6 a4 = rhs(t + h, s4);
    set_body_motion(inc, s0.pose, (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4));
    inc.u = (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    return inc;
}

void check_step(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorKind::InvalidArgument, "step size must be positive and finite");
    }
}

// Neumaier summation of increments into (hi, lo) pairs.
template <typename T>
struct Compensated {
    T hi;
    T lo;

    explicit Compensated(const T& v) : hi(v), lo(T::Zero()) {}

    void add(const T& inc) {
        double* h = hi.data();
        double* l = lo.data();
        const double* d = inc.data();
        for (Eigen::Index k = 0; k < hi.size(); ++k) {
            const double sum = h[k] + d[k];
            l[k] += std::abs(h[k]) >= std::abs(d[k]) ? (h[k] - sum) + d[k] : (d[k] - sum) + h[k];
            h[k] = sum;
        }
    }
    T value() const { return hi + lo; }
};

// Integration state carried across steps by simulate().
class Stepper {
public:
    Stepper(IntegratorId integrator, ChartId chart, const ChartRhs& rhs, const ChartState& s0)
        : integrator_(integrator),
          chart_(chart),
          rhs_(rhs),
          state_(s0),
          rot_(s0.pose.rotation.matrix()),
          pos_(s0.pose.position),
          u_(s0.u),
          coords_(Vec6::Zero()) {
        if (chart_ == ChartId::EulerCoM) {
            const Coords c = euler_coords(s0.pose);
            coords_ = Compensated<Vec6>((Vec6() << c.e.phi, c.e.theta, c.e.psi, c.x).finished());
            state_ = euler_state(coords(), s0.u);
        }
    }

    const ChartState& state() const { return state_; }

    void advance(double t, double h) {
        if (chart_ == ChartId::EulerCoM) {
            const Increment inc = euler_chart_increment(integrator_, rhs_, coords(), state_.u, t, h);
            coords_.add(inc.coords);
            wrap_angle(0);
            wrap_angle(2);
            u_.add(inc.u);
            state_ = euler_state(coords(), u_.value());
            return;
        }
        const Increment inc = twist_chart_increment(integrator_, chart_, rhs_, state_, t, h);
        rot_.add(inc.rotation);
        pos_.add(inc.position);
        u_.add(inc.u);
        const Mat3 r = rot_.value();
        if (!r.allFinite()) {
            throw Error(ErrorKind::NonFiniteState, "rotation became non-finite");
        }
        state_ = {{Rotation(r), pos_.value()}, u_.value()};
    }

private:
    // Keeps phi and psi in [-pi, pi] so their rounding stays at the ulp of pi.
    void wrap_angle(int index) {
        constexpr double kTwoPiHi = 6.283185307179586;
        constexpr double kTwoPiLo = 2.4492935982947064e-16;
        const double turns = std::round(coords_.hi[index] / kTwoPiHi);
        if (turns == 0.0) {
            return;
        }
        const double p = turns * kTwoPiHi;
        const double p_err = std::fma(turns, kTwoPiHi, -p);
        for (double part : {-p, -p_err, -turns * kTwoPiLo}) {
            Vec6 d = Vec6::Zero();
            d[index] = part;
            coords_.add(d);
        }
    }

    Coords coords() const {
        const Vec6 q = coords_.value();
        return {{q[0], q[1], q[2]}, q.tail<3>()};
    }

    IntegratorId integrator_;
    ChartId chart_;
    const ChartRhs& rhs_;
    ChartState state_;
    Compensated<Mat3> rot_;
    Compensated<Vec3> pos_;
    Compensated<Vec6> u_;
    Compensated<Vec6> coords_;
};

}  // namespace

ChartState step(IntegratorId integrator, ChartId chart, const ChartRhs& rhs,
                const ChartState& state, double t, double dt) {
    check_step(dt);
    if (chart == ChartId::EulerCoM) {
        const Coords q0 = euler_coords(state.pose);
        const Increment inc = euler_chart_increment(integrator, rhs, q0, state.u, t, dt);
        return euler_state(displaced(q0, inc.coords), state.u + inc.u);
    }
    const Increment inc = twist_chart_increment(integrator, chart, rhs, state, t, dt);
    return {{Rotation(state.pose.rotation.matrix() + inc.rotation), state.pose.position + inc.position},
            state.u + inc.u};
}

Vec3 Scenario::constraint_anchor() const {
    if (!constraint) {
        return Vec3::Zero();
    }
    return initial_pose.position + initial_pose.rotation * constraint->r_b;
}

ChartRhs make_rhs(const Scenario& scenario, Formulation formulation) {
    const SpatialInertia& si = scenario.inertia;
    const ForceModel& forces = scenario.forces;
    const auto& con = scenario.constraint;
    const auto wrench_at = [&si, &forces](double t, const ChartState& s) {
        const Twist nu = Twist::from_vector(s.u, Frame::Body);
        const Vec6 f = body_wrench(si, forces, t, s.pose, nu);
        return Wrench{f.head<3>(), f.tail<3>(), Frame::Body};
    };

    if (con && (formulation == Formulation::NewtonEuler || formulation == Formulation::Kirchhoff)) {
        throw Error(ErrorKind::InvalidArgument,
                    std::string("formulation ") + std::string(to_string(formulation)) +
                        " does not support constraints; use gauss or lagrange");
    }

    switch (formulation) {
        case Formulation::NewtonEuler:
            if (si.c.norm() > 1e-12) {
                throw Error(ErrorKind::FrameNotAtCoM,
                            "newton-euler formulation requires com = 0");
            }
            return [&si, wrench_at](double t, const ChartState& s) {
                return newton_euler_rhs(si, Twist::from_vector(s.u, Frame::Body), wrench_at(t, s));
            };
        case Formulation::Kirchhoff:
            return [&si, wrench_at](double t, const ChartState& s) {
                return kirchhoff_rhs(si, Twist::from_vector(s.u, Frame::Body), wrench_at(t, s));
            };
        case Formulation::Lagrange:
            if (con) {
                const FixedPointConstraint fp = *con;
                return [&si, &forces, fp](double t, const ChartState& s) {
                    return pinned_euler_rhs(si, fp, s, forces, t);
                };
            }
            return [&si, &forces](double t, const ChartState& s) {
                return chart_rhs(ChartId::EulerCoM, si, s, forces, t);
            };
        case Formulation::Gauss: {
            std::optional<FixedPointConstraint> fp = con;
            const Vec3 anchor = scenario.constraint_anchor();
            return [&si, wrench_at, fp, anchor](double t, const ChartState& s) {
                const Twist nu = Twist::from_vector(s.u, Frame::Body);
                const AccelConstraint ac =
                    fp ? fixed_point_constraint(*fp, nu,
                                                fixed_point_position_drift(*fp, s.pose, anchor))
                       : AccelConstraint::none();
                return constrained_accel(si, nu, wrench_at(t, s), ac).nu_dot;
            };
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown formulation");
}

ChartState initial_chart_state(const Scenario& scenario, Formulation formulation) {
    const ChartId chart = formulation_chart(formulation);
    return {scenario.initial_pose,
            chart_from_body_twist(chart, scenario.initial_pose, scenario.initial_twist)};
}

TrajectorySample make_sample(const Scenario& scenario, ChartId chart, const ChartState& state,
                             double t) {
    TrajectorySample s;
    s.t = t;
    s.pose = state.pose;
    s.u = state.u;
    s.nu = body_twist(chart, state);
    s.energy = kinetic_energy(scenario.inertia, s.nu) +
               potential_energy(scenario.inertia, scenario.forces, state.pose);
    s.l_spatial = spatial_angular_momentum(scenario.inertia, state.pose, s.nu);
    return s;
}

namespace {

bool finite_state(const ChartState& s) {
    return s.u.allFinite() && s.pose.position.allFinite() && s.pose.rotation.matrix().allFinite();
}

std::string time_text(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", t);
    return buf;
}

}  // namespace

Trajectory simulate(const Scenario& scenario, Formulation formulation, IntegratorId integrator,
                    double dt, double t_end, int sample_every) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw Error(ErrorKind::InvalidArgument, "dt must be positive");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw Error(ErrorKind::InvalidArgument, "t_end must be non-negative");
    }
    if (sample_every < 1) {
        throw Error(ErrorKind::InvalidArgument, "sample_every must be >= 1");
    }
    const ChartId chart = formulation_chart(formulation);
    const ChartRhs rhs = make_rhs(scenario, formulation);
    const long n_steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));

    Trajectory out;
    std::optional<Stepper> stepper;
    try {
        stepper.emplace(integrator, chart, rhs, initial_chart_state(scenario, formulation));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::GimbalLock) {
            throw SimulationAborted(e.kind(), "gimbal lock at t=0: " + std::string(e.what()), 0.0,
                                    {});
        }
        throw;
    }
    out.push_back(make_sample(scenario, chart, stepper->state(), 0.0));

    for (long i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double t_next = i + 1 == n_steps ? std::max(t_end, t) : static_cast<double>(i + 1) * dt;
        const double h = t_next - t;
        try {
            stepper->advance(t, h);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::GimbalLock) {
                throw SimulationAborted(ErrorKind::GimbalLock,
                                        "gimbal lock at t=" + time_text(t) + ": " + e.what(), t,
                                        std::move(out));
            }
            throw SimulationAborted(e.kind(),
                                    "integration failed at t=" + time_text(t) + ": " + e.what(), t,
                                    std::move(out));
        }
        const ChartState& state = stepper->state();
        if (!finite_state(state)) {
            throw SimulationAborted(ErrorKind::NonFiniteState,
                                    "non-finite state at t=" + time_text(t_next), t_next,
                                    std::move(out));
        }
        if ((i + 1) % sample_every == 0 || i + 1 == n_steps) {
            out.push_back(make_sample(scenario, chart, state, t_next));
        }
    }
    return out;
}

Trajectory simulate(const Scenario& scenario) {
    const RunConfig& r = scenario.run;
    return simulate(scenario, r.formulation, r.integrator, r.dt, r.t_end, r.sample_every);
}

DriftReport conservation_drift(const Scenario& scenario, const Trajectory& trajectory) {
    DriftReport d;
    if (trajectory.empty()) {
        return d;
    }
    const Vec3 anchor = scenario.constraint_anchor();
    const Vec3& g = scenario.forces.gravity_spatial;
    const auto conserved = [&](const TrajectorySample& s) -> Vec3 {
        const Vec3 linear = s.pose.rotation * momentum(scenario.inertia, s.nu).p;
        const Vec3 l = s.l_spatial - anchor.cross(linear);
        if (g.norm() == 0.0) {
            return l;
        }
        const Vec3 axis = g.normalized();
        return axis.dot(l) * axis;
    };
    const double e0 = trajectory.front().energy;
    const Vec3 l0 = conserved(trajectory.front());
    const double e_scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
    const double l_scale = l0.norm() > 0.0 ? l0.norm() : 1.0;
    for (const auto& s : trajectory) {
        d.energy = std::max(d.energy, std::abs(s.energy - e0) / e_scale);
        d.momentum = std::max(d.momentum, (conserved(s) - l0).norm() / l_scale);
    }
    return d;
}

}  // namespace unirigid
