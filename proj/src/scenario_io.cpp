#include "unirigid/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace unirigid {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::ParseError, "field '" + field + "': " + what);
}

[[noreturn]] void invalid(const std::string& invariant, const std::string& detail = {}) {
    throw Error(ErrorKind::ValidationError,
                invariant + (detail.empty() ? std::string() : ": " + detail));
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        parse_fail(path, "expected an object");
    }
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) {
            parse_fail(join(path, item.key()), "unknown key");
        }
    }
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) {
        parse_fail(field, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        invalid(field, "not finite");
    }
    return v;
}

Vec3 vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) {
        parse_fail(field, "expected an array of 3 numbers");
    }
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]")};
}

Mat3 mat3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3) {
        parse_fail(field, "expected a 3x3 array");
    }
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
        m.row(r) = vec3(j[r], field + "[" + std::to_string(r) + "]").transpose();
    }
    return m;
}

const json* optional(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& required(const json& obj, const char* key, const std::string& path) {
    const json* j = optional(obj, key);
    if (j == nullptr) {
        parse_fail(join(path, key), "missing");
    }
    return *j;
}

SpatialInertia read_inertia(const json& j) {
    check_keys(j, "inertia", {"mass", "principal", "tensor", "com"});
    SpatialInertia si;
    si.mass = number(required(j, "mass", "inertia"), "inertia.mass");
    const json* principal = optional(j, "principal");
    const json* tensor = optional(j, "tensor");
    if ((principal != nullptr) == (tensor != nullptr)) {
        parse_fail("inertia", "exactly one of 'principal' or 'tensor' is required");
    }
    si.j = principal != nullptr ? Mat3(vec3(*principal, "inertia.principal").asDiagonal())
                                : mat3(*tensor, "inertia.tensor");
    if (const json* com = optional(j, "com")) {
        si.c = vec3(*com, "inertia.com");
    }

    if (!(si.mass > 0.0)) {
        invalid("mass", "must be positive");
    }
    try {
        si.validate();
        assemble_inertia(si);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotPositiveDefinite) {
            invalid("inertia positive definite", e.what());
        }
        throw;
    }
    return si;
}

ForceModel read_forces(const json& j) {
    check_keys(j, "forces", {"gravity", "body_wrench", "builtin"});
    ForceModel f;
    if (const json* g = optional(j, "gravity")) {
        f.gravity_spatial = vec3(*g, "forces.gravity");
    }
    if (const json* w = optional(j, "body_wrench")) {
        check_keys(*w, "forces.body_wrench", {"torque", "force"});
        if (const json* t = optional(*w, "torque")) {
            f.constant_body_wrench.torque = vec3(*t, "forces.body_wrench.torque");
        }
        if (const json* fo = optional(*w, "force")) {
            f.constant_body_wrench.force = vec3(*fo, "forces.body_wrench.force");
        }
    }
    if (const json* b = optional(j, "builtin")) {
        if (!b->is_array()) {
            parse_fail("forces.builtin", "expected an array");
        }
        double angular = 0.0;
        double linear = 0.0;
        for (std::size_t i = 0; i < b->size(); ++i) {
            const std::string path = "forces.builtin[" + std::to_string(i) + "]";
            const json& entry = (*b)[i];
            check_keys(entry, path, {"name", "coefficient"});
            const json& name = required(entry, "name", path);
            if (!name.is_string()) {
                parse_fail(path + ".name", "expected a string");
            }
            const double c = number(required(entry, "coefficient", path), path + ".coefficient");
            if (c < 0.0) {
                invalid(path + ".coefficient", "must be non-negative");
            }
            const std::string n = name.get<std::string>();
            if (n == "angular_damping") {
                angular += c;
            } else if (n == "linear_damping") {
                linear += c;
            } else {
                parse_fail(path + ".name", "unknown built-in force '" + n + "'");
            }
        }
        if (angular != 0.0 || linear != 0.0) {
            f.callback = [angular, linear](double, const Pose&, const Twist& nu) {
                return Wrench{-angular * nu.omega, -linear * nu.vel, Frame::Body};
            };
        }
    }
    return f;
}

FixedPointConstraint read_constraint(const json& j) {
    check_keys(j, "constraint", {"fixed_point"});
    const json& fpj = required(j, "fixed_point", "constraint");
    check_keys(fpj, "constraint.fixed_point", {"r_b", "baumgarte_alpha", "baumgarte_beta"});
    FixedPointConstraint fp;
    fp.r_b = vec3(required(fpj, "r_b", "constraint.fixed_point"), "constraint.fixed_point.r_b");
    if (const json* a = optional(fpj, "baumgarte_alpha")) {
        fp.baumgarte_alpha = number(*a, "constraint.fixed_point.baumgarte_alpha");
    }
    if (const json* b = optional(fpj, "baumgarte_beta")) {
        fp.baumgarte_beta = number(*b, "constraint.fixed_point.baumgarte_beta");
    }
    if (fp.baumgarte_alpha < 0.0 || fp.baumgarte_beta < 0.0) {
        invalid("constraint.fixed_point.baumgarte gains", "must be non-negative");
    }
    return fp;
}

void read_initial(const json& j, Scenario& sc, std::vector<std::string>* warnings) {
    check_keys(j, "initial", {"orientation", "position", "omega", "euler_rates", "vel"});
    std::optional<EulerAngles> euler;
    if (const json* o = optional(j, "orientation")) {
        check_keys(*o, "initial.orientation", {"quaternion", "euler_zxz"});
        const json* q = optional(*o, "quaternion");
        const json* e = optional(*o, "euler_zxz");
        if ((q != nullptr) == (e != nullptr)) {
            parse_fail("initial.orientation", "exactly one of 'quaternion' or 'euler_zxz' is required");
        }
        if (q != nullptr) {
            if (!q->is_array() || q->size() != 4) {
                parse_fail("initial.orientation.quaternion", "expected [w, x, y, z]");
            }
            Eigen::Vector4d wxyz;
            for (int i = 0; i < 4; ++i) {
                wxyz[i] = number((*q)[i], "initial.orientation.quaternion[" + std::to_string(i) + "]");
            }
            const double n = wxyz.norm();
            if (n < 1e-12) {
                invalid("initial.orientation.quaternion", "zero norm");
            }
            if (std::abs(n - 1.0) > 1e-6 && warnings != nullptr) {
                warnings->push_back("initial.orientation.quaternion: norm " + std::to_string(n) +
                                    " differs from 1 by more than 1e-6; normalized");
            }
            wxyz /= n;
            const Eigen::Quaterniond quat(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
            sc.initial_pose.rotation = Rotation(quat.toRotationMatrix());
        } else {
            const Vec3 a = vec3(*e, "initial.orientation.euler_zxz");
            euler = EulerAngles{a[0], a[1], a[2]};
            sc.initial_pose.rotation = euler_to_rotation(*euler);
        }
    }

    const json* omega = optional(j, "omega");
    const json* rates = optional(j, "euler_rates");
    if (omega != nullptr && rates != nullptr) {
        parse_fail("initial", "give either 'omega' or 'euler_rates', not both");
    }
    if (omega != nullptr) {
        sc.initial_twist.omega = vec3(*omega, "initial.omega");
    } else if (rates != nullptr) {
        if (!euler) {
            parse_fail("initial.euler_rates", "requires orientation given as 'euler_zxz'");
        }
        const Vec3 r = vec3(*rates, "initial.euler_rates");
        const double st = std::sin(euler->theta), ct = std::cos(euler->theta);
        const double sp = std::sin(euler->psi), cp = std::cos(euler->psi);
        sc.initial_twist.omega = {r[0] * st * sp + r[1] * cp, r[0] * st * cp - r[1] * sp,
                                  r[0] * ct + r[2]};
    }

    const json* position = optional(j, "position");
    const json* vel = optional(j, "vel");
    if (position != nullptr) {
        sc.initial_pose.position = vec3(*position, "initial.position");
    } else if (sc.constraint) {
        sc.initial_pose.position = -(sc.initial_pose.rotation * sc.constraint->r_b);
    }
    if (vel != nullptr) {
        sc.initial_twist.vel = vec3(*vel, "initial.vel");
    } else if (sc.constraint) {
        sc.initial_twist.vel = -sc.initial_twist.omega.cross(sc.constraint->r_b);
    }
}

RunConfig read_run(const json& j) {
    check_keys(j, "run", {"formulation", "integrator", "dt", "t_end", "sample_every"});
    RunConfig r;
    const auto text = [](const json& v, const std::string& field) {
        if (!v.is_string()) {
            parse_fail(field, "expected a string");
        }
        return v.get<std::string>();
    };
    if (const json* f = optional(j, "formulation")) {
        try {
            r.formulation = parse_formulation(text(*f, "run.formulation"));
        } catch (const Error& e) {
            parse_fail("run.formulation", e.what());
        }
    }
    if (const json* i = optional(j, "integrator")) {
        try {
            r.integrator = parse_integrator(text(*i, "run.integrator"));
        } catch (const Error& e) {
            parse_fail("run.integrator", e.what());
        }
    }
    if (const json* dt = optional(j, "dt")) {
        r.dt = number(*dt, "run.dt");
    }
    if (const json* te = optional(j, "t_end")) {
        r.t_end = number(*te, "run.t_end");
    }
    if (const json* se = optional(j, "sample_every")) {
        if (!se->is_number_integer()) {
            parse_fail("run.sample_every", "expected an integer");
        }
        r.sample_every = se->get<int>();
    }
    if (!(r.dt > 0.0)) {
        invalid("run.dt", "must be positive");
    }
    if (!(r.t_end >= 0.0)) {
        invalid("run.t_end", "must be non-negative");
    }
    if (r.sample_every < 1) {
        invalid("run.sample_every", "must be >= 1");
    }
    return r;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

Formulation parse_formulation(std::string_view name) {
    for (auto f : {Formulation::NewtonEuler, Formulation::Kirchhoff, Formulation::Lagrange,
                   Formulation::Gauss}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    throw Error(ErrorKind::InvalidArgument,
                "unknown formulation '" + std::string(name) +
                    "' (expected newton-euler, kirchhoff, lagrange or gauss)");
}

IntegratorId parse_integrator(std::string_view name) {
    for (auto i : {IntegratorId::RK4, IntegratorId::LieEuler, IntegratorId::LieRK4}) {
        if (name == to_string(i)) {
            return i;
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown integrator '" + std::string(name) +
                                                "' (expected rk4, lie-euler or lie-rk4)");
}

Scenario parse_scenario(std::string_view text, std::vector<std::string>* warnings) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " +
                        e.what());
    }
    check_keys(root, "", {"name", "inertia", "initial", "forces", "constraint", "run"});

    Scenario sc;
    if (const json* n = optional(root, "name")) {
        if (!n->is_string()) {
            parse_fail("name", "expected a string");
        }
        sc.name = n->get<std::string>();
    }
    sc.inertia = read_inertia(required(root, "inertia", ""));
    if (const json* f = optional(root, "forces")) {
        sc.forces = read_forces(*f);
    }
    if (const json* c = optional(root, "constraint")) {
        sc.constraint = read_constraint(*c);
    }
    if (const json* i = optional(root, "initial")) {
        read_initial(*i, sc, warnings);
    } else if (sc.constraint) {
        read_initial(json::object(), sc, warnings);
    }
    if (const json* r = optional(root, "run")) {
        sc.run = read_run(*r);
    }
    return sc;
}

Scenario load_scenario(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::ParseError, "cannot open scenario file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_scenario(buf.str(), warnings);
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

Eigen::Vector4d rotation_to_quaternion(const Rotation& r) {
    Eigen::Quaterniond q(r.matrix());
    q.normalize();
    Eigen::Vector4d out(q.w(), q.x(), q.y(), q.z());
    if (out[0] < 0.0) {
        out = -out;
    }
    return out;
}

void write_csv(std::ostream& out, const Trajectory& trajectory) {
    out << kCsvHeader << '\n';
    char buf[32];
    const auto put = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << (last ? '\n' : ',');
    };
    for (const auto& s : trajectory) {
        const Eigen::Vector4d q = rotation_to_quaternion(s.pose.rotation);
        put(s.t);
        for (int i = 0; i < 4; ++i) put(q[i]);
        for (int i = 0; i < 3; ++i) put(s.pose.position[i]);
        for (int i = 0; i < 3; ++i) put(s.nu.omega[i]);
        for (int i = 0; i < 3; ++i) put(s.nu.vel[i]);
        put(s.energy);
        put(s.l_spatial[0]);
        put(s.l_spatial[1]);
        put(s.l_spatial[2], true);
    }
}

}  // namespace unirigid
