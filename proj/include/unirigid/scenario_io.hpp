// Scenario JSON ingestion and trajectory CSV output.
//
// Scenario schema (all vectors are 3-element arrays; unknown keys are rejected):
//
//   {
//     "name": "euler-top",
//     "inertia": {
//       "mass": 1.0,
//       "principal": [1, 2, 3]            // or "tensor": [[..], [..], [..]]
//       "com": [0, 0, 0]                  // optional, body frame
//     },
//     "initial": {                        // optional block, zeros by default
//       "orientation": {"quaternion": [w, x, y, z]}   // or {"euler_zxz": [phi, theta, psi]}
//       "position": [0, 0, 0],
//       "omega": [0, 0, 0],               // body frame; or "euler_rates": [phi', theta', psi']
//       "vel": [0, 0, 0]                  // body frame
//     },
//     "forces": {                         // optional
//       "gravity": [0, 0, -9.81],
//       "body_wrench": {"torque": [..], "force": [..]},
//       "builtin": [{"name": "angular_damping", "coefficient": 0.1},
//                   {"name": "linear_damping", "coefficient": 0.1}]
//     },
//     "constraint": {                     // optional
//       "fixed_point": {"r_b": [0, 0, -0.5], "baumgarte_alpha": 0, "baumgarte_beta": 0}
//     },
//     "run": {"formulation": "kirchhoff", "integrator": "lie-rk4",
//             "dt": 0.001, "t_end": 10, "sample_every": 1}
//   }
//
// With a fixed point, an omitted "position" places the pinned point at the
// space origin and an omitted "vel" is set to the pin-consistent -omega x r_b.
#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "unirigid/integrate.hpp"

namespace unirigid {

/// Throws ParseError (with line or field) or ValidationError (naming the invariant).
Scenario parse_scenario(std::string_view text, std::vector<std::string>* warnings = nullptr);
Scenario load_scenario(const std::string& path, std::vector<std::string>* warnings = nullptr);

Formulation parse_formulation(std::string_view name);
IntegratorId parse_integrator(std::string_view name);

/// Unit quaternion (w, x, y, z) with w >= 0.
Eigen::Vector4d rotation_to_quaternion(const Rotation& r);

inline constexpr const char* kCsvHeader =
    "t,qw,qx,qy,qz,x,y,z,wx,wy,wz,vx,vy,vz,energy,Lx,Ly,Lz";

void write_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace unirigid
