// In-code twins of the scenario files shipped under scenarios/.
#pragma once

#include "unirigid/integrate.hpp"

namespace unirigid::builtin {

/// Heavy symmetric top used by the heavy-top scenarios.
struct HeavyTop {
    double mass = 1.0;
    double j1 = 0.6;  ///< transverse moment about the CoM
    double j3 = 1.0;  ///< axial moment
    double l = 0.5;   ///< pin-to-CoM distance; pin at r_b = (0, 0, -l)
    double gravity = 9.81;
    double theta0 = 0.5;
    double omega3 = 10.0;

    double j1_pivot() const { return j1 + mass * l * l; }
};

Scenario free_sphere();
/// J = diag(1, 2, 3), omega0 = (0.01, 1, 0.01), torque-free, 10 s.
Scenario euler_top();
/// As euler_top over 20 s.
Scenario dzhanibekov();
/// J = diag(1, 1, 2), omega0 = (0.3, 0, 1), torque-free, 10 s.
Scenario axisymmetric_free();
/// Steady precession at the given root (0 = slow, 1 = fast) of the precession quadratic.
Scenario heavy_top_steady(int root = 0, const HeavyTop& top = {});
Scenario heavy_top_generic(const HeavyTop& top = {});
/// Spins about body x from theta = 0.05 so the Euler chart hits its pole at t = 0.05.
Scenario gimbal_crossing();

}  // namespace unirigid::builtin
