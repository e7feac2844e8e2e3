#pragma once

#include "metamorph/types.hpp"

namespace metamorph {

/// Penalty ground model constants. The normal force acts at the CoM along
/// world +z and never points downward; a horizontal velocity damper is
/// active while in contact. No friction moment, so rotation about the
/// vertical is unimpeded on the ground.
struct GroundContactParams {
    double rest_height = 0.05;        // m, CoM height at which contact begins
    double stiffness = 500.0;         // N/m
    double damping = 50.0;            // N s/m, vertical
    double horizontal_damping = 5.0;  // N s/m
};

struct Environment {
    double rho = 1.225;        // kg/m^3
    double gravity = 9.81;     // m/s^2
    double mu = 1.7894e-5;     // Pa s, dynamic viscosity
    Vec3 wind = Vec3::Zero();  // m/s, world frame
    GroundContactParams ground;
};

}  // namespace metamorph
