#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "metamorph/airframe.hpp"
#include "metamorph/environment.hpp"
#include "metamorph/types.hpp"

namespace metamorph {

struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rigid-body state. Attitude is a body-to-world quaternion; Euler angles
/// are derived outputs only. Linear and angular velocity are body-frame.
struct RigidBodyState {
    Vec3 p = Vec3::Zero();       // m, world frame
    Quat q_att = Quat::Identity();
    Vec3 v = Vec3::Zero();       // m/s, body frame
    Vec3 w = Vec3::Zero();       // rad/s, body frame
    double t = 0.0;              // s

    Mat3 body_to_world() const { return q_att.normalized().toRotationMatrix(); }
    bool all_finite() const {
        return p.allFinite() && q_att.coeffs().allFinite() && v.allFinite() && w.allFinite() &&
               std::isfinite(t);
    }
};

struct StateDerivative {
    Vec3 dp = Vec3::Zero();
    Eigen::Vector4d dq = Eigen::Vector4d::Zero();  // (w, x, y, z) order
    Vec3 dv = Vec3::Zero();
    Vec3 dw = Vec3::Zero();
};

using LoadsFn = std::function<LoadSet(const RigidBodyState&)>;

/// Gravity rotated into the body frame; no moment about the CoM.
LoadSet gravity_body(const RigidBodyState& state, const MassProperties& mass,
                     const Environment& env);

/// Penalty ground reaction while the CoM is below the rest height:
/// a non-negative normal force along world +z plus a horizontal velocity
/// damper, both applied at the CoM (no contact moment).
LoadSet ground_contact(const RigidBodyState& state, const Environment& env);

/// Total external loads: forces gravity + aero + thrust, moments aero +
/// thrust (gravity has no moment about the CoM).
LoadSet sum_loads(const LoadSet& aero, const std::vector<LoadSet>& thrust,
                  const LoadSet& gravity);

/// Newton-Euler equations in the body frame plus quaternion kinematics:
///   dv = F/m - w x v
///   dw = I^-1 (M - w x I w)
///   dp = R v
///   dq = 0.5 q * (0, w)
StateDerivative derivatives(const RigidBodyState& state, const LoadSet& loads,
                            const MassProperties& mass);

/// One fixed-step RK4 step with the loads re-evaluated at every stage;
/// the quaternion is renormalized once after the step. dt must lie in
/// (0, 0.01]. Throws SimError with a state dump if the result is not
/// finite.
RigidBodyState rk4_step(const RigidBodyState& state, const LoadsFn& loads_fn, double dt,
                        const MassProperties& mass);

/// ZYX Euler angles (roll, pitch, yaw) of the body-to-world rotation.
/// Derived output for telemetry; the hover attitude is a pitch
/// singularity in this convention, which is why the state is a quaternion.
Vec3 euler_zyx(const Quat& q);

/// Body-to-world quaternion from ZYX Euler angles.
Quat quat_from_euler_zyx(double roll, double pitch, double yaw);

}  // namespace metamorph
