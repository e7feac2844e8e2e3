#pragma once

#include <functional>
#include <map>
#include <string>

#include "metamorph/airframe.hpp"
#include "metamorph/dynamics.hpp"
#include "metamorph/environment.hpp"
#include "metamorph/polar.hpp"
#include "metamorph/types.hpp"

namespace metamorph {

struct AeroError : std::runtime_error {
    explicit AeroError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Commanded wing joint angles and per-thruster thrust magnitudes at one
/// instant.
struct ActuationInput {
    double epsilon_p = 0.0;  // rad, port joint about its outward hinge axis
    double epsilon_s = 0.0;  // rad, starboard joint
    std::map<std::string, double> thrusts;  // thruster id -> N

    double epsilon(Side s) const { return s == Side::Port ? epsilon_p : epsilon_s; }
    double thrust(const std::string& id) const {
        auto it = thrusts.find(id);
        return it == thrusts.end() ? 0.0 : it->second;
    }

    /// Joint range guard and thrust sanity. max_epsilon defaults to the
    /// mechanical quarter-turn limit.
    void validate(double max_epsilon = 0.5 * kPi) const;
};

/// Local flow state of one wing segment.
struct SegmentAeroState {
    Vec3 v_local = Vec3::Zero();  // m/s, body frame, air-relative at the AC
    double v_air = 0.0;           // |v_local|
    double alpha_kin = 0.0;       // rad
    double alpha_eff = 0.0;       // rad
    double reynolds = 0.0;
    double q_dyn = 0.0;           // Pa
    AeroCoeffs coeffs;
};

enum class AirfoilMode { Auto, ForceCruise, ForceHover };

/// The cruise and hover coefficient surfaces plus the joint-angle schedule
/// that selects between them: pure cruise below cruise_max_eps, pure hover
/// above hover_min_eps, linear blend between.
struct PolarSet {
    PolarSurface cruise;
    PolarSurface hover;
    double cruise_max_eps = 25.0 * kDegToRad;
    double hover_min_eps = 50.0 * kDegToRad;

    AeroCoeffs lookup(double epsilon, double reynolds, double alpha,
                      AirfoilMode mode = AirfoilMode::Auto) const;
};

/// Air-relative velocity at the segment AC in the body frame:
/// v + w x r_ac - R_world_to_body * wind.
Vec3 segment_velocity(const RigidBodyState& state, const SegmentGeometry& seg,
                      const Vec3& wind_world);

/// Angle of the relative wind in the segment x-z plane. When the in-plane
/// speed is below kStagnantSpeed the angle is defined as zero (forces
/// vanish with the dynamic pressure anyway).
inline constexpr double kStagnantSpeed = 1e-6;  // m/s
double kinematic_alpha(const Vec3& v_local);

/// Kinematic alpha corrected for the commanded joint angle of the
/// segment's side (opposite signs on the two sides, outward hinge axes)
/// and for local geometric twist. Wrapped to [-pi, pi].
double effective_alpha(double alpha_kin, Side side, const ActuationInput& act,
                       double twist = 0.0);

/// Full local flow state for one segment.
SegmentAeroState compute_segment_aero(const RigidBodyState& state, const SegmentGeometry& seg,
                                      const ActuationInput& act, const PolarSet& polars,
                                      const Environment& env,
                                      AirfoilMode mode = AirfoilMode::Auto);

/// Lift and drag in the local wind frame, rotated to the body frame by the
/// kinematic alpha, plus the moment of the force about the CoM and the
/// section pitching moment. The hinge line runs through the segment AC, so
/// r_ac and the pitching-moment axis are unchanged by the joint rotation.
LoadSet segment_loads(const SegmentGeometry& seg, const SegmentAeroState& aero);

/// Per-segment visitor in the fixed evaluation order: root to tip, port
/// then starboard within each index.
using SegmentVisitor =
    std::function<void(const SegmentGeometry&, const SegmentAeroState&, const LoadSet&)>;
void for_each_segment_aero(const RigidBodyState& state, const Airframe& airframe,
                           const ActuationInput& act, const PolarSet& polars,
                           const Environment& env, AirfoilMode mode, const SegmentVisitor& fn);

/// Sum of the segment loads over both wings. Port and starboard segments
/// of equal index are added as a pair before accumulating, which keeps the
/// total bit-exact under a port/starboard mirror.
LoadSet total_aero_loads(const RigidBodyState& state, const Airframe& airframe,
                         const ActuationInput& act, const PolarSet& polars,
                         const Environment& env, AirfoilMode mode = AirfoilMode::Auto);

}  // namespace metamorph
