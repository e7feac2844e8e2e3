#include "metamorph/aero.hpp"

#include <cmath>

namespace metamorph {

void ActuationInput::validate(double max_epsilon) const {
    if (std::abs(epsilon_p) > max_epsilon || std::abs(epsilon_s) > max_epsilon) {
        throw AeroError("joint angle exceeds the mechanical range guard");
    }
    for (const auto& [id, t] : thrusts) {
        if (!std::isfinite(t) || t < 0.0) {
            throw AeroError("thrust for '" + id + "' must be finite and non-negative");
        }
    }
}

AeroCoeffs PolarSet::lookup(double epsilon, double reynolds, double alpha,
                            AirfoilMode mode) const {
    if (mode == AirfoilMode::ForceCruise) return cruise.lookup(reynolds, alpha);
    if (mode == AirfoilMode::ForceHover) return hover.lookup(reynolds, alpha);
    const double e = std::abs(epsilon);
    if (e <= cruise_max_eps) return cruise.lookup(reynolds, alpha);
    if (e >= hover_min_eps) return hover.lookup(reynolds, alpha);
    const double w = (e - cruise_max_eps) / (hover_min_eps - cruise_max_eps);
    const AeroCoeffs a = cruise.lookup(reynolds, alpha);
    const AeroCoeffs b = hover.lookup(reynolds, alpha);
    return {a.cl + w * (b.cl - a.cl), a.cd + w * (b.cd - a.cd), a.cm + w * (b.cm - a.cm)};
}

Vec3 segment_velocity(const RigidBodyState& state, const SegmentGeometry& seg,
                      const Vec3& wind_world) {
    Vec3 v = state.v + state.w.cross(seg.r_ac);
    if (!wind_world.isZero()) {
        v -= state.body_to_world().transpose() * wind_world;
    }
    return v;
}

double kinematic_alpha(const Vec3& v_local) {
    const double in_plane = std::hypot(v_local.x(), v_local.z());
    if (in_plane <= kStagnantSpeed) return 0.0;
    return std::atan2(v_local.z(), v_local.x());
}

double effective_alpha(double alpha_kin, Side side, const ActuationInput& act, double twist) {
    return wrap_pi(alpha_kin + joint_alpha_sign(side) * act.epsilon(side) + twist);
}

SegmentAeroState compute_segment_aero(const RigidBodyState& state, const SegmentGeometry& seg,
                                      const ActuationInput& act, const PolarSet& polars,
                                      const Environment& env, AirfoilMode mode) {
    SegmentAeroState a;
    a.v_local = segment_velocity(state, seg, env.wind);
    a.v_air = a.v_local.norm();
    a.alpha_kin = kinematic_alpha(a.v_local);
    a.alpha_eff = effective_alpha(a.alpha_kin, seg.side, act, seg.twist);
    a.q_dyn = 0.5 * env.rho * a.v_air * a.v_air;
    a.reynolds = env.rho * a.v_air * seg.chord / env.mu;
    a.coeffs = polars.lookup(act.epsilon(seg.side), a.reynolds, a.alpha_eff, mode);
    return a;
}

LoadSet segment_loads(const SegmentGeometry& seg, const SegmentAeroState& aero) {
    const AeroCoeffs& c = aero.coeffs;
    if (!std::isfinite(c.cl) || !std::isfinite(c.cd) || !std::isfinite(c.cm)) {
        throw AeroError("non-finite aerodynamic coefficient on segment " +
                        std::string(to_string(seg.side)) + std::to_string(seg.index));
    }
    const double lift = c.cl * aero.q_dyn * seg.area;
    const double drag = c.cd * aero.q_dyn * seg.area;
    const Vec3 f_wind(-drag, 0.0, -lift);

    LoadSet out;
    out.force = rot_xz(aero.alpha_kin) * f_wind;
    // Moment of the force about the CoM plus the section pitching moment.
    // Both axes are spanwise, so the joint rotation (about a y-parallel
    // hinge through the AC) leaves them unchanged.
    const Vec3 m_arm = seg.r_ac.cross(out.force);
    const Vec3 m_cm(0.0, c.cm * aero.q_dyn * seg.area * seg.chord, 0.0);
    out.moment = m_arm + m_cm;
    return out;
}

void for_each_segment_aero(const RigidBodyState& state, const Airframe& airframe,
                           const ActuationInput& act, const PolarSet& polars,
                           const Environment& env, AirfoilMode mode, const SegmentVisitor& fn) {
    for (int i = 1; i <= airframe.per_side(); ++i) {
        for (Side side : {Side::Port, Side::Starboard}) {
            const SegmentGeometry& seg = airframe.segment(side, i);
            const SegmentAeroState aero = compute_segment_aero(state, seg, act, polars, env, mode);
            fn(seg, aero, segment_loads(seg, aero));
        }
    }
}

LoadSet total_aero_loads(const RigidBodyState& state, const Airframe& airframe,
                         const ActuationInput& act, const PolarSet& polars,
                         const Environment& env, AirfoilMode mode) {
    LoadSet total;
    for (int i = 1; i <= airframe.per_side(); ++i) {
        // Pair the mirrored segments before accumulating so that symmetric
        // configurations cancel exactly in floating point.
        const SegmentGeometry& ps = airframe.segment(Side::Port, i);
        const SegmentGeometry& ss = airframe.segment(Side::Starboard, i);
        const LoadSet lp = segment_loads(ps, compute_segment_aero(state, ps, act, polars, env, mode));
        const LoadSet ls = segment_loads(ss, compute_segment_aero(state, ss, act, polars, env, mode));
        total += lp + ls;
    }
    return total;
}

}  // namespace metamorph
