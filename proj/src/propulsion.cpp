#include "metamorph/propulsion.hpp"

#include <algorithm>
#include <cmath>

namespace metamorph {

LoadSet thrust_load(const ThrusterSpec& spec, double commanded, const ActuationInput& act,
                    bool* clamped) {
    const double t = std::clamp(commanded, 0.0, spec.max_thrust);
    if (clamped != nullptr) *clamped = (t != commanded);

    const double eps = act.epsilon(spec.side);
    // Chord direction after the hinge rotation; |F| = t for any joint angle.
    const double chord_angle = -joint_alpha_sign(spec.side) * eps;
    const Vec3 dir(std::cos(chord_angle), 0.0, std::sin(chord_angle));

    LoadSet out;
    out.force = t * dir;
    // Only a chordwise mount offset moves with the joint; the hinge point
    // itself does not.
    const Vec3 offset = spec.r_thrust - spec.hinge_point;
    const Vec3 r_eff = offset.isZero() ? spec.r_thrust
                                       : Vec3(spec.hinge_point + rot_xz(chord_angle) * offset);
    out.moment = r_eff.cross(out.force);
    return out;
}

LoadSet total_thrust_loads(const std::vector<ThrusterSpec>& thrusters,
                           const ActuationInput& act) {
    // Pair port and starboard mounts so mirrored configurations cancel
    // exactly in floating point.
    std::vector<const ThrusterSpec*> port;
    std::vector<const ThrusterSpec*> starboard;
    for (const ThrusterSpec& t : thrusters) {
        (t.side == Side::Port ? port : starboard).push_back(&t);
    }
    LoadSet total;
    const std::size_t n = std::max(port.size(), starboard.size());
    for (std::size_t i = 0; i < n; ++i) {
        LoadSet pair;
        if (i < port.size()) {
            pair += thrust_load(*port[i], act.thrust(port[i]->id), act);
        }
        if (i < starboard.size()) {
            pair += thrust_load(*starboard[i], act.thrust(starboard[i]->id), act);
        }
        total += pair;
    }
    return total;
}

}  // namespace metamorph
