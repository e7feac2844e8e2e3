#pragma once

#include "metamorph/aero.hpp"
#include "metamorph/airframe.hpp"
#include "metamorph/types.hpp"

namespace metamorph {

/// Idealized instantaneous thrust: the commanded magnitude is clamped to
/// [0, max_thrust] and applied along the wing chord, which points along
/// body +x at zero joint angle and tilts with the hinge rotation (opposite
/// z components on the two sides, so equal thrusts at equal joint angles
/// form a pure couple about body x in the hover attitude).
LoadSet thrust_load(const ThrusterSpec& spec, double commanded, const ActuationInput& act,
                    bool* clamped = nullptr);

/// Thrust loads of all thrusters under the commanded actuation, port and
/// starboard mounts paired before accumulating.
LoadSet total_thrust_loads(const std::vector<ThrusterSpec>& thrusters,
                           const ActuationInput& act);

}  // namespace metamorph
