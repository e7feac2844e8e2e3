#pragma once

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace metamorph {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kRadToDeg = 180.0 / kPi;

/// Wrap an angle to [-pi, pi].
inline double wrap_pi(double a) { return std::remainder(a, 2.0 * kPi); }

// Body frame: x forward (nose), y toward starboard, z down.
// World frame: z up, gravity along world -z.
enum class Side { Port, Starboard };

inline const char* to_string(Side s) { return s == Side::Port ? "P" : "S"; }

inline Side other_side(Side s) {
    return s == Side::Port ? Side::Starboard : Side::Port;
}

/// Sign of the body-y coordinate on each wing side.
inline double lateral_sign(Side s) { return s == Side::Port ? -1.0 : 1.0; }

/// Joint-angle sign in the effective angle of attack. The wing hinge axes
/// point outward from the fuselage, so a positive joint angle pitches the
/// port leading edge down (local alpha decreases) and the starboard leading
/// edge up (local alpha increases). The same sign governs the chordwise
/// thrust direction when a wing is rotated.
inline double joint_alpha_sign(Side s) { return s == Side::Port ? -1.0 : 1.0; }

/// Rotation in the body x-z plane mapping the x axis onto
/// (cos(angle), 0, sin(angle)). Used both as the wind-to-body force
/// transformation (angle = kinematic alpha) and as the hinge rotation of a
/// wing chord (angle = signed chord angle).
inline Mat3 rot_xz(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat3 r;
    r << c, 0.0, -s,
         0.0, 1.0, 0.0,
         s, 0.0, c;
    return r;
}

/// A force and moment pair in the body frame, moments about the CoM.
/// Loads combine by vector addition only.
struct LoadSet {
    Vec3 force = Vec3::Zero();
    Vec3 moment = Vec3::Zero();

    LoadSet& operator+=(const LoadSet& o) {
        force += o.force;
        moment += o.moment;
        return *this;
    }
    friend LoadSet operator+(LoadSet a, const LoadSet& b) { return a += b; }

    bool all_finite() const {
        return force.allFinite() && moment.allFinite();
    }
};

}  // namespace metamorph
