#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metamorph/types.hpp"

namespace metamorph {

struct AirframeError : std::runtime_error {
    explicit AirframeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Planform and section parameters of the morphing wing.
struct WingSpec {
    double wingspan = 0.70;      // m, tip to tip
    double root_chord = 0.160;   // m
    double taper_ratio = 0.688;  // tip chord / root chord, in (0, 1]
    double sweep = 0.0;          // rad, quarter-chord line sweep
    double dihedral = 0.0;       // rad
    double twist = 0.0;          // rad at the tip, linear from 0 at the root
    int segments_per_side = 8;
    std::string airfoil_cruise = "E387";
    std::string airfoil_hover = "NACA0010";

    double half_span() const { return 0.5 * wingspan; }

    /// Linear taper chord law, c(|y|).
    double chord_at(double y_abs) const {
        return root_chord * (1.0 - (1.0 - taper_ratio) * y_abs / half_span());
    }

    /// Trapezoid planform area of both sides.
    double planform_area() const {
        return wingspan * root_chord * 0.5 * (1.0 + taper_ratio);
    }

    void validate() const;
};

/// Mass, inertia tensor (body frame, about the CoM) and CoM offset from
/// the geometric reference point.
struct MassProperties {
    double m_uav = 0.450;            // kg
    Mat3 inertia = Mat3::Identity() * 1e-3;
    Vec3 cg_offset = Vec3::Zero();   // m

    /// Positive mass, symmetric positive-definite inertia, triangle
    /// inequality on the principal moments.
    void validate() const;
};

/// One spanwise strip with its aerodynamic-center position relative to the
/// CoM in the body frame at zero joint angle.
struct SegmentGeometry {
    Side side = Side::Port;
    int index = 1;              // 1 at the root, matching P1..Pn / S1..Sn
    double span_width = 0.0;    // m
    double chord = 0.0;         // m, at the segment midspan
    double area = 0.0;          // m^2, chord * span_width exactly
    double twist = 0.0;         // rad, local geometric twist
    Vec3 r_ac = Vec3::Zero();   // m
    bool has_thruster = false;
    Vec3 r_thrust = Vec3::Zero();  // m, valid iff has_thruster
};

struct ThrusterSpec {
    std::string id;
    Side side = Side::Port;
    Vec3 r_thrust = Vec3::Zero();   // m, body frame at zero joint angle
    double max_thrust = 2.0;        // N
    /// Point on the wing hinge line used to rotate any chordwise offset of
    /// the mount when the joint moves. Default mounts sit on the hinge.
    Vec3 hinge_point = Vec3::Zero();
};

/// Divide each half-span into equal-width strips, chord evaluated at the
/// strip midspan, aerodynamic center on the local quarter-chord. Returned
/// root-to-tip, all port segments first.
std::vector<SegmentGeometry> segment_wing(const WingSpec& wing,
                                          const Vec3& cg_offset = Vec3::Zero());

/// Vehicle mass divided by the summed segment areas of both sides.
double wing_loading(const MassProperties& mass, const WingSpec& wing);

/// Thin-flat-plate inertia model: each segment a rectangular lamina with
/// areal density `wing_areal_density`, remaining mass a point at the CoM.
/// Used when no explicit tensor is configured. `fold_angle` orients the
/// laminae about their hinges; the rigid-body tensor is fixed, so one
/// representative orientation has to be chosen for the whole run.
Mat3 default_inertia(const WingSpec& wing, const MassProperties& mass,
                     double wing_areal_density = 1.0, double fold_angle = 0.0);

/// Lamina orientation used for the derived tensor when nothing else is
/// configured: the hover joint angle. Spinning flight is where the axis
/// ordering of the tensor decides stability (folded wings make body x the
/// major axis); cruise dynamics are insensitive to the difference.
inline constexpr double kDefaultInertiaFoldAngle = 75.0 * kDegToRad;

/// Immutable airframe description shared by the aero, propulsion and
/// dynamics code.
struct Airframe {
    WingSpec wing;
    MassProperties mass;
    std::vector<SegmentGeometry> segments;   // port block then starboard block
    std::vector<ThrusterSpec> thrusters;

    int per_side() const { return wing.segments_per_side; }

    const SegmentGeometry& segment(Side side, int index) const {
        const int base = side == Side::Port ? 0 : per_side();
        return segments[static_cast<std::size_t>(base + index - 1)];
    }

    /// Build the airframe, deriving segments, the default two tip-mounted
    /// thrusters when none are given, and the lamina inertia tensor when
    /// none is given.
    static Airframe build(const WingSpec& wing, double m_uav,
                          std::optional<Mat3> inertia = std::nullopt,
                          const Vec3& cg_offset = Vec3::Zero(),
                          double wing_areal_density = 1.0,
                          std::vector<ThrusterSpec> thrusters = {},
                          double inertia_fold_angle = kDefaultInertiaFoldAngle);
};

}  // namespace metamorph
