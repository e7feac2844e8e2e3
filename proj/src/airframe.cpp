#include "metamorph/airframe.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace metamorph {

void WingSpec::validate() const {
    if (!(wingspan > 0.0)) throw AirframeError("wingspan must be positive");
    if (!(root_chord > 0.0)) throw AirframeError("root_chord must be positive");
    if (!(taper_ratio > 0.0 && taper_ratio <= 1.0)) {
        throw AirframeError("taper_ratio must be in (0, 1]");
    }
    if (segments_per_side < 1) throw AirframeError("segments_per_side must be >= 1");
    if (airfoil_cruise.empty() || airfoil_hover.empty()) {
        throw AirframeError("airfoil names must be non-empty");
    }
}

void MassProperties::validate() const {
    if (!(m_uav > 0.0)) throw AirframeError("m_uav must be positive");
    if (!inertia.isApprox(inertia.transpose(), 1e-9)) {
        throw AirframeError("inertia tensor must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
    const Vec3 ev = es.eigenvalues();  // ascending
    if (!(ev(0) > 0.0)) throw AirframeError("inertia tensor must be positive definite");
    // Principal moments of any real mass distribution satisfy Ia + Ib >= Ic.
    if (ev(0) + ev(1) < ev(2) * (1.0 - 1e-9)) {
        throw AirframeError("inertia tensor violates the triangle inequality");
    }
}

std::vector<SegmentGeometry> segment_wing(const WingSpec& wing, const Vec3& cg_offset) {
    wing.validate();
    const int n = wing.segments_per_side;
    const double b_seg = wing.half_span() / n;

    std::vector<SegmentGeometry> segments;
    segments.reserve(static_cast<std::size_t>(2 * n));
    for (Side side : {Side::Port, Side::Starboard}) {
        for (int i = 1; i <= n; ++i) {
            const double y_abs = (i - 0.5) * b_seg;
            SegmentGeometry seg;
            seg.side = side;
            seg.index = i;
            seg.span_width = b_seg;
            seg.chord = wing.chord_at(y_abs);
            seg.area = seg.chord * seg.span_width;
            seg.twist = wing.twist * (y_abs / wing.half_span());
            // Quarter-chord line through the CoM at zero sweep/dihedral.
            const Vec3 geometric(-y_abs * std::tan(wing.sweep), lateral_sign(side) * y_abs,
                                 -y_abs * std::tan(wing.dihedral));
            seg.r_ac = geometric - cg_offset;
            segments.push_back(seg);
        }
    }
    return segments;
}

double wing_loading(const MassProperties& mass, const WingSpec& wing) {
    const auto segments = segment_wing(wing);
    double area = 0.0;
    for (const SegmentGeometry& s : segments) area += s.area;
    if (!(area > 0.0)) throw AirframeError("total wing area is zero");
    return mass.m_uav / area;
}

namespace {

/// Inertia of a thin rectangular lamina of mass m, width along y, chord
/// along the direction rot_xz(chord_angle) * x, centered at d relative to
/// the CoM.
Mat3 lamina_inertia(double m, double chord, double width, double chord_angle, const Vec3& d) {
    Mat3 local = Mat3::Zero();
    local(0, 0) = m * width * width / 12.0;                  // about the chord axis
    local(1, 1) = m * chord * chord / 12.0;                  // about the span axis
    local(2, 2) = m * (chord * chord + width * width) / 12.0;  // about the normal
    const Mat3 r = rot_xz(chord_angle);
    Mat3 rotated = r * local * r.transpose();
    // Parallel axis shift.
    rotated += m * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
    return rotated;
}

}  // namespace

Mat3 default_inertia(const WingSpec& wing, const MassProperties& mass,
                     double wing_areal_density, double fold_angle) {
    if (!(wing_areal_density > 0.0)) {
        throw AirframeError("wing_areal_density must be positive");
    }
    const auto segments = segment_wing(wing, mass.cg_offset);
    Mat3 total = Mat3::Zero();
    double wing_mass = 0.0;
    for (const SegmentGeometry& seg : segments) {
        const double m = wing_areal_density * seg.area;
        wing_mass += m;
        const double chord_angle = -joint_alpha_sign(seg.side) * fold_angle;
        // Lamina centroid sits at mid-chord, a quarter chord behind the AC.
        const Vec3 centroid =
            seg.r_ac + rot_xz(chord_angle) * Vec3(-0.25 * seg.chord, 0.0, 0.0);
        total += lamina_inertia(m, seg.chord, seg.span_width, chord_angle, centroid);
    }
    if (wing_mass > mass.m_uav) {
        throw AirframeError("wing lamina mass exceeds total vehicle mass; lower wing_areal_density");
    }
    // A nonzero fold is antisymmetric across the span (that is the wing
    // inversion), which leaves xy and yz products and makes the tensor
    // chiral. The run-constant tensor stands for both fold directions, so
    // those products are averaged out; xz is fold-symmetric and stays.
    total(0, 1) = total(1, 0) = 0.0;
    total(1, 2) = total(2, 1) = 0.0;
    // Remaining mass is a point at the CoM and contributes nothing.
    return total;
}

Airframe Airframe::build(const WingSpec& wing, double m_uav, std::optional<Mat3> inertia,
                         const Vec3& cg_offset, double wing_areal_density,
                         std::vector<ThrusterSpec> thrusters, double inertia_fold_angle) {
    Airframe af;
    af.wing = wing;
    af.mass.m_uav = m_uav;
    af.mass.cg_offset = cg_offset;
    af.segments = segment_wing(wing, cg_offset);
    af.mass.inertia = inertia ? *inertia
                              : default_inertia(wing, af.mass, wing_areal_density,
                                                inertia_fold_angle);
    af.mass.validate();

    if (thrusters.empty()) {
        // One thruster at each tip-segment aerodynamic center.
        for (Side side : {Side::Port, Side::Starboard}) {
            const SegmentGeometry& tip = af.segment(side, wing.segments_per_side);
            ThrusterSpec t;
            t.id = side == Side::Port ? "port" : "starboard";
            t.side = side;
            t.r_thrust = tip.r_ac;
            t.hinge_point = tip.r_ac;
            t.max_thrust = 2.0;
            thrusters.push_back(t);
        }
    }
    for (ThrusterSpec& t : thrusters) {
        if (!(t.max_thrust > 0.0)) throw AirframeError("max_thrust must be positive");
        // Anchor the hinge at the AC line point of the segment that holds
        // the mount, so only a chordwise offset rotates with the joint.
        const double y = t.r_thrust.y();
        int idx = static_cast<int>(std::floor(std::abs(y) / (wing.half_span() / wing.segments_per_side))) + 1;
        idx = std::min(std::max(idx, 1), wing.segments_per_side);
        const SegmentGeometry& host = af.segment(t.side, idx);
        if (t.hinge_point.isZero() && !t.r_thrust.isZero()) {
            t.hinge_point = Vec3(host.r_ac.x(), t.r_thrust.y(), host.r_ac.z());
        }
        af.segments[static_cast<std::size_t>((t.side == Side::Port ? 0 : wing.segments_per_side) +
                                             idx - 1)]
            .has_thruster = true;
        af.segments[static_cast<std::size_t>((t.side == Side::Port ? 0 : wing.segments_per_side) +
                                             idx - 1)]
            .r_thrust = t.r_thrust;
    }
    af.thrusters = std::move(thrusters);
    return af;
}

}  // namespace metamorph
