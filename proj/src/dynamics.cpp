#include "metamorph/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace metamorph {

LoadSet gravity_body(const RigidBodyState& state, const MassProperties& mass,
                     const Environment& env) {
    LoadSet out;
    const Vec3 f_world(0.0, 0.0, -mass.m_uav * env.gravity);
    out.force = state.body_to_world().transpose() * f_world;
    return out;
}

LoadSet ground_contact(const RigidBodyState& state, const Environment& env) {
    LoadSet out;
    const GroundContactParams& g = env.ground;
    const double pz = state.p.z();
    if (pz >= g.rest_height) return out;

    const Mat3 r = state.body_to_world();
    const Vec3 v_world = r * state.v;
    // Normal force never points downward.
    const double normal =
        std::max(0.0, g.stiffness * (g.rest_height - pz) - g.damping * v_world.z());
    const Vec3 f_world(-g.horizontal_damping * v_world.x(), -g.horizontal_damping * v_world.y(),
                       normal);
    out.force = r.transpose() * f_world;
    return out;
}

LoadSet sum_loads(const LoadSet& aero, const std::vector<LoadSet>& thrust,
                  const LoadSet& gravity) {
    LoadSet total = gravity;
    total += aero;
    for (const LoadSet& t : thrust) total += t;
    return total;
}

StateDerivative derivatives(const RigidBodyState& state, const LoadSet& loads,
                            const MassProperties& mass) {
    StateDerivative d;
    d.dv = loads.force / mass.m_uav - state.w.cross(state.v);
    d.dw = mass.inertia.inverse() * (loads.moment - state.w.cross(mass.inertia * state.w));
    d.dp = state.body_to_world() * state.v;
    // dq = 0.5 q * (0, w), quaternion product on the raw (unnormalized) q.
    const Quat wq(0.0, state.w.x(), state.w.y(), state.w.z());
    const Quat qd = state.q_att * wq;
    d.dq << 0.5 * qd.w(), 0.5 * qd.x(), 0.5 * qd.y(), 0.5 * qd.z();
    return d;
}

namespace {

RigidBodyState advance(const RigidBodyState& s, const StateDerivative& d, double h) {
    RigidBodyState out = s;
    out.p += h * d.dp;
    out.q_att = Quat(s.q_att.w() + h * d.dq(0), s.q_att.x() + h * d.dq(1),
                     s.q_att.y() + h * d.dq(2), s.q_att.z() + h * d.dq(3));
    out.v += h * d.dv;
    out.w += h * d.dw;
    out.t = s.t + h;
    return out;
}

StateDerivative combine(const StateDerivative& k1, const StateDerivative& k2,
                        const StateDerivative& k3, const StateDerivative& k4) {
    StateDerivative d;
    d.dp = (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp) / 6.0;
    d.dq = (k1.dq + 2.0 * k2.dq + 2.0 * k3.dq + k4.dq) / 6.0;
    d.dv = (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv) / 6.0;
    d.dw = (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw) / 6.0;
    return d;
}

std::string dump_state(const RigidBodyState& s) {
    std::ostringstream os;
    os << "t=" << s.t << " p=[" << s.p.transpose() << "] q=[" << s.q_att.w() << ", "
       << s.q_att.x() << ", " << s.q_att.y() << ", " << s.q_att.z() << "] v=["
       << s.v.transpose() << "] w=[" << s.w.transpose() << "]";
    return os.str();
}

}  // namespace

RigidBodyState rk4_step(const RigidBodyState& state, const LoadsFn& loads_fn, double dt,
                        const MassProperties& mass) {
    if (!(dt > 0.0 && dt <= 0.01)) {
        throw SimError("rk4_step: dt must be in (0, 0.01], got " + std::to_string(dt));
    }
    const StateDerivative k1 = derivatives(state, loads_fn(state), mass);
    const RigidBodyState s2 = advance(state, k1, 0.5 * dt);
    const StateDerivative k2 = derivatives(s2, loads_fn(s2), mass);
    const RigidBodyState s3 = advance(state, k2, 0.5 * dt);
    const StateDerivative k3 = derivatives(s3, loads_fn(s3), mass);
    const RigidBodyState s4 = advance(state, k3, dt);
    const StateDerivative k4 = derivatives(s4, loads_fn(s4), mass);

    RigidBodyState out = advance(state, combine(k1, k2, k3, k4), dt);
    out.q_att.normalize();
    if (!out.all_finite()) {
        throw SimError("non-finite state after step from " + dump_state(state) + " to " +
                       dump_state(out));
    }
    return out;
}

Vec3 euler_zyx(const Quat& q) {
    const Mat3 r = q.normalized().toRotationMatrix();
    const double s = std::clamp(-r(2, 0), -1.0, 1.0);
    const double pitch = std::asin(s);
    const double roll = std::atan2(r(2, 1), r(2, 2));
    const double yaw = std::atan2(r(1, 0), r(0, 0));
    return Vec3(roll, pitch, yaw);
}

Quat quat_from_euler_zyx(double roll, double pitch, double yaw) {
    return Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
                Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                Eigen::AngleAxisd(roll, Vec3::UnitX()));
}

}  // namespace metamorph
