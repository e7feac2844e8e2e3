#include "metamorph/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "metamorph/propulsion.hpp"

namespace metamorph {

Schedule::Schedule(std::vector<Entry> entries, double max_epsilon) : entries_(std::move(entries)) {
    if (entries_.empty()) throw SimError("schedule needs at least one entry");
    if (entries_.front().t_start != 0.0) throw SimError("first schedule entry must be at t = 0");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i > 0 && !(entries_[i - 1].t_start < entries_[i].t_start)) {
            throw SimError("schedule entry times must be strictly increasing");
        }
        entries_[i].input.validate(max_epsilon);
    }
}

const ActuationInput& Schedule::at(double t) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), t,
                               [](double tt, const Entry& e) { return tt < e.t_start; });
    // upper_bound lands one past the active entry, so t == t_start already
    // selects the new value (right-continuous).
    if (it == entries_.begin()) return entries_.front().input;
    return (it - 1)->input;
}

LoadSet evaluate_loads(const RigidBodyState& state, const Airframe& airframe,
                       const PolarSet& polars, const Environment& env,
                       const ActuationInput& act, bool ground_contact_enabled,
                       AirfoilMode mode) {
    const LoadSet aero = total_aero_loads(state, airframe, act, polars, env, mode);
    const LoadSet thrust = total_thrust_loads(airframe.thrusters, act);
    const LoadSet gravity = gravity_body(state, airframe.mass, env);
    LoadSet total = sum_loads(aero, {thrust}, gravity);
    if (ground_contact_enabled) total += ground_contact(state, env);
    return total;
}

RunResult run(const Scenario& scenario, const Airframe& airframe, const PolarSet& polars,
              const Environment& env, const RunParams& params, const RunHooks& hooks) {
    if (!(scenario.duration > 0.0)) throw SimError("scenario duration must be positive");
    const double dt = params.dt;
    const long steps = std::lround(scenario.duration / dt);
    const int every = std::max(1, params.output_every);

    RigidBodyState state = scenario.initial_state;
    state.q_att.normalize();
    state.t = 0.0;

    const LoadsFn loads_fn = [&](const RigidBodyState& s) {
        return evaluate_loads(s, airframe, polars, env, scenario.schedule.at(s.t),
                              scenario.ground_contact_enabled, scenario.airfoil_mode);
    };

    RunResult result;
    auto emit = [&](const RigidBodyState& s) {
        const ActuationInput& act = scenario.schedule.at(s.t);
        if (hooks.on_vehicle) {
            VehicleSample vs;
            vs.t = s.t;
            vs.p = s.p;
            vs.euler = euler_zyx(s.q_att);
            vs.v = s.v;
            vs.w = s.w;
            vs.total = loads_fn(s);
            hooks.on_vehicle(vs);
        }
        if (hooks.on_segment) {
            for_each_segment_aero(
                s, airframe, act, polars, env, scenario.airfoil_mode,
                [&](const SegmentGeometry& seg, const SegmentAeroState& aero, const LoadSet& load) {
                    SegmentSample ss;
                    ss.t = s.t;
                    ss.side = seg.side;
                    ss.index = seg.index;
                    ss.alpha_kin = aero.alpha_kin;
                    ss.alpha_eff = aero.alpha_eff;
                    ss.reynolds = aero.reynolds;
                    ss.load = load;
                    hooks.on_segment(ss);
                });
        }
        ++result.samples;
    };

    for (long k = 0; k < steps; ++k) {
        if (k % every == 0) emit(state);
        state = rk4_step(state, loads_fn, dt, airframe.mass);
        state.t = (k + 1) * dt;  // avoids accumulated time drift
    }
    emit(state);  // the final step always emits
    result.final_state = state;
    result.steps = steps;
    return result;
}

namespace {

/// Aerodynamic force and pitch moment of a symmetric zero-thrust glide as
/// a function of airspeed and alpha. Attitude-independent.
struct GlidePoint {
    Vec3 force;
    double pitch_moment;
};

GlidePoint glide_aero(const Airframe& airframe, const PolarSet& polars, const Environment& env,
                      double airspeed, double alpha) {
    RigidBodyState s;
    s.v = Vec3(airspeed * std::cos(alpha), 0.0, airspeed * std::sin(alpha));
    const ActuationInput act{};
    const LoadSet aero =
        total_aero_loads(s, airframe, act, polars, env, AirfoilMode::ForceCruise);
    return {aero.force, aero.moment.y()};
}

}  // namespace

TrimResult trim_glide(const Airframe& airframe, const PolarSet& polars, const Environment& env,
                      const TrimGuess& guess) {
    const double weight = airframe.mass.m_uav * env.gravity;
    constexpr int kMaxIter = 200;
    constexpr double kTol = 1e-8;

    double v = guess.airspeed;
    double alpha = guess.alpha;

    auto residual = [&](double vv, double aa) -> Eigen::Vector2d {
        const GlidePoint g = glide_aero(airframe, polars, env, vv, aa);
        return {g.force.norm() - weight, g.pitch_moment};
    };

    Eigen::Vector2d r = residual(v, alpha);
    int iter = 0;
    for (; iter < kMaxIter && r.norm() >= kTol; ++iter) {
        const double hv = 1e-4 * std::max(1.0, std::abs(v));
        const double ha = 1e-6;
        Eigen::Matrix2d jac;
        jac.col(0) = (residual(v + hv, alpha) - r) / hv;
        jac.col(1) = (residual(v, alpha + ha) - r) / ha;
        const Eigen::Vector2d step = jac.fullPivLu().solve(-r);
        if (!step.allFinite()) throw TrimNotConverged(iter, r.norm());

        // Backtracking line search on the residual norm.
        double lambda = 1.0;
        Eigen::Vector2d r_next;
        double v_next = v;
        double a_next = alpha;
        bool improved = false;
        for (int ls = 0; ls < 12; ++ls) {
            v_next = v + lambda * step(0);
            a_next = alpha + lambda * step(1);
            if (v_next > 0.1) {
                r_next = residual(v_next, a_next);
                if (r_next.norm() < r.norm()) {
                    improved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!improved) throw TrimNotConverged(iter, r.norm());
        v = v_next;
        alpha = a_next;
        r = r_next;
    }
    if (r.norm() >= kTol) throw TrimNotConverged(iter, r.norm());

    // Assemble the state: pitch puts gravity exactly opposite the
    // aerodynamic force, roll pi maps body z-down onto world z-up.
    const GlidePoint g = glide_aero(airframe, polars, env, v, alpha);
    const double pitch = std::atan2(-g.force.x(), -g.force.z());

    TrimResult out;
    out.airspeed = v;
    out.alpha = alpha;
    out.pitch = pitch;
    out.glide_angle = pitch + alpha;
    out.residual = r.norm();
    out.iterations = iter;
    out.state.p = Vec3(0.0, 0.0, guess.altitude);
    out.state.q_att = Quat(Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
                           Eigen::AngleAxisd(kPi, Vec3::UnitX()));
    out.state.v = Vec3(v * std::cos(alpha), 0.0, v * std::sin(alpha));
    return out;
}

namespace {

ActuationInput hover_act(double thrust) {
    ActuationInput a;
    a.epsilon_p = 75.0 * kDegToRad;
    a.epsilon_s = 75.0 * kDegToRad;
    a.thrusts = {{"port", thrust}, {"starboard", thrust}};
    return a;
}

RigidBodyState hover_initial(const Environment& env) {
    RigidBodyState s;
    // Standing on the ground with the nose (body x) pointing up.
    s.p = Vec3(0.0, 0.0, env.ground.rest_height);
    s.q_att = Quat(Eigen::AngleAxisd(-0.5 * kPi, Vec3::UnitY()));
    return s;
}

ActuationInput cruise_act(double eps, double thrust_port, double thrust_starboard) {
    ActuationInput a;
    a.epsilon_p = eps;
    a.epsilon_s = eps;
    a.thrusts = {{"port", thrust_port}, {"starboard", thrust_starboard}};
    return a;
}

}  // namespace

Scenario hover_spinup_scenario(const Airframe& airframe, const Environment& env) {
    (void)airframe;
    Scenario s;
    s.name = "hover_spinup";
    s.initial_state = hover_initial(env);
    s.schedule = Schedule({{0.0, hover_act(0.3)}});
    s.duration = 10.0;
    s.ground_contact_enabled = true;
    return s;
}

Scenario hover_thrust_profile_scenario(const Airframe& airframe, const Environment& env) {
    (void)airframe;
    // Phase thrusts found by a coarse search on the default airframe with
    // the bundled polars: 0.178 N approximately balances weight at the
    // steady spin, 0.30 N climbs, 0.150 N descends to a landing.
    Scenario s;
    s.name = "hover_thrust_profile";
    s.initial_state = hover_initial(env);
    s.schedule = Schedule({{0.0, hover_act(0.30)},
                           {4.0, hover_act(0.178)},
                           {10.0, hover_act(0.150)},
                           {16.0, hover_act(0.178)}});
    s.duration = 22.0;
    s.ground_contact_enabled = true;
    return s;
}

Scenario cruise_roll_scenario(const Airframe& airframe, const PolarSet& polars,
                              const Environment& env) {
    const TrimResult trim = trim_glide(airframe, polars, env);
    Scenario s;
    s.name = "cruise_roll";
    s.initial_state = trim.state;
    // Equal joint values are the physically antisymmetric (opposite) wing
    // rotations: port alpha drops, starboard alpha rises, rolling toward
    // the port side. A short pulse keeps the bank angle in the range the
    // finless wing recovers from on its own.
    const double step = 1.0 * kDegToRad;
    s.schedule = Schedule({{0.0, cruise_act(0.0, 0.0, 0.0)},
                           {2.0, cruise_act(step, 0.0, 0.0)},
                           {2.25, cruise_act(0.0, 0.0, 0.0)}});
    s.duration = 10.0;
    s.ground_contact_enabled = false;
    return s;
}

Scenario cruise_yaw_scenario(const Airframe& airframe, const PolarSet& polars,
                             const Environment& env) {
    const TrimResult trim = trim_glide(airframe, polars, env);
    const double tc = 0.05;  // baseline cruise thrust per motor
    Scenario s;
    s.name = "cruise_yaw";
    s.initial_state = trim.state;
    s.schedule = Schedule({{0.0, cruise_act(0.0, tc, tc)},
                           {2.0, cruise_act(0.0, 1.2 * tc, 0.8 * tc)},
                           {3.0, cruise_act(0.0, tc, tc)}});
    s.duration = 10.0;
    s.ground_contact_enabled = false;
    return s;
}

std::vector<std::string> builtin_scenario_names() {
    return {"hover_spinup", "hover_thrust_profile", "cruise_roll", "cruise_yaw"};
}

Scenario make_builtin_scenario(const std::string& name, const Airframe& airframe,
                               const PolarSet& polars, const Environment& env) {
    if (name == "hover_spinup") return hover_spinup_scenario(airframe, env);
    if (name == "hover_thrust_profile") return hover_thrust_profile_scenario(airframe, env);
    if (name == "cruise_roll") return cruise_roll_scenario(airframe, polars, env);
    if (name == "cruise_yaw") return cruise_yaw_scenario(airframe, polars, env);
    throw SimError("unknown built-in scenario '" + name + "'");
}

RigidBodyState mirror_state(const RigidBodyState& s) {
    RigidBodyState m = s;
    m.p.y() = -m.p.y();
    m.v.y() = -m.v.y();
    m.w.x() = -m.w.x();
    m.w.z() = -m.w.z();
    m.q_att = Quat(s.q_att.w(), -s.q_att.x(), s.q_att.y(), -s.q_att.z());
    return m;
}

ActuationInput mirror_actuation(const ActuationInput& a, const Airframe& airframe) {
    ActuationInput m;
    m.epsilon_p = -a.epsilon_s;
    m.epsilon_s = -a.epsilon_p;
    // Swap thrust commands between mirrored mounts, pairing the port and
    // starboard thruster lists by position.
    std::vector<const ThrusterSpec*> port;
    std::vector<const ThrusterSpec*> starboard;
    for (const ThrusterSpec& t : airframe.thrusters) {
        (t.side == Side::Port ? port : starboard).push_back(&t);
    }
    const std::size_t n = std::max(port.size(), starboard.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i < port.size() && i < starboard.size()) {
            m.thrusts[port[i]->id] = a.thrust(starboard[i]->id);
            m.thrusts[starboard[i]->id] = a.thrust(port[i]->id);
        } else if (i < port.size()) {
            m.thrusts[port[i]->id] = a.thrust(port[i]->id);
        } else {
            m.thrusts[starboard[i]->id] = a.thrust(starboard[i]->id);
        }
    }
    return m;
}

Scenario mirror_scenario(const Scenario& s, const Airframe& airframe) {
    Scenario m = s;
    m.name = s.name + "_mirrored";
    m.initial_state = mirror_state(s.initial_state);
    std::vector<Schedule::Entry> entries;
    entries.reserve(s.schedule.entries().size());
    for (const Schedule::Entry& e : s.schedule.entries()) {
        entries.push_back({e.t_start, mirror_actuation(e.input, airframe)});
    }
    m.schedule = Schedule(std::move(entries));
    return m;
}

}  // namespace metamorph
