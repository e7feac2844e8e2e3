#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metamorph/aero.hpp"
#include "metamorph/airframe.hpp"
#include "metamorph/dynamics.hpp"
#include "metamorph/environment.hpp"

namespace metamorph {

struct TrimNotConverged : SimError {
    TrimNotConverged(int iters, double res)
        : SimError("trim search did not converge after " + std::to_string(iters) +
                   " iterations, residual " + std::to_string(res)),
          iterations(iters),
          residual(res) {}
    int iterations;
    double residual;
};

/// Piecewise-constant actuation schedule with hold-last semantics.
/// Entries are strictly increasing in time and start at t = 0; lookup is
/// right-continuous, so the input at exactly t_start is the new entry.
class Schedule {
public:
    struct Entry {
        double t_start = 0.0;
        ActuationInput input;
    };

    Schedule() = default;
    explicit Schedule(std::vector<Entry> entries, double max_epsilon = 0.5 * kPi);

    const ActuationInput& at(double t) const;
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::vector<Entry> entries_{Entry{}};
};

struct Scenario {
    std::string name;
    RigidBodyState initial_state;
    Schedule schedule;
    double duration = 10.0;  // s
    bool ground_contact_enabled = false;
    AirfoilMode airfoil_mode = AirfoilMode::Auto;
};

struct VehicleSample {
    double t = 0.0;
    Vec3 p = Vec3::Zero();
    Vec3 euler = Vec3::Zero();  // roll, pitch, yaw
    Vec3 v = Vec3::Zero();
    Vec3 w = Vec3::Zero();
    LoadSet total;  // the loads fed to the rigid body at this step
};

struct SegmentSample {
    double t = 0.0;
    Side side = Side::Port;
    int index = 1;
    double alpha_kin = 0.0;
    double alpha_eff = 0.0;
    double reynolds = 0.0;
    LoadSet load;
};

struct RunHooks {
    std::function<void(const VehicleSample&)> on_vehicle;
    std::function<void(const SegmentSample&)> on_segment;
};

struct RunParams {
    double dt = 1e-3;      // s
    int output_every = 10; // telemetry decimation; the final step always emits
};

struct RunResult {
    RigidBodyState final_state;
    long steps = 0;
    long samples = 0;
};

/// Integrate the scenario from its initial state for its duration,
/// evaluating the schedule at every RK4 stage time and emitting decimated
/// telemetry. Aborts with SimError diagnostics if the state stops being
/// finite.
RunResult run(const Scenario& scenario, const Airframe& airframe, const PolarSet& polars,
              const Environment& env, const RunParams& params, const RunHooks& hooks = {});

/// Total loads at one instant under the scenario's flags; the quantity the
/// integrator sees and the telemetry records.
LoadSet evaluate_loads(const RigidBodyState& state, const Airframe& airframe,
                       const PolarSet& polars, const Environment& env,
                       const ActuationInput& act, bool ground_contact_enabled,
                       AirfoilMode mode);

struct TrimGuess {
    double airspeed = 10.0;      // m/s
    double alpha = 4.0 * kDegToRad;
    double altitude = 30.0;      // m, assembled initial height
};

struct TrimResult {
    RigidBodyState state;
    ActuationInput input;      // zero joints, zero thrust
    double airspeed = 0.0;
    double alpha = 0.0;
    double pitch = 0.0;        // attitude angle of the assembled state
    double glide_angle = 0.0;  // positive down
    double residual = 0.0;
    int iterations = 0;
};

/// Steady-glide trim (zero thrust, zero joints): a damped Newton search in
/// (airspeed, alpha) driving |F_aero| - m g and the pitch moment to zero,
/// converged when the residual norm falls below 1e-8. The pitch attitude
/// follows from the force-balance direction.
TrimResult trim_glide(const Airframe& airframe, const PolarSet& polars, const Environment& env,
                      const TrimGuess& guess = {});

// Built-in experiments. The joint-angle values follow the effective-alpha
// sign convention: equal port/starboard values are the physically
// antisymmetric actuation (hover inversion, cruise roll), opposite values
// the symmetric one.
Scenario hover_spinup_scenario(const Airframe& airframe, const Environment& env);
Scenario hover_thrust_profile_scenario(const Airframe& airframe, const Environment& env);
Scenario cruise_roll_scenario(const Airframe& airframe, const PolarSet& polars,
                              const Environment& env);
Scenario cruise_yaw_scenario(const Airframe& airframe, const PolarSet& polars,
                             const Environment& env);

std::vector<std::string> builtin_scenario_names();
Scenario make_builtin_scenario(const std::string& name, const Airframe& airframe,
                               const PolarSet& polars, const Environment& env);

// Mirror of a run through the body x-z plane: y-coordinates, roll and yaw
// negate. Joint angles swap sides and negate (plain swapping would leave
// the hover inversion unchanged); thrusts swap sides.
RigidBodyState mirror_state(const RigidBodyState& s);
ActuationInput mirror_actuation(const ActuationInput& a, const Airframe& airframe);
Scenario mirror_scenario(const Scenario& s, const Airframe& airframe);

}  // namespace metamorph
