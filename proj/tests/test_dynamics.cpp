#include <doctest.h>

#include <cmath>

#include "metamorph/dynamics.hpp"
#include "support.hpp"

using namespace metamorph;
using namespace testsupport;

namespace {

MassProperties test_mass(double m = 0.45, const Vec3& diag = Vec3(0.004, 0.0003, 0.004)) {
    MassProperties mass;
    mass.m_uav = m;
    mass.inertia = diag.asDiagonal();
    return mass;
}

}  // namespace

TEST_CASE("gravity in the body frame") {
    Environment env;
    const MassProperties mass = test_mass();
    RigidBodyState state;

    SUBCASE("level cruise attitude: body z down means gravity along +z") {
        state.q_att = Quat(Eigen::AngleAxisd(kPi, Vec3::UnitX()));
        const LoadSet g = gravity_body(state, mass, env);
        CHECK(g.force.x() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(g.force.z() == doctest::Approx(0.45 * 9.81).epsilon(1e-12));
        CHECK(g.moment == Vec3::Zero());
    }
    SUBCASE("hover attitude: body x up means gravity along -x") {
        state.q_att = Quat(Eigen::AngleAxisd(-0.5 * kPi, Vec3::UnitY()));
        const LoadSet g = gravity_body(state, mass, env);
        CHECK(g.force.x() == doctest::Approx(-4.4145).epsilon(1e-12));
        CHECK(g.force.y() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(g.force.z() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
    SUBCASE("rotation preserves the norm") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            state.q_att = Quat(dist(rng), dist(rng), dist(rng), dist(rng)).normalized();
            CHECK(gravity_body(state, mass, env).force.norm() ==
                  doctest::Approx(0.45 * 9.81).epsilon(1e-12));
        }
    }
}

TEST_CASE("load summation") {
    SUBCASE("all zero") {
        const LoadSet total = sum_loads({}, {LoadSet{}, LoadSet{}}, {});
        CHECK(total.force == Vec3::Zero());
        CHECK(total.moment == Vec3::Zero());
    }
    SUBCASE("gravity only") {
        LoadSet gravity;
        gravity.force = Vec3(0.0, 0.0, 0.45 * 9.81);
        const LoadSet total = sum_loads({}, {}, gravity);
        CHECK(total.force.norm() == doctest::Approx(4.4145).epsilon(1e-12));
    }
    SUBCASE("componentwise accumulation") {
        LoadSet a, b, g;
        a.force = Vec3(1, 2, 3);
        a.moment = Vec3(-1, 0, 1);
        b.force = Vec3(0.5, 0, 0);
        b.moment = Vec3(0, 0.25, 0);
        g.force = Vec3(0, 0, -4);
        const LoadSet total = sum_loads(a, {b}, g);
        CHECK(total.force == Vec3(1.5, 2, -1));
        CHECK(total.moment == Vec3(-1, 0.25, 1));
    }
}

TEST_CASE("derivatives") {
    const MassProperties mass = test_mass();
    SUBCASE("uniform motion") {
        RigidBodyState state;
        state.v = Vec3(3.0, -1.0, 0.5);
        const StateDerivative d = derivatives(state, LoadSet{}, mass);
        CHECK(d.dv == Vec3::Zero());
        CHECK(d.dw == Vec3::Zero());
        CHECK(d.dp == state.v);  // identity attitude
        CHECK(d.dq.tail<3>().norm() == doctest::Approx(0.0));
    }
    SUBCASE("symmetric top keeps its spin component") {
        // Ix == Iy: the z Euler coupling vanishes analytically.
        const MassProperties sym = test_mass(0.45, Vec3(0.002, 0.002, 0.003));
        RigidBodyState state;
        state.w = Vec3(1.0, 2.0, 3.0);
        const StateDerivative d = derivatives(state, LoadSet{}, sym);
        CHECK(d.dw.z() == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    }
    SUBCASE("coriolis term") {
        RigidBodyState state;
        state.v = Vec3(10.0, 0.0, 0.0);
        state.w = Vec3(0.0, 0.0, 1.0);
        const StateDerivative d = derivatives(state, LoadSet{}, mass);
        // dv = -w x v
        CHECK(d.dv == Vec3(0.0, -10.0, 0.0));
    }
}

TEST_CASE("free fall matches the closed form") {
    const MassProperties mass = test_mass();
    Environment env;
    const LoadsFn loads = [&](const RigidBodyState& s) { return gravity_body(s, mass, env); };
    RigidBodyState state;
    state.p = Vec3(0.0, 0.0, 100.0);
    const double dt = 1e-3;
    for (int k = 0; k < 1000; ++k) state = rk4_step(state, loads, dt, mass);
    CHECK(state.p.z() == doctest::Approx(100.0 - 4.905).epsilon(1e-9));
}

TEST_CASE("constant body force gives linear velocity growth") {
    const MassProperties mass = test_mass(0.5);
    LoadSet push;
    push.force = Vec3(1.0, 0.0, 0.0);
    const LoadsFn loads = [&](const RigidBodyState&) { return push; };
    RigidBodyState state;
    for (int k = 0; k < 2000; ++k) state = rk4_step(state, loads, 1e-3, mass);
    CHECK(state.v.x() == doctest::Approx(2.0 * 1.0 / 0.5).epsilon(1e-9));
}

TEST_CASE("torque-free rigid body conserves energy and momentum magnitude") {
    const MassProperties mass = test_mass(0.45, Vec3(0.004, 0.006, 0.009));
    const LoadsFn loads = [](const RigidBodyState&) { return LoadSet{}; };
    RigidBodyState state;
    state.w = Vec3(0.6, -0.3, 0.9);

    const auto energy = [&](const RigidBodyState& s) {
        return 0.5 * s.w.dot(mass.inertia * s.w);
    };
    const double e0 = energy(state);
    const double h0 = (mass.inertia * state.w).norm();
    for (int k = 0; k < 10000; ++k) state = rk4_step(state, loads, 1e-3, mass);
    CHECK(std::abs(energy(state) - e0) / e0 < 1e-8);
    CHECK(std::abs((mass.inertia * state.w).norm() - h0) / h0 < 1e-8);
}

TEST_CASE("rk4 convergence order on the tumbling top") {
    const MassProperties mass = test_mass(0.45, Vec3(0.004, 0.006, 0.009));
    const LoadsFn loads = [](const RigidBodyState&) { return LoadSet{}; };
    auto integrate = [&](double dt) {
        RigidBodyState state;
        state.w = Vec3(8.0, 0.4, 4.0);
        const long n = std::lround(1.0 / dt);
        for (long k = 0; k < n; ++k) state = rk4_step(state, loads, dt, mass);
        return state;
    };
    const RigidBodyState ref = integrate(1e-6);
    auto error = [&](double dt) {
        const RigidBodyState s = integrate(dt);
        return (s.w - ref.w).norm() + (s.q_att.coeffs() - ref.q_att.coeffs()).norm();
    };
    const double e1 = error(4e-3);
    const double e2 = error(2e-3);
    const double e3 = error(1e-3);
    CHECK(std::log2(e1 / e2) > 3.8);
    CHECK(std::log2(e2 / e3) > 3.8);
}

TEST_CASE("momentum stays constant without loads") {
    const MassProperties mass = test_mass();
    const LoadsFn loads = [](const RigidBodyState&) { return LoadSet{}; };
    RigidBodyState state;
    state.v = Vec3(2.0, -1.0, 0.5);
    state.w = Vec3(0.3, 0.2, -0.4);
    const Vec3 p_world0 = state.body_to_world() * (0.45 * state.v);
    const Vec3 h_world0 = state.body_to_world() * (mass.inertia * state.w);
    for (int k = 0; k < 100000; ++k) state = rk4_step(state, loads, 1e-3, mass);
    const Vec3 p_world = state.body_to_world() * (0.45 * state.v);
    const Vec3 h_world = state.body_to_world() * (mass.inertia * state.w);
    CHECK((p_world - p_world0).norm() / p_world0.norm() < 1e-10);
    CHECK((h_world - h_world0).norm() / h_world0.norm() < 1e-10);
}

TEST_CASE("quaternion norm drift stays tiny") {
    const MassProperties mass = test_mass();
    const LoadsFn loads = [](const RigidBodyState&) { return LoadSet{}; };
    RigidBodyState state;
    state.w = Vec3(5.0, 1.0, -2.0);
    for (int k = 0; k < 100000; ++k) {
        state = rk4_step(state, loads, 1e-3, mass);
    }
    CHECK(std::abs(state.q_att.norm() - 1.0) < 1e-9);
}

TEST_CASE("step rejects an out-of-range dt") {
    const MassProperties mass = test_mass();
    const LoadsFn loads = [](const RigidBodyState&) { return LoadSet{}; };
    RigidBodyState state;
    CHECK_THROWS_AS(rk4_step(state, loads, 0.02, mass), SimError);
    CHECK_THROWS_AS(rk4_step(state, loads, 0.0, mass), SimError);
}

TEST_CASE("non-finite loads abort with diagnostics") {
    const MassProperties mass = test_mass();
    LoadSet bad;
    bad.force = Vec3(std::numeric_limits<double>::infinity(), 0.0, 0.0);
    const LoadsFn loads = [&](const RigidBodyState&) { return bad; };
    RigidBodyState state;
    CHECK_THROWS_AS(rk4_step(state, loads, 1e-3, mass), SimError);
}

TEST_CASE("ground contact") {
    Environment env;
    RigidBodyState state;

    SUBCASE("no force above the rest height") {
        state.p = Vec3(0.0, 0.0, env.ground.rest_height);
        CHECK(ground_contact(state, env).force == Vec3::Zero());
        state.p.z() = 10.0;
        CHECK(ground_contact(state, env).force == Vec3::Zero());
    }
    SUBCASE("static equilibrium penetration") {
        // Settle a resting vehicle; spring force balances weight at
        // m g / k below the rest height.
        const MassProperties mass = test_mass();
        const LoadsFn loads = [&](const RigidBodyState& s) {
            LoadSet total = gravity_body(s, mass, env);
            total += ground_contact(s, env);
            return total;
        };
        state.p = Vec3(0.0, 0.0, env.ground.rest_height);
        for (int k = 0; k < 4000; ++k) state = rk4_step(state, loads, 1e-3, mass);
        const double penetration = env.ground.rest_height - state.p.z();
        CHECK(penetration == doctest::Approx(0.45 * 9.81 / 500.0).epsilon(1e-3));
        CHECK(state.v.norm() < 1e-6);
    }
    SUBCASE("normal force never points downward") {
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int i = 0; i < 2000; ++i) {
            RigidBodyState s;
            s.p = Vec3(0.0, 0.0, 0.06 * std::abs(dist(rng)));
            s.q_att = Quat(dist(rng), dist(rng), dist(rng), dist(rng)).normalized();
            s.v = 5.0 * Vec3(dist(rng), dist(rng), dist(rng));
            const LoadSet contact = ground_contact(s, env);
            const Vec3 f_world = s.body_to_world() * contact.force;
            CHECK(f_world.z() >= -1e-12 * std::max(1.0, f_world.norm()));
            CHECK(contact.moment == Vec3::Zero());
        }
    }
    SUBCASE("horizontal damper opposes sliding") {
        state.p = Vec3(0.0, 0.0, 0.01);
        state.v = Vec3(2.0, -1.0, 0.0);  // identity attitude: body == world
        const LoadSet contact = ground_contact(state, env);
        const Vec3 f_world = state.body_to_world() * contact.force;
        CHECK(f_world.x() == doctest::Approx(-env.ground.horizontal_damping * 2.0));
        CHECK(f_world.y() == doctest::Approx(env.ground.horizontal_damping * 1.0));
    }
}

TEST_CASE("euler angles round trip") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double roll = dist(rng) * 3.0;
        const double pitch = dist(rng) * 1.4;  // away from the singularity
        const double yaw = dist(rng) * 3.0;
        const Quat q = quat_from_euler_zyx(roll, pitch, yaw);
        const Vec3 e = euler_zyx(q);
        CHECK(wrap_pi(e(0) - roll) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
        CHECK(e(1) == doctest::Approx(pitch).scale(1.0).epsilon(1e-9));
        CHECK(wrap_pi(e(2) - yaw) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    }
}
