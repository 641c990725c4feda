#include <catch2/catch.hpp>

#include <cmath>

#include "test_helpers.hpp"

using namespace skidsim;
using testutil::low_grip_env;
using testutil::reference_vehicle;

TEST_CASE("course angle") {
    const VehicleParams p = reference_vehicle();

    SECTION("straight motion gives zero") {
        REQUIRE(course_angle({10.0, 0.0, 0.0, 0.0, 0.0}, p) == 0.0);
    }
    SECTION("rotation-only term") {
        // atan(1.2 * 0.1 / 12) = atan(0.01)
        REQUIRE(course_angle({12.0, 0.1, 0.0, 0.0, 0.0}, p) ==
                Approx(0.0099996666866652376).epsilon(1e-14));
    }
    SECTION("slip plus rotation") {
        // atan(tan(0.05) + 1.2 * 0.1 / 5)
        REQUIRE(course_angle({5.0, 0.1, 0.05, 0.0, 0.0}, p) ==
                Approx(0.073906848503120973).epsilon(1e-14));
    }
    SECTION("undefined at standstill") {
        try {
            course_angle({0.0, 0.1, 0.0, 0.0, 0.0}, p);
            FAIL("expected DegenerateState");
        } catch (const SkidError& e) {
            CHECK(e.code() == ErrorCode::DegenerateState);
            CHECK(e.symbol() == "v_x1");
        }
    }
}

TEST_CASE("acceleration components") {
    const VehicleParams p = reference_vehicle();

    SECTION("unit normal component at zero course angle") {
        // tan(delta) = -a w / v cancels the rotation term, so theta_c = 0
        const double delta = std::atan(-p.a * 0.1 / 10.0);
        const auto ac = accel_components({10.0, 0.1, delta, 0.0, 0.0}, p, 0.0);
        REQUIRE(ac.a_c_n == Approx(1.0).epsilon(1e-12));
        REQUIRE(ac.a_c_t == 0.0);
    }
    SECTION("zero tangential for zero yaw acceleration") {
        const auto ac = accel_components({7.0, 0.3, 0.1, 0.0, 0.0}, p, 0.0);
        REQUIRE(ac.a_c_t == 0.0);
    }
    SECTION("known course angle") {
        // delta chosen so theta_c = 0.1 at v = 20, w = 0.2
        const double delta = std::atan(std::tan(0.1) - p.a * 0.2 / 20.0);
        const auto ac = accel_components({20.0, 0.2, delta, 0.0, 0.0}, p, 0.05);
        REQUIRE(ac.a_c_n == Approx(4.0 / std::cos(0.1)).epsilon(1e-12));
        REQUIRE(ac.a_c_t == Approx(5.0 / std::cos(0.1)).epsilon(1e-12));
    }
    SECTION("yaw rate guard") {
        try {
            accel_components({10.0, 0.0, 0.0, 0.0, 0.0}, p, 0.0);
            FAIL("expected SingularYawRate");
        } catch (const SkidError& e) {
            CHECK(e.code() == ErrorCode::SingularYawRate);
        }
    }
}

TEST_CASE("body accelerations") {
    const VehicleParams p = reference_vehicle();

    SECTION("pure rotation terms at zero yaw acceleration") {
        const auto ba = body_accelerations({10.0, 0.3, 0.0, 0.0, 0.0}, p, 0.0);
        REQUIRE(ba.ax == Approx(p.a * 0.09).epsilon(1e-14));
        REQUIRE(ba.ay == Approx(-3.0).epsilon(1e-14));
    }
    SECTION("direct arithmetic") {
        const auto ba = body_accelerations({10.0, 0.1, 0.0, 0.0, 0.0}, p, 0.02);
        REQUIRE(ba.ax == Approx(2.012).epsilon(1e-12));
    }
    SECTION("yaw rate guard") {
        REQUIRE_THROWS_AS(body_accelerations({10.0, 0.0, 0.0, 0.0, 0.0}, p, 0.0), SkidError);
    }
}

TEST_CASE("aero forces") {
    const VehicleParams p = reference_vehicle();
    const Environment env = low_grip_env();

    SECTION("zero at standstill") {
        const auto f = aero_forces(0.0, p, env);
        REQUIRE(f.p_w_x1 == 0.0);
        REQUIRE(f.p_w_y1 == 0.0);
    }
    SECTION("kF is authoritative") {
        REQUIRE(aero_forces(10.0, p, env).p_w_x1 == Approx(58.0).epsilon(1e-14));
    }
    SECTION("quadratic scaling is exact") {
        for (double v : {0.5, 1.7, 8.0, 21.3, 34.9}) {
            REQUIRE(aero_forces(2.0 * v, p, env).p_w_x1 == 4.0 * aero_forces(v, p, env).p_w_x1);
        }
    }
    SECTION("lateral force needs the frontal area") {
        VehicleParams py = p;
        py.c_Y = 0.5;
        REQUIRE_THROWS_AS(aero_forces(10.0, py, env), SkidError);
        py.F = 2.0;
        REQUIRE(aero_forces(10.0, py, env).p_w_y1 ==
                Approx(0.5 * 0.5 * 1.22 * 2.0 * 100.0).epsilon(1e-14));
    }
}

TEST_CASE("rear axle reactions") {
    const VehicleParams p = reference_vehicle();
    const Environment env = low_grip_env(0.8);

    SECTION("static load") {
        REQUIRE(rear_vertical_reaction({0.0, 0.0, 0.0, 0.0, 0.0}, p, env, 0.0) ==
                Approx(7063.2).epsilon(1e-12));
    }
    SECTION("symmetric static load") {
        VehicleParams sym = p;
        sym.a = sym.b = 1.25;
        REQUIRE(rear_vertical_reaction({0.0, 0.0, 0.0, 0.0, 0.0}, sym, env, 0.0) ==
                Approx(1500.0 * 9.81 / 2.0).epsilon(1e-12));
    }
    SECTION("drag and inertia levers") {
        // 7063.2 + 58 * 0.084 + 1500 * 2.012 * 0.084
        REQUIRE(rear_vertical_reaction({10.0, 0.1, 0.0, 0.0, 0.0}, p, env, 2.012) ==
                Approx(7321.584).epsilon(1e-12));
    }
    SECTION("aerodynamic lever honors a separate pressure-centre height") {
        VehicleParams tall = p;
        tall.h_w = 0.6;
        const double expected = 1500.0 * 9.81 * 1.2 / 2.5 + 58.0 * (0.6 - 0.29) / 2.5 +
                                1500.0 * 2.012 * (0.5 - 0.29) / 2.5;
        REQUIRE(rear_vertical_reaction({10.0, 0.1, 0.0, 0.0, 0.0}, tall, env, 2.012) ==
                Approx(expected).epsilon(1e-12));
    }
    SECTION("zero grip zeroes the traction reaction") {
        Environment e0 = env;
        e0.phi = 0.0;
        REQUIRE(rear_traction_reaction({10.0, 0.2, 0.05, 0.1, 0.0}, p, e0, 0.3) == 0.0);
    }
    SECTION("traction reaction at a static-equivalent state") {
        // v = 0 and a tiny yaw rate make ax ~ 0, so R_B ~ phi * m g a / L.
        const double r_b = rear_traction_reaction({0.0, 1e-3, 0.0, 0.0, 0.0}, p, env, 0.0);
        REQUIRE(r_b == Approx(5650.56).epsilon(1e-6));
    }
    SECTION("grip-load expansion matches phi times the vertical reaction") {
        const MotionState s{12.0, 0.25, 0.08, 0.15, 0.0};
        for (double eps : {-0.4, 0.0, 0.7}) {
            const double direct = rear_traction_reaction(s, p, env, eps);
            const double expanded =
                p.m_a * env.phi *
                (env.g * p.a / p.L +
                 (p.a * 0.25 * 0.25 + 0.25 * 12.0 * std::tan(0.08) + eps * 12.0 / 0.25 +
                  (p.kF / p.m_a) * 144.0) *
                     (p.h - p.r_o) / p.L);
            REQUIRE(direct == Approx(expanded).epsilon(1e-12));
        }
    }
}

TEST_CASE("omega factor") {
    const VehicleParams p = reference_vehicle();

    SECTION("zero grip") {
        REQUIRE(omega_factor(low_grip_env(0.0), p, 0.2) == 0.0);
    }
    SECTION("reference geometry") {
        REQUIRE(omega_factor(low_grip_env(0.8), p, 0.0) == Approx(0.168).epsilon(1e-12));
    }
    SECTION("sixty degrees halves it") {
        const Environment env = low_grip_env(0.8);
        REQUIRE(omega_factor(env, p, kPi / 3.0) ==
                Approx(0.5 * omega_factor(env, p, 0.0)).epsilon(1e-12));
    }
}

TEST_CASE("yaw angular acceleration") {
    const VehicleParams p = reference_vehicle();

    SECTION("zero-grip collapse") {
        Environment e0 = low_grip_env(0.0);
        for (double delta : {0.0, 0.05, 0.12}) {
            const MotionState s{15.0, 0.2, delta, 0.0, 0.0};
            const double eps = yaw_angular_acceleration(s, p, e0);
            const double collapsed =
                p.a * 0.2 * 15.0 /
                (p.a * p.a + p.i_z * p.i_z + p.a * (15.0 / 0.2) * std::tan(delta));
            REQUIRE(eps == Approx(collapsed).epsilon(1e-12));
            REQUIRE(eps > 0.0);
        }
    }
    SECTION("zero-speed limit") {
        const Environment env = low_grip_env();
        const MotionState still{0.0, 0.2, 0.03, 0.1, 0.0};
        const double om = omega_factor(env, p, 0.1);
        const double limit = -om * p.a * (env.g / (p.h - p.r_o) + 0.2 * 0.2) /
                             (p.a * p.a + p.i_z * p.i_z);
        const double direct = yaw_angular_acceleration(still, p, env);
        REQUIRE(direct == Approx(limit).epsilon(1e-12));
        // and the limit is approached from v = epsilon
        const double near = yaw_angular_acceleration({1e-7, 0.2, 0.03, 0.1, 0.0}, p, env);
        REQUIRE(near == Approx(direct).margin(1e-6));
    }
    SECTION("reference parameters cross zero below 30 km/h") {
        const Environment env = low_grip_env();
        REQUIRE(yaw_angular_acceleration({kmh_to_mps(1.0), 0.1, 0.0, 0.0, 0.0}, p, env) < 0.0);
        REQUIRE(yaw_angular_acceleration({kmh_to_mps(30.0), 0.1, 0.0, 0.0, 0.0}, p, env) > 0.0);
    }
    SECTION("yaw rate guard") {
        try {
            yaw_angular_acceleration({10.0, 5e-7, 0.0, 0.0, 0.0}, p, low_grip_env());
            FAIL("expected SingularYawRate");
        } catch (const SkidError& e) {
            CHECK(e.code() == ErrorCode::SingularYawRate);
            CHECK(e.symbol() == "omega_z");
        }
    }
    SECTION("denominator guard") {
        // negative yaw rate puts the v/w term in opposition; tune v to cancel D
        const Environment env = low_grip_env(0.8);
        const double om = omega_factor(env, p, 0.0);
        const double w = -0.1;
        const double v = -(p.a * p.a + p.i_z * p.i_z) * w / om;  // makes D = 0
        try {
            yaw_angular_acceleration({v, w, 0.0, 0.0, 0.0}, p, env);
            FAIL("expected SingularDenominator");
        } catch (const SkidError& e) {
            CHECK(e.code() == ErrorCode::SingularDenominator);
        }
    }
    SECTION("invalid state is rejected") {
        REQUIRE_THROWS_AS(yaw_angular_acceleration({-1.0, 0.1, 0.0, 0.0, 0.0}, p, low_grip_env()),
                          SkidError);
        REQUIRE_THROWS_AS(yaw_angular_acceleration({1.0, 0.1, 1.6, 0.0, 0.0}, p, low_grip_env()),
                          SkidError);
    }
}

TEST_CASE("front lateral reaction") {
    const VehicleParams p = reference_vehicle();
    const Environment env = low_grip_env(0.8);

    SECTION("no moment and no rear force") {
        Environment e0 = env;
        e0.phi = 0.0;
        REQUIRE(front_lateral_reaction({10.0, 0.1, 0.0, 0.0, 0.0}, p, e0, 0.0) == 0.0);
    }
    SECTION("closed-form value feeds back into the moment balance") {
        const MotionState s{8.0, 0.15, 0.06, 0.1, 0.0};
        const double eps = yaw_angular_acceleration(s, p, env);
        const double r_d1 = front_lateral_reaction(s, p, env, eps);
        const double r_b = rear_traction_reaction(s, p, env, eps);
        const double moment = r_d1 * p.a * std::cos(0.06) - r_b * p.b * std::cos(0.1);
        REQUIRE(moment == Approx(p.I_zc * eps).epsilon(1e-10));
    }
    SECTION("slip angle guard") {
        MotionState s{8.0, 0.15, 0.0, 0.0, 0.0};
        s.delta_1 = kPi / 2.0 - 1e-12;  // passes validate_state, cos ~ 0
        try {
            front_lateral_reaction(s, p, env, 0.1);
            FAIL("expected SingularSlipAngle");
        } catch (const SkidError& e) {
            CHECK(e.code() == ErrorCode::SingularSlipAngle);
        }
    }
}

TEST_CASE("longitudinal residual diagnostics") {
    const VehicleParams p = reference_vehicle();
    const Environment env = low_grip_env(0.0);

    SECTION("degenerate balance is zero") {
        // v = 0, tiny yaw rate, zero grip: every force term vanishes and ax = a w^2.
        const double res = longitudinal_residual({0.0, 1e-6, 0.0, 0.0, 0.0}, p, env, 0.0, 0.0, 0.0);
        REQUIRE(res == Approx(0.0).margin(1e-8));
    }
    SECTION("reports the imbalance of a chosen front resistance") {
        const Environment grippy = low_grip_env(0.8);
        const MotionState s{10.0, 0.1, 0.0, 0.0, 0.0};
        const double eps = yaw_angular_acceleration(s, p, grippy);
        const double r_d1 = front_lateral_reaction(s, p, grippy, eps);
        const double p_f1 = default_front_resistance(s, p, grippy, eps);
        const double res = longitudinal_residual(s, p, grippy, eps, p_f1, r_d1);
        REQUIRE(std::isfinite(res));
        // moving P_f1 by dF moves the residual by exactly +dF
        const double res2 = longitudinal_residual(s, p, grippy, eps, p_f1 + 100.0, r_d1);
        REQUIRE(res2 - res == Approx(100.0).epsilon(1e-9));
    }
}

TEST_CASE("inertia conversions") {
    SECTION("reference values") {
        const auto [i_z, I_zc] = inertia_conversions(1500.0, 1.3, std::nullopt);
        REQUIRE(i_z == 1.3);
        REQUIRE(I_zc == Approx(2535.0).epsilon(1e-12));
    }
    SECTION("round trip is the identity") {
        const auto [i_z, I_zc] = inertia_conversions(1500.0, 1.3, std::nullopt);
        const auto [i_z2, I_zc2] = inertia_conversions(1500.0, std::nullopt, I_zc);
        REQUIRE(i_z2 == Approx(i_z).epsilon(1e-12));
        REQUIRE(I_zc2 == I_zc);
    }
    SECTION("unit radius") {
        const auto [i_z, I_zc] = inertia_conversions(42.0, std::nullopt, 42.0);
        REQUIRE(i_z == Approx(1.0).epsilon(1e-15));
    }
    SECTION("rejects nonpositive input") {
        REQUIRE_THROWS_AS(inertia_conversions(0.0, 1.3, std::nullopt), SkidError);
        REQUIRE_THROWS_AS(inertia_conversions(1500.0, -1.0, std::nullopt), SkidError);
        REQUIRE_THROWS_AS(inertia_conversions(1500.0, std::nullopt, std::nullopt), SkidError);
    }
    SECTION("rejects an inconsistent pair") {
        REQUIRE_THROWS_AS(inertia_conversions(1500.0, 1.3, 2600.0), SkidError);
    }
}

TEST_CASE("parameter validation") {
    VehicleParams p = reference_vehicle();
    REQUIRE_NOTHROW(validate_params(p));

    SECTION("nonpositive mass") {
        p.m_a = 0.0;
        REQUIRE_THROWS_AS(validate_params(p), SkidError);
    }
    SECTION("wheelbase mismatch") {
        p.L = 2.6;
        REQUIRE_THROWS_AS(validate_params(p), SkidError);
    }
    SECTION("load lever must be positive") {
        p.h = 0.25;  // below r_o = 0.29
        try {
            validate_params(p);
            FAIL("expected InvalidParams");
        } catch (const SkidError& e) {
            CHECK(e.code() == ErrorCode::InvalidParams);
            CHECK(e.symbol() == "h");
        }
    }
    SECTION("inertia pair mismatch") {
        p.I_zc = 2600.0;
        REQUIRE_THROWS_AS(validate_params(p), SkidError);
    }
    SECTION("environment bounds") {
        REQUIRE_THROWS_AS(validate_environment(Environment{-0.1, 1.22, 9.81, 1.5}), SkidError);
        REQUIRE_THROWS_AS(validate_environment(Environment{2.0, 1.22, 9.81, 1.5}), SkidError);
        REQUIRE_THROWS_AS(validate_environment(Environment{0.5, 0.0, 9.81, 1.5}), SkidError);
        REQUIRE_NOTHROW(validate_environment(Environment{1.4, 1.22, 9.81, 1.5}));
    }
}

TEST_CASE("full derived record") {
    const VehicleParams p = reference_vehicle();
    const Environment env = low_grip_env(0.8);
    const MotionState s{10.0, 0.1, 0.0, 0.0, 0.0};
    const SkidDerived d = evaluate_skid(s, p, env);

    REQUIRE(d.eps_z == Approx(yaw_angular_acceleration(s, p, env)).epsilon(1e-15));
    REQUIRE(d.r_b == d.r_z2 * env.phi);  // exact by construction
    REQUIRE(d.rear_load_valid);
    REQUIRE(d.p_j == Approx(p.m_a * d.ax_body).epsilon(1e-15));
    REQUIRE(d.omega_factor == Approx(0.168).epsilon(1e-12));
    REQUIRE(d.theta_c == Approx(course_angle(s, p)).epsilon(1e-15));
    REQUIRE(d.p_w_x1 == Approx(58.0).epsilon(1e-12));
    REQUIRE(d.p_w_y1 == 0.0);
}
