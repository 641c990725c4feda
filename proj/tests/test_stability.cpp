#include <catch2/catch.hpp>

#include <cmath>

#include "test_helpers.hpp"

using namespace skidsim;
using testutil::low_grip_env;
using testutil::reference_vehicle;

TEST_CASE("stability classification") {
    const VehicleParams p = reference_vehicle();

    SECTION("zero grip never damps") {
        const auto v = classify({10.0, 0.1, 0.0, 0.0, 0.0}, p, low_grip_env(0.0));
        REQUIRE_FALSE(v.damping);
        REQUIRE(v.eps_z > 0.0);
    }
    SECTION("crawl speed with good grip damps") {
        const auto v = classify({0.1, 0.1, 0.0, 0.0, 0.0}, p, low_grip_env(0.8));
        REQUIRE(v.damping);
        REQUIRE(v.eps_z < 0.0);
    }
    SECTION("damping flag matches the sign convention, boundary inclusive") {
        for (double speed : {0.5, 3.0, 6.870706, 6.9, 20.0}) {
            const auto v = classify({speed, 0.1, 0.0, 0.0, 0.0}, p, low_grip_env());
            REQUIRE(v.damping == (v.eps_z <= 0.0));
        }
    }
}

TEST_CASE("stabilization speed boundary") {
    const VehicleParams p = reference_vehicle();
    const Environment env = low_grip_env();

    SECTION("zero grip is never bracketed") {
        const auto r = find_v_stab(p, low_grip_env(0.0), 0.1, 0.0, 0.0, 0.5, 35.0);
        REQUIRE(r.status == VstabStatus::NotBracketed);
    }
    SECTION("root location and post-conditions") {
        const auto r = find_v_stab(p, env, 0.1, 0.0, 0.0, 0.5, 35.0);
        REQUIRE(r.status == VstabStatus::Root);
        REQUIRE(r.v_stab == Approx(6.870706).margin(1e-4));
        REQUIRE_FALSE(r.multi_root);

        const auto eps_at = [&](double v) {
            return yaw_angular_acceleration({v, 0.1, 0.0, 0.0, 0.0}, p, env);
        };
        REQUIRE(std::abs(eps_at(r.v_stab)) < 1e-6);
        REQUIRE(eps_at(r.v_stab - 2e-6) < 0.0);
        REQUIRE(eps_at(r.v_stab + 2e-6) > 0.0);
    }
    SECTION("stable throughout a short bracket") {
        const auto r = find_v_stab(p, low_grip_env(0.8), 0.1, 0.0, 0.0, 0.5, 20.0);
        REQUIRE(r.status == VstabStatus::StableThroughout);
        REQUIRE(r.v_stab == 20.0);
    }
    SECTION("multiple crossings are flagged and the smallest root returned") {
        // huge drag makes the quadratic term fold eps_z back below zero at speed
        VehicleParams heavy_drag = p;
        heavy_drag.kF = 50.0;
        const auto r = find_v_stab(heavy_drag, low_grip_env(0.9), 0.5, 0.0, 0.0, 0.5, 100.0);
        REQUIRE(r.status == VstabStatus::Root);
        REQUIRE(r.multi_root);
        REQUIRE(r.v_stab == Approx(23.601150).margin(1e-3));
    }
    SECTION("invalid bracket is rejected") {
        REQUIRE_THROWS_AS(find_v_stab(p, env, 0.1, 0.0, 0.0, 0.0, 35.0), SkidError);
        REQUIRE_THROWS_AS(find_v_stab(p, env, 0.1, 0.0, 0.0, 5.0, 5.0), SkidError);
    }
}

TEST_CASE("stability envelope") {
    const VehicleParams p = reference_vehicle();
    const Environment env = low_grip_env();

    SECTION("single point reduces to find_v_stab") {
        const auto rows = stability_envelope(p, env, 0.1, {0.0}, 0.0, 0.5, 35.0);
        REQUIRE(rows.size() == 1);
        REQUIRE(rows[0].result.has_value());
        const auto direct = find_v_stab(p, env, 0.1, 0.0, 0.0, 0.5, 35.0);
        REQUIRE(rows[0].result->v_stab == direct.v_stab);
    }
    SECTION("spans the expected band over the slip-angle grid") {
        std::vector<double> grid;
        for (int d = 0; d <= 8; ++d) grid.push_back(deg_to_rad(d));
        const auto rows = stability_envelope(p, env, 0.1, grid, 0.0, 0.5, 35.0);
        REQUIRE(rows.size() == grid.size());
        for (const auto& r : rows) {
            REQUIRE(r.result.has_value());
            REQUIRE(r.result->status == VstabStatus::Root);
            const double kmh = mps_to_kmh(r.result->v_stab);
            REQUIRE(kmh > 0.0);
            REQUIRE(kmh < 30.0);
        }
    }
    SECTION("rows are identical regardless of thread count") {
        std::vector<double> grid;
        for (int d = 0; d <= 8; ++d) grid.push_back(deg_to_rad(d));
        const auto serial = stability_envelope(p, env, 0.1, grid, 0.0, 0.5, 35.0, 1);
        const auto parallel = stability_envelope(p, env, 0.1, grid, 0.0, 0.5, 35.0, 4);
        REQUIRE(envelope_csv(serial) == envelope_csv(parallel));
    }
    SECTION("per-row failures are recorded, not fatal") {
        // omega = 0 makes every evaluation singular
        const auto rows = stability_envelope(p, env, 0.0, {0.0, deg_to_rad(4.0)}, 0.0, 0.5, 35.0);
        REQUIRE(rows.size() == 2);
        for (const auto& r : rows) {
            REQUIRE_FALSE(r.result.has_value());
            REQUIRE(r.error == "singular_in_bracket");
        }
    }
}
