#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "skidsim/model.hpp"

namespace skidsim {

// Randomized non-singular evaluation grid shared by `check` and the acceptance
// suite: V in [0.5, 35] m/s, omega_z in [0.01, 0.5] rad/s, delta_1 in [0, 0.15] rad,
// gamma_b in [0, 0.3] rad, phi in [0.05, 0.9]. Deterministic for a fixed seed.
struct GridPoint {
    MotionState state;
    Environment env;
};

inline std::vector<GridPoint> random_grid(const Environment& base, std::size_t count,
                                          std::uint64_t seed = 0x5ee'd5ca1e) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> v(0.5, 35.0);
    std::uniform_real_distribution<double> w(0.01, 0.5);
    std::uniform_real_distribution<double> d(0.0, 0.15);
    std::uniform_real_distribution<double> gb(0.0, 0.3);
    std::uniform_real_distribution<double> phi(0.05, 0.9);

    std::vector<GridPoint> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        GridPoint pt;
        pt.state = {v(rng), w(rng), d(rng), gb(rng), 0.0};
        pt.env = base;
        pt.env.phi = phi(rng);
        points.push_back(pt);
    }
    return points;
}

struct ResidualStats {
    std::size_t evaluated = 0;
    std::size_t failures = 0;
    double worst = 0.0;
    double tolerance = 0.0;
    bool pass() const noexcept { return failures == 0 && evaluated > 0; }
};

// |closed form - independent linear solve| / max(1, |closed form|) <= 1e-9.
inline ResidualStats oracle_equivalence(const VehicleParams& p, const Environment& base,
                                        std::size_t count, std::uint64_t seed = 0x5ee'd5ca1e) {
    ResidualStats stats;
    stats.tolerance = 1e-9;
    for (const auto& pt : random_grid(base, count, seed)) {
        const double closed = yaw_angular_acceleration(pt.state, p, pt.env);
        const double oracle = yaw_accel_oracle(pt.state, p, pt.env);
        const double rel = std::abs(closed - oracle) / std::max(1.0, std::abs(closed));
        stats.worst = std::max(stats.worst, rel);
        if (!(rel < stats.tolerance)) ++stats.failures;
        ++stats.evaluated;
    }
    return stats;
}

// Body accelerations with the course angle eliminated must match the
// normal/tangential composition through the course angle, <= 1e-10 relative.
inline ResidualStats substitution_identity(const VehicleParams& p, const Environment& base,
                                           std::size_t count,
                                           std::uint64_t seed = 0x5ee'd5ca1e) {
    ResidualStats stats;
    stats.tolerance = 1e-10;
    for (const auto& pt : random_grid(base, count, seed)) {
        const double eps = yaw_angular_acceleration(pt.state, p, pt.env);
        const BodyAccel direct = body_accelerations(pt.state, p, eps);
        const double theta = course_angle(pt.state, p);
        const AccelComponents ac = accel_components(pt.state, p, eps);
        const double ax = ac.a_c_n * std::sin(theta) + ac.a_c_t * std::cos(theta);
        const double ay = ac.a_c_t * std::sin(theta) - ac.a_c_n * std::cos(theta);
        const double rel =
            std::max(std::abs(ax - direct.ax) / std::max(1.0, std::abs(direct.ax)),
                     std::abs(ay - direct.ay) / std::max(1.0, std::abs(direct.ay)));
        stats.worst = std::max(stats.worst, rel);
        if (!(rel <= stats.tolerance)) ++stats.failures;
        ++stats.evaluated;
    }
    return stats;
}

// Back-substituting the front lateral reaction from the moment balance into the
// lateral force balance must leave <= 1e-8 residual relative to the largest term.
inline ResidualStats system_consistency(const VehicleParams& p, const Environment& base,
                                        std::size_t count, std::uint64_t seed = 0x5ee'd5ca1e) {
    ResidualStats stats;
    stats.tolerance = 1e-8;
    for (const auto& pt : random_grid(base, count, seed)) {
        const double eps = yaw_angular_acceleration(pt.state, p, pt.env);
        const double r_d1 = front_lateral_reaction(pt.state, p, pt.env, eps);
        const double r_b = rear_traction_reaction(pt.state, p, pt.env, eps);
        const BodyAccel ba = body_accelerations(pt.state, p, eps);
        const AeroForces aero = aero_forces(pt.state.v_x1, p, pt.env);
        const double lhs = p.m_a * ba.ay;
        const double rhs = -r_d1 * std::cos(pt.state.delta_1) -
                           r_b * std::cos(pt.state.gamma_b) + aero.p_w_y1;
        const double scale = std::max({1.0, std::abs(lhs), std::abs(r_d1), std::abs(r_b)});
        const double rel = std::abs(lhs - rhs) / scale;
        stats.worst = std::max(stats.worst, rel);
        if (!(rel <= stats.tolerance)) ++stats.failures;
        ++stats.evaluated;
    }
    return stats;
}

}  // namespace skidsim
