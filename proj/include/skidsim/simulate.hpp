#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "skidsim/model.hpp"

namespace skidsim {

struct SimConfig {
    double dt = 1e-3;          // step, s
    double t_end = 10.0;       // horizon, s
    bool stop_on_damped = true;  // stop when omega_z crosses zero
    int record_every = 1;      // record one row every N steps
};

struct TrajectoryRow {
    double t = 0.0;
    double omega_z = 0.0;
    double v_x1 = 0.0;
    double psi = 0.0;  // heading, rad
    double x = 0.0;    // m
    double y = 0.0;    // m
    double eps_z = 0.0;
    double r_b = 0.0;
    double r_z2 = 0.0;
    bool damping = false;
};

enum class SimTermination { TimeEnd, SkidDamped, Singular };

inline const char* sim_termination_name(SimTermination t) noexcept {
    switch (t) {
        case SimTermination::TimeEnd: return "TimeEnd";
        case SimTermination::SkidDamped: return "SkidDamped";
        case SimTermination::Singular: return "Singular";
    }
    return "unknown";
}

struct SimResult {
    std::vector<TrajectoryRow> rows;
    SimTermination reason = SimTermination::TimeEnd;
    double t_final = 0.0;
    double omega_final = 0.0;
    double v_final = 0.0;
    double psi_final = 0.0;
};

// Integrator state: (omega_z, v_x1, psi, x, y).
using SimState = std::array<double, 5>;

namespace detail {

inline SimState advance(const SimState& y, double h, const SimState& k) {
    SimState out;
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
    return out;
}

}  // namespace detail

// Classical fixed-step 4-stage step. The derivative field is injected so tests
// can drive the integrator with synthetic fields.
template <class Field>
SimState rk4_step(const SimState& y, double dt, Field&& f) {
    const SimState k1 = f(y);
    const SimState k2 = f(detail::advance(y, 0.5 * dt, k1));
    const SimState k3 = f(detail::advance(y, 0.5 * dt, k2));
    const SimState k4 = f(detail::advance(y, dt, k3));
    SimState out;
    for (std::size_t i = 0; i < y.size(); ++i)
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

struct SkidRates {
    double d_omega_z = 0.0;
    double d_v_x1 = 0.0;
};

// Consistent derivative pair: d(v_x1)/dt is the longitudinal acceleration
// evaluated at the same eps_z that is returned as d(omega_z)/dt.
inline SkidRates derivative(const MotionState& s, const VehicleParams& p,
                            const Environment& env) {
    const double eps = yaw_angular_acceleration(s, p, env);
    return {eps, body_accelerations(s, p, eps).ax};
}

// Open-loop skid integration. delta_1, gamma_b and s_x are held constant; the
// planar position is reconstructed by moving with speed v_x1 along the heading,
// a visualization aid rather than a validated path (the model carries no
// lateral-velocity state; the lateral acceleration is recorded per row only).
inline SimResult simulate(const MotionState& initial, const VehicleParams& p,
                          const Environment& env, const SimConfig& cfg) {
    if (!(cfg.dt > 0.0))
        throw SkidError(ErrorCode::InvalidParams, "dt", "step must be positive");
    if (!(cfg.t_end > 0.0))
        throw SkidError(ErrorCode::InvalidParams, "t_end", "horizon must be positive");
    if (cfg.record_every < 1)
        throw SkidError(ErrorCode::InvalidParams, "record_every", "record_every must be >= 1");

    const auto field = [&](const SimState& y) -> SimState {
        const MotionState s{y[1], y[0], initial.delta_1, initial.gamma_b, initial.s_x};
        const SkidRates r = derivative(s, p, env);
        return {r.d_omega_z, r.d_v_x1, y[0], y[1] * std::cos(y[2]), y[1] * std::sin(y[2])};
    };
    const auto record = [&](SimResult& out, double t, const SimState& y) {
        const MotionState s{y[1], y[0], initial.delta_1, initial.gamma_b, initial.s_x};
        const SkidDerived d = evaluate_skid(s, p, env);
        out.rows.push_back({t, y[0], y[1], y[2], y[3], y[4], d.eps_z, d.r_b, d.r_z2,
                            d.eps_z <= 0.0});
    };
    const auto finish = [&](SimResult& out, SimTermination reason, double t,
                            const SimState& y) {
        out.reason = reason;
        out.t_final = t;
        out.omega_final = y[0];
        out.v_final = y[1];
        out.psi_final = y[2];
        return out;
    };

    const auto n_steps =
        static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    SimResult out;
    SimState y{initial.omega_z, initial.v_x1, 0.0, 0.0, 0.0};
    record(out, 0.0, y);  // throws on a singular initial state

    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        SimState next;
        try {
            next = rk4_step(y, cfg.dt, field);
        } catch (const SkidError&) {
            // A stage left the model's domain. If the yaw rate was about to cross
            // zero anyway, report the damped stop from the linear prediction;
            // otherwise surface the halt with the last good state.
            if (cfg.stop_on_damped) {
                try {
                    const MotionState s{y[1], y[0], initial.delta_1, initial.gamma_b,
                                        initial.s_x};
                    const SkidRates r = derivative(s, p, env);
                    const double predicted = y[0] + cfg.dt * r.d_omega_z;
                    if ((predicted <= 0.0) != (y[0] <= 0.0) && r.d_omega_z != 0.0) {
                        const double tau =
                            std::clamp(-y[0] / r.d_omega_z, 0.0, cfg.dt);
                        SimState stop = detail::advance(y, tau, field(y));
                        stop[0] = 0.0;
                        return finish(out, SimTermination::SkidDamped, t + tau, stop);
                    }
                } catch (const SkidError&) {
                }
            }
            return finish(out, SimTermination::Singular, t, y);
        }

        const double t_next = static_cast<double>(i + 1) * cfg.dt;
        if (cfg.stop_on_damped && (next[0] <= 0.0) != (y[0] <= 0.0)) {
            // Refine the crossing time between the bracketing steps.
            const double frac = y[0] / (y[0] - next[0]);
            const double tau = frac * cfg.dt;
            SimState stop;
            for (std::size_t k = 0; k < y.size(); ++k)
                stop[k] = y[k] + frac * (next[k] - y[k]);
            stop[0] = 0.0;
            return finish(out, SimTermination::SkidDamped, t + tau, stop);
        }

        y = next;
        if ((i + 1) % static_cast<std::size_t>(cfg.record_every) == 0) {
            try {
                record(out, t_next, y);
            } catch (const SkidError&) {
                return finish(out, SimTermination::Singular, t_next, y);
            }
        }
    }
    return finish(out, SimTermination::TimeEnd, static_cast<double>(n_steps) * cfg.dt, y);
}

}  // namespace skidsim
