#pragma once

#include <cmath>

#include "skidsim/types.hpp"

namespace skidsim {

// Below this yaw rate the traction-skid equations, which divide by omega_z,
// are refused rather than regularized: the model describes an ongoing skid.
inline constexpr double kOmegaMin = 1e-6;  // rad/s

// Guard for the closed-form denominator, scaled to the vehicle's inertia terms.
inline double denominator_floor(const VehicleParams& p) noexcept {
    return 1e-9 * (p.a * p.a + p.i_z * p.i_z);
}

inline void require_live_yaw_rate(double omega_z) {
    if (!(std::abs(omega_z) >= kOmegaMin))
        throw SkidError(ErrorCode::SingularYawRate, "omega_z",
                        "yaw rate magnitude below 1e-6 rad/s; the skid equations divide by omega_z");
}

// Course-deviation angle Theta_C = atan(tan(delta_1) + a * omega_z / v_x1):
// the angle between the centre-of-mass normal acceleration and the body lateral axis.
inline double course_angle(const MotionState& s, const VehicleParams& p) {
    if (!(s.v_x1 > 0.0))
        throw SkidError(ErrorCode::DegenerateState, "v_x1",
                        "course angle is undefined at zero forward speed");
    return std::atan(std::tan(s.delta_1) + p.a * s.omega_z / s.v_x1);
}

struct AccelComponents {
    double a_c_n = 0.0;  // normal component, m/s^2
    double a_c_t = 0.0;  // tangential component, m/s^2
};

// a_c_n = omega_z * v / cos(Theta_C), a_c_t = eps_z * v / (omega_z * cos(Theta_C)).
inline AccelComponents accel_components(const MotionState& s, const VehicleParams& p,
                                        double eps_z) {
    require_live_yaw_rate(s.omega_z);
    const double theta_c = course_angle(s, p);
    const double c = std::cos(theta_c);
    if (std::abs(c) < 1e-12)
        throw SkidError(ErrorCode::SingularCourseAngle, "theta_c", "course angle at +-pi/2");
    return {s.omega_z * s.v_x1 / c, eps_z * s.v_x1 / (s.omega_z * c)};
}

struct BodyAccel {
    double ax = 0.0;  // longitudinal, m/s^2
    double ay = 0.0;  // lateral, m/s^2
};

// Body-frame accelerations with the course angle eliminated:
//   ax = a w^2 + w v tan(d1) + eps v / w
//   ay = a eps + eps (v / w) tan(d1) - w v
inline BodyAccel body_accelerations(const MotionState& s, const VehicleParams& p, double eps_z) {
    require_live_yaw_rate(s.omega_z);
    const double t1 = std::tan(s.delta_1);
    const double vw = s.v_x1 / s.omega_z;
    return {p.a * s.omega_z * s.omega_z + s.omega_z * s.v_x1 * t1 + eps_z * vw,
            p.a * eps_z + eps_z * vw * t1 - s.omega_z * s.v_x1};
}

struct AeroForces {
    double p_w_x1 = 0.0;  // longitudinal, N
    double p_w_y1 = 0.0;  // lateral, N
};

// Aerodynamic forces grow with the velocity squared; kF is the authoritative
// longitudinal factor, the lateral force needs c_Y and the frontal area.
inline AeroForces aero_forces(double v_x1, const VehicleParams& p, const Environment& env) {
    const double q = v_x1 * v_x1;
    double side = 0.0;
    if (p.c_Y != 0.0) {
        if (!p.F)
            throw SkidError(ErrorCode::InvalidParams, "F",
                            "frontal area is required for lateral aero force");
        side = p.c_Y * 0.5 * env.rho * *p.F * q;
    }
    return {p.kF * q, side};
}

// Rear-axle vertical reaction in traction mode:
//   R_z2 = m g a/L + P_w (h_w - r_o)/L + P_j (h - r_o)/L,  P_w = kF v^2, P_j = m ax.
// Negative values mean the planar load model left its validity range; the caller flags them.
inline double rear_vertical_reaction(const MotionState& s, const VehicleParams& p,
                                     const Environment& env, double ax_body) {
    const double p_w = p.kF * s.v_x1 * s.v_x1;
    const double p_j = p.m_a * ax_body;
    return p.m_a * env.g * p.a / p.L + p_w * (p.h_w - p.r_o) / p.L + p_j * (p.h - p.r_o) / p.L;
}

// Grip-limited rear tangent reaction R_B = phi * R_z2, with R_z2 built from the
// longitudinal acceleration implied by eps_z.
inline double rear_traction_reaction(const MotionState& s, const VehicleParams& p,
                                     const Environment& env, double eps_z) {
    const BodyAccel ba = body_accelerations(s, p, eps_z);
    return env.phi * rear_vertical_reaction(s, p, env, ba.ax);
}

// Omega = phi * cos(gamma_B) * (h - r_o)
inline double omega_factor(const Environment& env, const VehicleParams& p, double gamma_b) {
    return env.phi * std::cos(gamma_b) * (p.h - p.r_o);
}

namespace detail {

struct ClosedForm {
    double numerator = 0.0;
    double denominator = 0.0;
    double omega_factor = 0.0;
    AeroForces aero;
};

// Closed form for the yaw angular acceleration: the planar moment balance with the
// front lateral reaction eliminated through the lateral force balance and the rear
// reaction replaced by its grip-load expansion. The eps_z-dependent part of the rear
// load moves into the denominator:
//
//   eps_z = [ a (w v + P_wy/m) - a g Om/(h - r_o)
//             - (a w^2 + w v tan d1 + kF v^2 / m) Om ] / D
//   D     = a^2 + i_z^2 + (v / w) (a tan d1 + Om)
inline ClosedForm closed_form_terms(const MotionState& s, const VehicleParams& p,
                                    const Environment& env) {
    validate_state(s);
    require_live_yaw_rate(s.omega_z);

    ClosedForm cf;
    cf.omega_factor = omega_factor(env, p, s.gamma_b);
    cf.aero = aero_forces(s.v_x1, p, env);

    const double v = s.v_x1;
    const double w = s.omega_z;
    const double t1 = std::tan(s.delta_1);
    const double lever = p.h - p.r_o;

    cf.denominator = p.a * p.a + p.i_z * p.i_z + (v / w) * (p.a * t1 + cf.omega_factor);
    if (std::abs(cf.denominator) < denominator_floor(p))
        throw SkidError(ErrorCode::SingularDenominator, "denominator",
                        "closed-form denominator vanished");

    const double free_ax = p.a * w * w + w * v * t1 + (p.kF / p.m_a) * v * v;
    cf.numerator = p.a * (w * v + cf.aero.p_w_y1 / p.m_a) -
                   p.a * env.g * cf.omega_factor / lever - free_ax * cf.omega_factor;
    return cf;
}

}  // namespace detail

// Yaw angular acceleration d(omega_z)/dt of the traction-mode skid.
inline double yaw_angular_acceleration(const MotionState& s, const VehicleParams& p,
                                       const Environment& env) {
    const auto cf = detail::closed_form_terms(s, p, env);
    return cf.numerator / cf.denominator;
}

// Back-computed front lateral reaction from the moment balance:
//   R_d1 = (I_zc eps + R_B b cos gamma_B) / (a cos delta_1)
inline double front_lateral_reaction(const MotionState& s, const VehicleParams& p,
                                     const Environment& env, double eps_z) {
    const double cd = std::cos(s.delta_1);
    if (std::abs(cd) < 1e-9)
        throw SkidError(ErrorCode::SingularSlipAngle, "delta_1", "cos(delta_1) vanished");
    const double r_b = rear_traction_reaction(s, p, env, eps_z);
    return (p.I_zc * eps_z + r_b * p.b * std::cos(s.gamma_b)) / (p.a * cd);
}

// Full per-evaluation record.
inline SkidDerived evaluate_skid(const MotionState& s, const VehicleParams& p,
                                 const Environment& env) {
    const auto cf = detail::closed_form_terms(s, p, env);
    SkidDerived d;
    d.eps_z = cf.numerator / cf.denominator;
    d.omega_factor = cf.omega_factor;
    d.p_w_x1 = cf.aero.p_w_x1;
    d.p_w_y1 = cf.aero.p_w_y1;

    const BodyAccel ba = body_accelerations(s, p, d.eps_z);
    d.ax_body = ba.ax;
    d.ay_body = ba.ay;
    d.p_j = p.m_a * d.ax_body;
    d.r_z2 = rear_vertical_reaction(s, p, env, d.ax_body);
    d.rear_load_valid = d.r_z2 >= 0.0;
    d.r_b = env.phi * d.r_z2;

    if (s.v_x1 > 0.0) {
        d.theta_c = course_angle(s, p);
        const AccelComponents ac = accel_components(s, p, d.eps_z);
        d.a_c_n = ac.a_c_n;
        d.a_c_t = ac.a_c_t;
    } else {
        // v -> 0 limits: Theta_C -> pi/2, a_c_n -> a w^2, a_c_t -> a eps.
        d.theta_c = kPi / 2.0;
        d.a_c_n = p.a * s.omega_z * s.omega_z;
        d.a_c_t = p.a * d.eps_z;
    }

    const double cd = std::cos(s.delta_1);
    if (std::abs(cd) < 1e-9)
        throw SkidError(ErrorCode::SingularSlipAngle, "delta_1", "cos(delta_1) vanished");
    d.r_delta1 = (p.I_zc * d.eps_z + d.r_b * p.b * std::cos(s.gamma_b)) / (p.a * cd);
    return d;
}

// Independent route to the yaw angular acceleration. Treats it as the unknown x:
// the rear reaction expansion is affine in x; eliminating the front lateral
// reaction between the lateral force balance and the moment balance leaves one
// scalar linear equation, solved numerically from two trial evaluations. No part
// of the closed-form algebra above is reused.
inline double yaw_accel_oracle(const MotionState& s, const VehicleParams& p,
                               const Environment& env) {
    validate_state(s);
    require_live_yaw_rate(s.omega_z);

    const double v = s.v_x1;
    const double w = s.omega_z;
    const double t1 = std::tan(s.delta_1);
    const double cg = std::cos(s.gamma_b);
    const AeroForces aero = aero_forces(v, p, env);

    const auto rear_reaction = [&](double x) {
        return p.m_a * env.phi *
               (env.g * p.a / p.L +
                (p.a * w * w + w * v * t1 + x * v / w + (p.kF / p.m_a) * v * v) *
                    (p.h - p.r_o) / p.L);
    };
    const auto moment_gap = [&](double x) {
        const double ay = p.a * x + x * (v / w) * t1 - w * v;
        const double front_cos = -p.m_a * ay - rear_reaction(x) * cg + aero.p_w_y1;
        return p.I_zc * x - (front_cos * p.a - rear_reaction(x) * p.b * cg);
    };

    const double g0 = moment_gap(0.0);
    const double slope = moment_gap(1.0) - g0;
    if (std::abs(slope) < p.m_a * denominator_floor(p))
        throw SkidError(ErrorCode::SingularDenominator, "denominator",
                        "moment balance is insensitive to the yaw acceleration");
    return -g0 / slope;
}

// Longitudinal force-balance residual for a user-chosen front resistance P_f1.
// Purely diagnostic: the yaw solution does not constrain P_f1.
inline double longitudinal_residual(const MotionState& s, const VehicleParams& p,
                                    const Environment& env, double eps_z, double p_f1,
                                    double r_delta1) {
    const BodyAccel ba = body_accelerations(s, p, eps_z);
    const AeroForces aero = aero_forces(s.v_x1, p, env);
    const double r_b = rear_traction_reaction(s, p, env, eps_z);
    const double rhs =
        -p_f1 + r_delta1 * std::sin(s.delta_1) + r_b * std::sin(s.gamma_b) - aero.p_w_x1;
    return p.m_a * ba.ax - rhs;
}

// Default diagnostic front resistance: f_roll * R_z1 with R_z1 = m g - R_z2.
inline double default_front_resistance(const MotionState& s, const VehicleParams& p,
                                       const Environment& env, double eps_z) {
    const BodyAccel ba = body_accelerations(s, p, eps_z);
    const double r_z2 = rear_vertical_reaction(s, p, env, ba.ax);
    return p.f_roll * (p.m_a * env.g - r_z2);
}

}  // namespace skidsim
