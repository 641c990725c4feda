#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <utility>

#include "skidsim/errors.hpp"

namespace skidsim {

inline constexpr double kPi = std::numbers::pi;

// Unit conversions live at the I/O boundary; everything internal is SI (m, kg, s, N, rad).
inline constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }
inline constexpr double kmh_to_mps(double kmh) noexcept { return kmh / 3.6; }
inline constexpr double mps_to_kmh(double mps) noexcept { return mps * 3.6; }

// Geometry, mass, inertia and aerodynamic constants of the vehicle.
struct VehicleParams {
    double m_a = 0.0;  // mass, kg
    double a = 0.0;    // centre of mass to front axle, m
    double b = 0.0;    // centre of mass to rear axle, m
    double L = 0.0;    // wheelbase, m (= a + b)
    double h = 0.0;    // centre-of-mass height, m
    double h_w = 0.0;  // aerodynamic pressure centre height, m (defaults to h)
    double r_o = 0.0;  // dynamic wheel radius, m
    double i_z = 0.0;  // radius of inertia about the vertical axis, m
    double I_zc = 0.0; // yaw moment of inertia, kg m^2 (= m_a * i_z^2)
    double kF = 0.0;   // lumped longitudinal drag factor, N s^2/m^2

    std::optional<double> F;    // frontal projected area, m^2
    std::optional<double> c_X;  // longitudinal drag coefficient
    double c_Y = 0.0;           // lateral drag coefficient (0 = lateral aero off)
    double f_roll = 0.015;      // rolling-resistance coefficient, diagnostics only
};

// Road/air context.
struct Environment {
    double phi = 0.0;  // grip coefficient
    double rho = 1.22; // air density, kg/m^3
    double g = 9.81;   // gravitational acceleration, m/s^2

    double phi_limit = 1.5;  // plausibility bound on phi
};

// Instantaneous kinematic state of the skidding vehicle, body frame.
struct MotionState {
    double v_x1 = 0.0;     // longitudinal velocity, m/s
    double omega_z = 0.0;  // yaw rate, rad/s
    double delta_1 = 0.0;  // front slip (drift) angle, rad
    double gamma_b = 0.0;  // direction angle of the rear-axle resultant reaction, rad
    double s_x = 0.0;      // drive-wheel relative slip, [0, 1]
};

// Intermediate quantities of one closed-form evaluation.
struct SkidDerived {
    double theta_c = 0.0;       // course-deviation angle, rad
    double a_c_n = 0.0;         // normal acceleration of the centre of mass, m/s^2
    double a_c_t = 0.0;         // tangential acceleration of the centre of mass, m/s^2
    double ax_body = 0.0;       // longitudinal body-frame acceleration, m/s^2
    double ay_body = 0.0;       // lateral body-frame acceleration, m/s^2
    double p_w_x1 = 0.0;        // longitudinal aerodynamic force, N
    double p_w_y1 = 0.0;        // lateral aerodynamic force, N
    double p_j = 0.0;           // inertia force m_a * ax_body, N
    double r_z2 = 0.0;          // rear-axle vertical reaction, N
    double r_b = 0.0;           // rear-axle tangent (traction) reaction, N
    double omega_factor = 0.0;  // phi * cos(gamma_b) * (h - r_o), m
    double eps_z = 0.0;         // yaw angular acceleration, rad/s^2
    double r_delta1 = 0.0;      // back-computed front lateral reaction, N
    bool rear_load_valid = true;  // false when r_z2 < 0 (model validity violated)
};

// i_z = sqrt(I_zc / m_a); exactly one of the two may be supplied, the other derives.
// If both are supplied they must agree to 1e-9 relative.
inline std::pair<double, double> inertia_conversions(double m_a, std::optional<double> i_z,
                                                     std::optional<double> I_zc) {
    if (m_a <= 0.0)
        throw SkidError(ErrorCode::InvalidParams, "m_a", "mass must be positive");
    if (!i_z && !I_zc)
        throw SkidError(ErrorCode::InvalidParams, "i_z", "one of i_z or I_zc is required");
    if (i_z && *i_z <= 0.0)
        throw SkidError(ErrorCode::InvalidParams, "i_z", "radius of inertia must be positive");
    if (I_zc && *I_zc <= 0.0)
        throw SkidError(ErrorCode::InvalidParams, "I_zc", "yaw moment of inertia must be positive");
    if (i_z && I_zc) {
        const double implied = m_a * *i_z * *i_z;
        if (std::abs(implied - *I_zc) > 1e-9 * std::abs(*I_zc))
            throw SkidError(ErrorCode::InvalidParams, "I_zc",
                            "I_zc inconsistent with m_a * i_z^2 beyond 1e-9 relative");
        return {*i_z, *I_zc};
    }
    if (i_z) return {*i_z, m_a * *i_z * *i_z};
    return {std::sqrt(*I_zc / m_a), *I_zc};
}

inline void validate_params(const VehicleParams& p) {
    auto fail = [](const char* sym, const char* msg) {
        throw SkidError(ErrorCode::InvalidParams, sym, msg);
    };
    if (!(p.m_a > 0.0)) fail("m_a", "mass must be positive");
    if (!(p.a > 0.0)) fail("a", "front axle distance must be positive");
    if (!(p.b > 0.0)) fail("b", "rear axle distance must be positive");
    if (std::abs(p.L - (p.a + p.b)) > 1e-9)
        fail("L", "wheelbase must equal a + b within 1e-9 m");
    if (!(p.r_o >= 0.0)) fail("r_o", "wheel radius must be non-negative");
    if (!(p.h > p.r_o)) fail("h", "centre-of-mass height must exceed the wheel radius");
    if (!(p.h_w > 0.0)) fail("h_w", "aerodynamic pressure centre height must be positive");
    if (!(p.i_z > 0.0)) fail("i_z", "radius of inertia must be positive");
    if (std::abs(p.I_zc - p.m_a * p.i_z * p.i_z) > 1e-9 * std::abs(p.I_zc))
        fail("I_zc", "yaw inertia must equal m_a * i_z^2 within 1e-9 relative");
    if (!(p.kF >= 0.0)) fail("kF", "drag factor must be non-negative");
    if (p.c_Y != 0.0 && !p.F)
        fail("F", "frontal area is required when c_Y is nonzero");
    if (!(p.f_roll >= 0.0)) fail("f_roll", "rolling-resistance coefficient must be non-negative");
}

// kF is authoritative; when c_X and F are both present it must match c_X * rho/2 * F.
inline void validate_drag_consistency(const VehicleParams& p, const Environment& env) {
    if (p.c_X && p.F) {
        const double implied = *p.c_X * 0.5 * env.rho * *p.F;
        if (std::abs(implied - p.kF) > 1e-6 * std::abs(p.kF))
            throw SkidError(ErrorCode::InvalidParams, "kF",
                            "kF inconsistent with c_X * rho/2 * F beyond 1e-6 relative");
    }
}

inline void validate_environment(const Environment& env) {
    if (!(env.rho > 0.0))
        throw SkidError(ErrorCode::InvalidParams, "rho", "air density must be positive");
    if (!(env.g > 0.0))
        throw SkidError(ErrorCode::InvalidParams, "g", "gravity must be positive");
    if (!(env.phi >= 0.0) || env.phi > env.phi_limit)
        throw SkidError(ErrorCode::InvalidParams, "phi",
                        "grip coefficient outside [0, phi_limit]");
}

inline void validate_state(const MotionState& s) {
    if (!(s.v_x1 >= 0.0))
        throw SkidError(ErrorCode::InvalidState, "v_x1", "forward speed must be non-negative");
    if (!(std::abs(s.delta_1) < kPi / 2.0))
        throw SkidError(ErrorCode::InvalidState, "delta_1", "slip angle must lie in (-pi/2, pi/2)");
    if (!(std::abs(s.gamma_b) < kPi / 2.0))
        throw SkidError(ErrorCode::InvalidState, "gamma_b",
                        "rear reaction angle must lie in (-pi/2, pi/2)");
}

}  // namespace skidsim
