#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "skidsim/errors.hpp"

namespace skidsim {

// phi(S_x) models bridging the drive-wheel slip ratio to the grip coefficient.

struct ConstantGrip {
    double phi = 0.0;
};

// phi(S) = phi_max * min(S / s_crit, 1)
struct LinearSaturatingGrip {
    double phi_max = 0.0;
    double s_crit = 0.0;
};

// phi(S) = c1 * (1 - exp(-c2 * S)) - c3 * S
struct BurckhardtGrip {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

using GripModel = std::variant<ConstantGrip, LinearSaturatingGrip, BurckhardtGrip>;

// Dry-asphalt-style defaults; not a measured parameter set for any specific tire.
inline BurckhardtGrip dry_asphalt_burckhardt() { return BurckhardtGrip{1.28, 23.99, 0.52}; }

inline void validate_grip(const GripModel& model, double phi_limit = 1.5) {
    auto fail = [](const char* sym, const char* msg) {
        throw SkidError(ErrorCode::InvalidParams, sym, msg);
    };
    if (const auto* c = std::get_if<ConstantGrip>(&model)) {
        if (!(c->phi >= 0.0) || c->phi > phi_limit)
            fail("grip.phi", "constant grip outside [0, phi_limit]");
    } else if (const auto* l = std::get_if<LinearSaturatingGrip>(&model)) {
        if (!(l->phi_max >= 0.0) || l->phi_max > phi_limit)
            fail("grip.phi_max", "saturation grip outside [0, phi_limit]");
        if (!(l->s_crit > 0.0) || l->s_crit > 1.0)
            fail("grip.s_crit", "critical slip must lie in (0, 1]");
    } else if (const auto* b = std::get_if<BurckhardtGrip>(&model)) {
        if (!(b->c1 > 0.0)) fail("grip.c1", "c1 must be positive");
        if (!(b->c2 > 0.0)) fail("grip.c2", "c2 must be positive");
        if (!(b->c3 >= 0.0)) fail("grip.c3", "c3 must be non-negative");
        // phi is concave with phi(0) = 0, so non-negativity on [0,1] reduces to the endpoint.
        const double at_one = b->c1 * (1.0 - std::exp(-b->c2)) - b->c3;
        if (at_one < 0.0) fail("grip.c3", "phi(S) dips below zero on [0, 1]");
        double peak = at_one;
        if (b->c3 > 0.0) {
            const double s_peak = std::log(b->c1 * b->c2 / b->c3) / b->c2;
            if (s_peak > 0.0 && s_peak < 1.0)
                peak = b->c1 * (1.0 - std::exp(-b->c2 * s_peak)) - b->c3 * s_peak;
        } else {
            peak = b->c1 * (1.0 - std::exp(-b->c2));
        }
        if (peak > phi_limit) fail("grip.c1", "peak grip exceeds phi_limit");
    }
}

// Evaluate phi(s_x); continuous in s_x for every model variant.
inline double grip_coefficient(const GripModel& model, double s_x) {
    if (!(s_x >= 0.0) || s_x > 1.0)
        throw SkidError(ErrorCode::InvalidSlip, "s_x", "slip ratio must lie in [0, 1]");
    return std::visit(
        [s_x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ConstantGrip>) {
                return m.phi;
            } else if constexpr (std::is_same_v<T, LinearSaturatingGrip>) {
                return m.phi_max * std::min(s_x / m.s_crit, 1.0);
            } else {
                return m.c1 * (1.0 - std::exp(-m.c2 * s_x)) - m.c3 * s_x;
            }
        },
        model);
}

inline std::string grip_model_name(const GripModel& model) {
    if (std::holds_alternative<ConstantGrip>(model)) return "constant";
    if (std::holds_alternative<LinearSaturatingGrip>(model)) return "linear_saturating";
    return "burckhardt";
}

}  // namespace skidsim
