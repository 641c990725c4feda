#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "skidsim/model.hpp"
#include "skidsim/parallel.hpp"

namespace skidsim {

// Skid damping is possible while d(omega_z)/dt <= 0.
struct StabilityVerdict {
    double eps_z = 0.0;
    bool damping = false;
    std::optional<double> v_stab;
};

inline StabilityVerdict classify(const MotionState& s, const VehicleParams& p,
                                 const Environment& env) {
    const double eps = yaw_angular_acceleration(s, p, env);
    return {eps, eps <= 0.0, std::nullopt};
}

enum class VstabStatus {
    Root,              // eps_z crosses zero inside the bracket
    StableThroughout,  // eps_z <= 0 over the whole bracket
    NotBracketed,      // eps_z > 0 over the whole bracket
};

inline const char* vstab_status_name(VstabStatus s) noexcept {
    switch (s) {
        case VstabStatus::Root: return "root";
        case VstabStatus::StableThroughout: return "stable_throughout";
        case VstabStatus::NotBracketed: return "not_bracketed";
    }
    return "unknown";
}

struct VstabResult {
    VstabStatus status = VstabStatus::NotBracketed;
    double v_stab = 0.0;     // boundary speed for Root, v_hi for StableThroughout, unset otherwise
    bool multi_root = false; // more than one sign change seen at the scan resolution
};

namespace detail {

// Evaluate eps_z(v); on a singular point, retry once at a subdivided offset.
template <class F>
double eval_with_retry(F&& f, double v, double step) {
    try {
        return f(v);
    } catch (const SkidError& e) {
        if (e.is_validation()) throw;
        try {
            return f(v + 0.5 * step);
        } catch (const SkidError&) {
            throw SkidError(ErrorCode::SingularInBracket, "v_x1",
                            "eps_z is singular inside the bracket near v = " + std::to_string(v));
        }
    }
}

}  // namespace detail

// Self-stabilization speed boundary: the root of eps_z(v_x1) = 0 at fixed
// omega_z, delta_1, gamma_b, found by bisection after a 64-point sign scan.
inline VstabResult find_v_stab(const VehicleParams& p, const Environment& env, double omega_z,
                               double delta_1, double gamma_b, double v_lo, double v_hi,
                               double v_tol = 1e-6) {
    if (!(v_lo > 0.0) || !(v_hi > v_lo))
        throw SkidError(ErrorCode::InvalidParams, "bracket", "need 0 < v_lo < v_hi");

    const auto eps_at = [&](double v) {
        const MotionState s{v, omega_z, delta_1, gamma_b, 0.0};
        return yaw_angular_acceleration(s, p, env);
    };

    constexpr int kScanPoints = 64;
    const double span = v_hi - v_lo;
    const double scan_step = span / (kScanPoints - 1);

    double prev_v = v_lo;
    double prev_f = detail::eval_with_retry(eps_at, v_lo, scan_step);
    bool any_positive = prev_f > 0.0;
    int sign_changes = 0;
    double first_lo = 0.0, first_hi = 0.0, first_flo = 0.0;

    for (int i = 1; i < kScanPoints; ++i) {
        const double v = (i == kScanPoints - 1) ? v_hi : v_lo + i * scan_step;
        const double f = detail::eval_with_retry(eps_at, v, scan_step);
        if ((f > 0.0) != (prev_f > 0.0)) {
            if (++sign_changes == 1) {
                first_lo = prev_v;
                first_hi = v;
                first_flo = prev_f;
            }
        }
        any_positive = any_positive || f > 0.0;
        prev_v = v;
        prev_f = f;
    }

    if (sign_changes == 0) {
        if (!any_positive) return {VstabStatus::StableThroughout, v_hi, false};
        return {VstabStatus::NotBracketed, 0.0, false};
    }

    double lo = first_lo, hi = first_hi, flo = first_flo;
    while (hi - lo > v_tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = detail::eval_with_retry(eps_at, mid, 0.25 * (hi - lo));
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {VstabStatus::Root, 0.5 * (lo + hi), sign_changes > 1};
}

struct EnvelopeRow {
    double delta_1 = 0.0;  // rad
    std::optional<VstabResult> result;
    std::string error;  // error code name when the row failed
};

// One find_v_stab per delta_1 grid point; per-row failures are recorded, not fatal.
// Rows are ordered by the input grid regardless of execution order.
inline std::vector<EnvelopeRow> stability_envelope(const VehicleParams& p, const Environment& env,
                                                   double omega_z,
                                                   const std::vector<double>& delta_grid,
                                                   double gamma_b, double v_lo, double v_hi,
                                                   std::size_t threads = 1) {
    std::vector<EnvelopeRow> rows(delta_grid.size());
    parallel_for(delta_grid.size(), threads, [&](std::size_t i) {
        rows[i].delta_1 = delta_grid[i];
        try {
            rows[i].result = find_v_stab(p, env, omega_z, delta_grid[i], gamma_b, v_lo, v_hi);
        } catch (const SkidError& e) {
            rows[i].error = error_code_name(e.code());
        }
    });
    return rows;
}

}  // namespace skidsim
