#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skidsim/grip.hpp"
#include "skidsim/model.hpp"
#include "skidsim/parallel.hpp"

namespace skidsim {

enum class SweepVar { v_x1, omega_z, phi, s_x, delta_1 };

inline const char* sweep_var_key(SweepVar v) noexcept {
    switch (v) {
        case SweepVar::v_x1: return "v_x1";
        case SweepVar::omega_z: return "omega_z";
        case SweepVar::phi: return "phi";
        case SweepVar::s_x: return "s_x";
        case SweepVar::delta_1: return "delta_1";
    }
    return "unknown";
}

struct SweepAxis {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
};

// Declarative grid: eps_z over one swept variable, optionally one series
// variable with explicit values. Angles are radians here; degrees exist only
// at the CLI/CSV boundary.
struct SweepSpec {
    std::string name;
    SweepVar x_var = SweepVar::v_x1;
    SweepAxis x;
    std::optional<SweepVar> series_var;
    std::vector<double> series;
    MotionState base_state;
    VehicleParams params;
    Environment env;
    GripModel grip = ConstantGrip{0.0};
};

// Result grid. Singular cells hold NaN and serialize as the token "nan".
struct SweepTable {
    std::string x_column;                       // header name of the x column
    std::vector<std::string> series_columns;    // one header per series column
    std::vector<double> x;                      // n values, internal units
    std::vector<std::vector<double>> eps;       // eps[j][i]: column j, row i
    SweepVar x_var = SweepVar::v_x1;
    std::size_t singular_cells = 0;
};

namespace detail {

inline void apply_sweep_value(SweepVar var, double value, MotionState& s, Environment& env,
                              const GripModel& grip) {
    switch (var) {
        case SweepVar::v_x1: s.v_x1 = value; break;
        case SweepVar::omega_z: s.omega_z = value; break;
        case SweepVar::phi: env.phi = value; break;
        case SweepVar::delta_1: s.delta_1 = value; break;
        case SweepVar::s_x:
            s.s_x = value;
            env.phi = grip_coefficient(grip, value);
            break;
    }
}

inline std::string trimmed_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline std::string x_column_name(SweepVar v) {
    switch (v) {
        case SweepVar::v_x1: return "v_x1_mps";
        case SweepVar::omega_z: return "omega_z_radps";
        case SweepVar::phi: return "phi";
        case SweepVar::s_x: return "s_x";
        case SweepVar::delta_1: return "delta_1_deg";
    }
    return "x";
}

inline std::string series_column_name(SweepVar v, double value) {
    switch (v) {
        case SweepVar::delta_1:
            return "eps_z_delta" + trimmed_number(rad_to_deg(value)) + "deg";
        case SweepVar::v_x1: return "eps_z_v" + trimmed_number(value) + "mps";
        case SweepVar::omega_z: return "eps_z_omega" + trimmed_number(value) + "radps";
        case SweepVar::phi: return "eps_z_phi" + trimmed_number(value);
        case SweepVar::s_x: return "eps_z_sx" + trimmed_number(value);
    }
    return "eps_z";
}

}  // namespace detail

inline void validate_sweep_spec(const SweepSpec& spec) {
    auto fail = [](const char* sym, const char* msg) {
        throw SkidError(ErrorCode::InvalidParams, sym, msg);
    };
    if (!(spec.x.lo < spec.x.hi)) fail("x_range", "need lo < hi");
    if (spec.x.n < 2) fail("x_range", "need at least 2 grid points");
    if (spec.x.n > 1000000) fail("x_range", "grid larger than 1e6 points");
    if (spec.series_var && *spec.series_var == spec.x_var)
        fail("series_var", "series variable must differ from the swept variable");
    if (spec.series_var && spec.series.empty())
        fail("series", "series variable given without values");
    for (double v : spec.series)
        if (!std::isfinite(v)) fail("series", "series values must be finite");
    validate_params(spec.params);
    validate_environment(spec.env);
    validate_grip(spec.grip, spec.env.phi_limit);
}

// Evaluate the grid. Cell (i, j) is eps_z at x = x_i with series value s_j applied;
// all other inputs come from the base state. Cells where evaluation is singular
// carry NaN. Deterministic for fixed spec regardless of thread count.
inline SweepTable run_sweep(const SweepSpec& spec, std::size_t threads = 1) {
    validate_sweep_spec(spec);

    SweepTable table;
    table.x_var = spec.x_var;
    table.x_column = detail::x_column_name(spec.x_var);
    table.x.resize(spec.x.n);
    for (std::size_t i = 0; i < spec.x.n; ++i)
        table.x[i] = spec.x.lo + (spec.x.hi - spec.x.lo) *
                                     static_cast<double>(i) /
                                     static_cast<double>(spec.x.n - 1);

    const bool has_series = spec.series_var.has_value();
    const std::size_t cols = has_series ? spec.series.size() : 1;
    table.eps.assign(cols, std::vector<double>(spec.x.n, 0.0));
    if (has_series) {
        for (double v : spec.series)
            table.series_columns.push_back(detail::series_column_name(*spec.series_var, v));
    } else {
        table.series_columns.push_back("eps_z_radps2");
    }

    std::vector<std::size_t> singular_per_column(cols, 0);
    parallel_for(cols, threads, [&](std::size_t j) {
        MotionState s = spec.base_state;
        Environment env = spec.env;
        for (std::size_t i = 0; i < spec.x.n; ++i) {
            MotionState cell_state = s;
            Environment cell_env = env;
            if (has_series)
                detail::apply_sweep_value(*spec.series_var, spec.series[j], cell_state,
                                          cell_env, spec.grip);
            detail::apply_sweep_value(spec.x_var, table.x[i], cell_state, cell_env, spec.grip);
            try {
                table.eps[j][i] = yaw_angular_acceleration(cell_state, spec.params, cell_env);
            } catch (const SkidError&) {
                table.eps[j][i] = std::numeric_limits<double>::quiet_NaN();
                ++singular_per_column[j];
            }
        }
    });
    for (std::size_t c : singular_per_column) table.singular_cells += c;
    return table;
}

// The six bundled parameter-study presets, on the reference vehicle
// (m = 1500 kg, a = 1.2 m, L = 2.5 m, h = 0.5 m, r_o = 0.29 m, i_z = 1.3 m,
// kF = 0.58 N s^2/m^2, rho = 1.22 kg/m^3, g = 9.81 m/s^2). Grid ranges, series
// values and the phi = 0.07 base grip are reconstructions; see the README.
inline std::vector<SweepSpec> fig2_presets() {
    VehicleParams p;
    p.m_a = 1500.0;
    p.a = 1.2;
    p.b = 1.3;
    p.L = 2.5;
    p.h = 0.5;
    p.h_w = 0.5;
    p.r_o = 0.29;
    p.i_z = 1.3;
    p.I_zc = p.m_a * p.i_z * p.i_z;
    p.kF = 0.58;

    Environment env;
    env.phi = 0.07;
    env.rho = 1.22;
    env.g = 9.81;

    const std::vector<double> delta_series = {0.0, deg_to_rad(2.0), deg_to_rad(4.0),
                                              deg_to_rad(8.0)};
    const std::vector<double> speed_series = {5.0, 20.0, 35.0};

    std::vector<SweepSpec> presets;

    SweepSpec a;
    a.name = "fig2a";
    a.x_var = SweepVar::v_x1;
    a.x = {1.0, 35.0, 35};
    a.series_var = SweepVar::delta_1;
    a.series = delta_series;
    a.base_state = {0.0, 0.1, 0.0, 0.0, 0.0};
    a.params = p;
    a.env = env;
    a.grip = ConstantGrip{env.phi};
    presets.push_back(a);

    SweepSpec b = a;
    b.name = "fig2b";
    b.base_state.omega_z = 0.01;
    presets.push_back(b);

    SweepSpec c;
    c.name = "fig2c";
    c.x_var = SweepVar::phi;
    c.x = {0.05, 0.9, 18};
    c.series_var = SweepVar::v_x1;
    c.series = speed_series;
    c.base_state = {0.0, 0.2, 0.0, 0.0, 0.0};
    c.params = p;
    c.env = env;
    c.grip = ConstantGrip{env.phi};
    presets.push_back(c);

    SweepSpec d = c;
    d.name = "fig2d";
    d.base_state.omega_z = 0.5;
    presets.push_back(d);

    SweepSpec e;
    e.name = "fig2e";
    e.x_var = SweepVar::omega_z;
    e.x = {0.01, 0.5, 50};
    e.series_var = SweepVar::v_x1;
    e.series = speed_series;
    e.base_state = {0.0, 0.0, deg_to_rad(4.0), 0.0, 0.0};
    e.params = p;
    e.env = env;
    e.grip = ConstantGrip{env.phi};
    presets.push_back(e);

    SweepSpec f;
    f.name = "fig2f";
    f.x_var = SweepVar::s_x;
    f.x = {0.0, 1.0, 21};
    f.series_var = SweepVar::delta_1;
    f.series = delta_series;
    f.base_state = {20.0, 0.1, 0.0, 0.0, 0.0};
    f.params = p;
    f.env = env;
    f.grip = dry_asphalt_burckhardt();
    presets.push_back(f);

    return presets;
}

inline SweepSpec fig2_preset(std::string_view name) {
    for (auto& spec : fig2_presets())
        if (spec.name == name) return spec;
    throw SkidError(ErrorCode::InvalidParams, "preset",
                    "unknown preset '" + std::string(name) + "' (expected fig2a..fig2f)");
}

}  // namespace skidsim
