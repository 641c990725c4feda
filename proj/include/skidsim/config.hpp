#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skidsim/grip.hpp"
#include "skidsim/types.hpp"

namespace skidsim {

// Validated run configuration: vehicle, environment, optional grip model and
// default motion state. Angles are stored in radians (the file carries degrees).
struct RunConfig {
    VehicleParams vehicle;
    Environment environment;
    GripModel grip = ConstantGrip{0.0};
    bool grip_specified = false;
    MotionState default_state;
};

struct CheckItem {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct ConfigReport {
    RunConfig config;
    std::vector<CheckItem> checks;
    bool ok = true;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown_keys(const json& obj, const std::string& block,
                                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw SkidError(ErrorCode::InvalidParams, block + "." + it.key(),
                            "unknown config key '" + block + "." + it.key() + "'");
    }
}

inline double number_at(const json& obj, const std::string& block, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw SkidError(ErrorCode::InvalidParams, block + "." + key,
                        "config key '" + block + "." + key + "' must be a number");
    return v.get<double>();
}

inline std::optional<double> opt_number(const json& obj, const std::string& block,
                                        const std::string& key) {
    if (!obj.contains(key)) return std::nullopt;
    return number_at(obj, block, key);
}

inline double req_number(const json& obj, const std::string& block, const std::string& key) {
    if (!obj.contains(key))
        throw SkidError(ErrorCode::InvalidParams, block + "." + key,
                        "missing required config key '" + block + "." + key + "'");
    return number_at(obj, block, key);
}

inline const json& req_object(const json& obj, const std::string& key) {
    if (!obj.contains(key) || !obj.at(key).is_object())
        throw SkidError(ErrorCode::InvalidParams, key,
                        "missing required config block '" + key + "'");
    return obj.at(key);
}

inline GripModel parse_grip(const json& g) {
    if (!g.contains("model") || !g.at("model").is_string())
        throw SkidError(ErrorCode::InvalidParams, "grip.model",
                        "grip block requires a 'model' string");
    const std::string model = g.at("model").get<std::string>();
    if (model == "constant") {
        reject_unknown_keys(g, "grip", {"model", "phi"});
        return ConstantGrip{req_number(g, "grip", "phi")};
    }
    if (model == "linear_saturating") {
        reject_unknown_keys(g, "grip", {"model", "phi_max", "s_crit"});
        return LinearSaturatingGrip{req_number(g, "grip", "phi_max"),
                                    req_number(g, "grip", "s_crit")};
    }
    if (model == "burckhardt") {
        reject_unknown_keys(g, "grip", {"model", "c1", "c2", "c3"});
        return BurckhardtGrip{req_number(g, "grip", "c1"), req_number(g, "grip", "c2"),
                              req_number(g, "grip", "c3")};
    }
    throw SkidError(ErrorCode::InvalidParams, "grip.model",
                    "unknown grip model '" + model +
                        "' (expected constant, linear_saturating or burckhardt)");
}

}  // namespace detail

// Parse a config file. Structural problems (unreadable file, malformed JSON,
// unknown keys, missing required keys, wrong types) always throw. Numeric
// invariant violations are returned as failed checks so `check` can list them;
// strict loading (load_run_config) turns the first failed check into an error.
inline ConfigReport inspect_run_config(const std::string& path) {
    using detail::json;

    std::ifstream in(path);
    if (!in)
        throw SkidError(ErrorCode::InvalidParams, "config", "cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();

    json root;
    try {
        root = json::parse(buffer.str());
    } catch (const json::exception& e) {
        throw SkidError(ErrorCode::InvalidParams, "config",
                        "config is not valid JSON: " + std::string(e.what()));
    }
    if (!root.is_object())
        throw SkidError(ErrorCode::InvalidParams, "config", "config root must be an object");
    detail::reject_unknown_keys(root, "config", {"vehicle", "environment", "grip", "state"});

    ConfigReport report;
    auto& cfg = report.config;
    auto check = [&](const std::string& name, bool pass, const std::string& detail) {
        report.checks.push_back({name, pass, detail});
        report.ok = report.ok && pass;
    };

    // environment first: the drag derivation below needs rho
    const json& je = detail::req_object(root, "environment");
    detail::reject_unknown_keys(je, "environment", {"phi", "rho", "g", "phi_limit"});
    cfg.environment.phi = detail::req_number(je, "environment", "phi");
    cfg.environment.rho = detail::opt_number(je, "environment", "rho").value_or(1.22);
    cfg.environment.g = detail::opt_number(je, "environment", "g").value_or(9.81);
    cfg.environment.phi_limit = detail::opt_number(je, "environment", "phi_limit").value_or(1.5);

    const json& jv = detail::req_object(root, "vehicle");
    detail::reject_unknown_keys(jv, "vehicle",
                                {"m_a", "a", "b", "L", "h", "h_w", "r_o", "i_z", "I_zc", "kF",
                                 "F", "c_X", "c_Y", "f_roll"});
    auto& v = cfg.vehicle;
    v.m_a = detail::req_number(jv, "vehicle", "m_a");
    v.a = detail::req_number(jv, "vehicle", "a");
    v.b = detail::req_number(jv, "vehicle", "b");
    v.h = detail::req_number(jv, "vehicle", "h");
    v.r_o = detail::req_number(jv, "vehicle", "r_o");
    v.h_w = detail::opt_number(jv, "vehicle", "h_w").value_or(v.h);
    v.F = detail::opt_number(jv, "vehicle", "F");
    v.c_X = detail::opt_number(jv, "vehicle", "c_X");
    v.c_Y = detail::opt_number(jv, "vehicle", "c_Y").value_or(0.0);
    v.f_roll = detail::opt_number(jv, "vehicle", "f_roll").value_or(0.015);

    const auto given_L = detail::opt_number(jv, "vehicle", "L");
    v.L = given_L.value_or(v.a + v.b);
    check("wheelbase", std::abs(v.L - (v.a + v.b)) <= 1e-9,
          "L = a + b within 1e-9 m (L = " + std::to_string(v.L) + ")");

    const auto given_iz = detail::opt_number(jv, "vehicle", "i_z");
    const auto given_Izc = detail::opt_number(jv, "vehicle", "I_zc");
    if (!given_iz && !given_Izc)
        throw SkidError(ErrorCode::InvalidParams, "vehicle.i_z",
                        "one of vehicle.i_z or vehicle.I_zc is required");
    if (given_iz && given_Izc) {
        v.i_z = *given_iz;
        v.I_zc = *given_Izc;
        const double implied = v.m_a * v.i_z * v.i_z;
        check("yaw_inertia", std::abs(implied - v.I_zc) <= 1e-9 * std::abs(v.I_zc),
              "I_zc = m_a * i_z^2 within 1e-9 relative");
    } else {
        if (given_iz) {
            v.i_z = *given_iz;
            v.I_zc = v.m_a > 0.0 ? v.m_a * v.i_z * v.i_z : 0.0;
        } else {
            v.I_zc = *given_Izc;
            v.i_z = (v.m_a > 0.0 && v.I_zc > 0.0) ? std::sqrt(v.I_zc / v.m_a) : 0.0;
        }
        check("yaw_inertia", v.i_z > 0.0 && v.I_zc > 0.0, "derived from the given quantity");
    }

    const auto given_kF = detail::opt_number(jv, "vehicle", "kF");
    if (!given_kF && !(v.c_X && v.F))
        throw SkidError(ErrorCode::InvalidParams, "vehicle.kF",
                        "vehicle.kF is required unless both c_X and F are given");
    v.kF = given_kF ? *given_kF : *v.c_X * 0.5 * cfg.environment.rho * *v.F;
    if (given_kF && v.c_X && v.F) {
        const double implied = *v.c_X * 0.5 * cfg.environment.rho * *v.F;
        check("drag_consistency", std::abs(implied - v.kF) <= 1e-6 * std::abs(v.kF),
              "kF = c_X * rho/2 * F within 1e-6 relative");
    } else {
        check("drag_consistency", true, "kF authoritative");
    }

    if (root.contains("grip")) {
        const json& jg = root.at("grip");
        if (!jg.is_object())
            throw SkidError(ErrorCode::InvalidParams, "grip", "grip block must be an object");
        cfg.grip = detail::parse_grip(jg);
        cfg.grip_specified = true;
    } else {
        cfg.grip = ConstantGrip{cfg.environment.phi};
    }

    if (root.contains("state")) {
        const json& js = root.at("state");
        if (!js.is_object())
            throw SkidError(ErrorCode::InvalidParams, "state", "state block must be an object");
        detail::reject_unknown_keys(js, "state",
                                    {"v_x1", "omega_z", "delta_1_deg", "gamma_b_deg", "s_x"});
        auto& s = cfg.default_state;
        s.v_x1 = detail::opt_number(js, "state", "v_x1").value_or(0.0);
        s.omega_z = detail::opt_number(js, "state", "omega_z").value_or(0.0);
        s.delta_1 = deg_to_rad(detail::opt_number(js, "state", "delta_1_deg").value_or(0.0));
        s.gamma_b = deg_to_rad(detail::opt_number(js, "state", "gamma_b_deg").value_or(0.0));
        s.s_x = detail::opt_number(js, "state", "s_x").value_or(0.0);
    }

    auto invariant = [&](const std::string& name, auto&& fn) {
        try {
            fn();
            check(name, true, "");
        } catch (const SkidError& e) {
            check(name, false, std::string(e.what()) + " [" + e.symbol() + "]");
        }
    };
    invariant("vehicle_params", [&] { validate_params(v); });
    invariant("environment", [&] { validate_environment(cfg.environment); });
    invariant("grip_model", [&] { validate_grip(cfg.grip, cfg.environment.phi_limit); });
    invariant("state_domain", [&] {
        validate_state(cfg.default_state);
        if (!(cfg.default_state.s_x >= 0.0) || cfg.default_state.s_x > 1.0)
            throw SkidError(ErrorCode::InvalidSlip, "state.s_x", "slip ratio outside [0, 1]");
    });
    return report;
}

inline RunConfig load_run_config(const std::string& path) {
    ConfigReport report = inspect_run_config(path);
    for (const auto& item : report.checks) {
        if (!item.pass)
            throw SkidError(ErrorCode::InvalidParams, item.name,
                            "config invariant '" + item.name + "' violated: " + item.detail);
    }
    return report.config;
}

// Grip coefficient a command should use: an explicit override wins, then the
// configured grip model evaluated at the state's slip ratio, then environment phi.
inline double effective_phi(const RunConfig& cfg, const MotionState& state,
                            std::optional<double> override_phi = std::nullopt) {
    if (override_phi) {
        if (!(*override_phi >= 0.0) || *override_phi > cfg.environment.phi_limit)
            throw SkidError(ErrorCode::InvalidParams, "phi",
                            "grip override outside [0, phi_limit]");
        return *override_phi;
    }
    if (cfg.grip_specified) return grip_coefficient(cfg.grip, state.s_x);
    return cfg.environment.phi;
}

}  // namespace skidsim
