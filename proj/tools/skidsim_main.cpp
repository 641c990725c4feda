// skidsim: planar rear-drive traction-skid model front end.
//
// Subcommands: eval, sweep, vstab, simulate, check. All take --config.
// Exit codes: 0 ok, 1 check failure, 2 validation error, 3 singular state.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skidsim/skidsim.hpp"

namespace {

using namespace skidsim;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitSingular = 3;

struct StateFlags {
    std::optional<double> v_mps;
    std::optional<double> v_kmh;
    std::optional<double> omega;
    std::optional<double> delta_deg;
    std::optional<double> gamma_deg;
    std::optional<double> s_x;
    std::optional<double> phi;
};

void add_state_flags(CLI::App* cmd, StateFlags& f) {
    cmd->add_option("--v", f.v_mps, "longitudinal speed, m/s");
    cmd->add_option("--v-kmh", f.v_kmh, "longitudinal speed, km/h")->excludes("--v");
    cmd->add_option("--omega", f.omega, "yaw rate, rad/s");
    cmd->add_option("--delta", f.delta_deg, "front slip angle, deg");
    cmd->add_option("--gamma", f.gamma_deg, "rear reaction angle, deg");
    cmd->add_option("--sx", f.s_x, "drive-wheel slip ratio, 0..1");
    cmd->add_option("--phi", f.phi, "grip coefficient override");
}

MotionState resolve_state(const RunConfig& cfg, const StateFlags& f) {
    MotionState s = cfg.default_state;
    if (f.v_mps) s.v_x1 = *f.v_mps;
    if (f.v_kmh) s.v_x1 = kmh_to_mps(*f.v_kmh);
    if (f.omega) s.omega_z = *f.omega;
    if (f.delta_deg) s.delta_1 = deg_to_rad(*f.delta_deg);
    if (f.gamma_deg) s.gamma_b = deg_to_rad(*f.gamma_deg);
    if (f.s_x) s.s_x = *f.s_x;
    return s;
}

Environment resolve_environment(const RunConfig& cfg, const MotionState& state,
                                const StateFlags& f) {
    Environment env = cfg.environment;
    env.phi = effective_phi(cfg, state, f.phi);
    return env;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw SkidError(ErrorCode::InvalidParams, "output", "cannot open '" + path + "'");
    out << content;
    if (!out)
        throw SkidError(ErrorCode::InvalidParams, "output", "short write to '" + path + "'");
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& config_path, const StateFlags& flags) {
    const RunConfig cfg = load_run_config(config_path);
    const MotionState s = resolve_state(cfg, flags);
    const Environment env = resolve_environment(cfg, s, flags);

    const SkidDerived d = evaluate_skid(s, cfg.vehicle, env);
    const double p_f1 = default_front_resistance(s, cfg.vehicle, env, d.eps_z);
    const double residual = longitudinal_residual(s, cfg.vehicle, env, d.eps_z, p_f1, d.r_delta1);

    std::printf("state:    v_x1 = %g m/s (%g km/h), omega_z = %g rad/s, delta_1 = %g deg, "
                "gamma_b = %g deg, s_x = %g, phi = %g\n",
                s.v_x1, mps_to_kmh(s.v_x1), s.omega_z, rad_to_deg(s.delta_1),
                rad_to_deg(s.gamma_b), s.s_x, env.phi);
    std::printf("eps_z     %+.9g rad/s^2  (%s)\n", d.eps_z,
                d.eps_z <= 0.0 ? "damping" : "diverging");
    std::printf("theta_c   %.9g rad\n", d.theta_c);
    std::printf("a_c_n     %.9g m/s^2   a_c_t  %.9g m/s^2\n", d.a_c_n, d.a_c_t);
    std::printf("ax_body   %.9g m/s^2   ay_body %.9g m/s^2\n", d.ax_body, d.ay_body);
    std::printf("P_w_x1    %.9g N       P_w_y1 %.9g N       P_j %.9g N\n", d.p_w_x1, d.p_w_y1,
                d.p_j);
    std::printf("R_z2      %.9g N%s\n", d.r_z2, d.rear_load_valid ? "" : "   [INVALID: R_z2 < 0]");
    std::printf("R_B       %.9g N       R_delta1 %.9g N\n", d.r_b, d.r_delta1);
    std::printf("Omega     %.9g m\n", d.omega_factor);
    std::printf("P_f1      %.9g N (diagnostic)   longitudinal residual %.9g N\n", p_f1, residual);

    nlohmann::ordered_json j;
    j["v_x1_mps"] = s.v_x1;
    j["omega_z_radps"] = s.omega_z;
    j["delta_1_deg"] = rad_to_deg(s.delta_1);
    j["gamma_b_deg"] = rad_to_deg(s.gamma_b);
    j["s_x"] = s.s_x;
    j["phi"] = env.phi;
    j["eps_z_radps2"] = d.eps_z;
    j["damping"] = d.eps_z <= 0.0;
    j["theta_c_rad"] = d.theta_c;
    j["a_c_n_mps2"] = d.a_c_n;
    j["a_c_t_mps2"] = d.a_c_t;
    j["ax_body_mps2"] = d.ax_body;
    j["ay_body_mps2"] = d.ay_body;
    j["p_w_x1_n"] = d.p_w_x1;
    j["p_w_y1_n"] = d.p_w_y1;
    j["p_j_n"] = d.p_j;
    j["r_z2_n"] = d.r_z2;
    j["r_z2_valid"] = d.rear_load_valid;
    j["r_b_n"] = d.r_b;
    j["r_delta1_n"] = d.r_delta1;
    j["omega_factor_m"] = d.omega_factor;
    j["p_f1_n"] = p_f1;
    j["longitudinal_residual_n"] = residual;
    std::printf("%s\n", j.dump().c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

SweepVar parse_sweep_var(const std::string& name) {
    if (name == "v" || name == "v_x1") return SweepVar::v_x1;
    if (name == "omega" || name == "omega_z") return SweepVar::omega_z;
    if (name == "phi") return SweepVar::phi;
    if (name == "sx" || name == "s_x") return SweepVar::s_x;
    if (name == "delta" || name == "delta_1") return SweepVar::delta_1;
    throw SkidError(ErrorCode::InvalidParams, "x",
                    "unknown sweep variable '" + name + "' (v, omega, phi, sx, delta)");
}

double boundary_to_internal(SweepVar var, double value) {
    return var == SweepVar::delta_1 ? deg_to_rad(value) : value;
}

struct SweepFlags {
    std::string preset;
    std::string x_name;
    double lo = 0.0, hi = 0.0;
    std::size_t n = 0;
    std::string series_name;
    std::vector<double> series_values;
    std::string output;
    bool plot = false;
    StateFlags state;
};

int cmd_sweep(const std::string& config_path, const SweepFlags& flags) {
    const RunConfig cfg = load_run_config(config_path);

    SweepSpec spec;
    if (!flags.preset.empty()) {
        spec = fig2_preset(flags.preset);
        spec.params = cfg.vehicle;
        spec.env = cfg.environment;
        // fig2f keeps its slip-curve default unless the config names a grip model
        if (cfg.grip_specified)
            spec.grip = cfg.grip;
        else if (spec.name != "fig2f")
            spec.grip = ConstantGrip{spec.env.phi};
    } else {
        if (flags.x_name.empty())
            throw SkidError(ErrorCode::InvalidParams, "x",
                            "either --preset or --x/--lo/--hi/--n is required");
        spec.name = "custom";
        spec.x_var = parse_sweep_var(flags.x_name);
        spec.x = {boundary_to_internal(spec.x_var, flags.lo),
                  boundary_to_internal(spec.x_var, flags.hi), flags.n};
        if (!flags.series_name.empty()) {
            spec.series_var = parse_sweep_var(flags.series_name);
            for (double v : flags.series_values)
                spec.series.push_back(boundary_to_internal(*spec.series_var, v));
        }
        spec.base_state = resolve_state(cfg, flags.state);
        spec.env = resolve_environment(cfg, spec.base_state, flags.state);
        spec.params = cfg.vehicle;
        spec.grip = cfg.grip;
    }

    const SweepTable table = run_sweep(spec, resolve_thread_count());
    write_file(flags.output, sweep_table_csv(table));
    if (flags.plot) write_file(flags.output + ".gp", sweep_plot_script(table, flags.output));

    std::printf("%s: %zu rows x %zu columns -> %s\n", spec.name.c_str(), table.x.size(),
                table.series_columns.size(), flags.output.c_str());
    if (table.singular_cells > 0)
        std::fprintf(stderr, "warning: %zu singular cell(s) written as 'nan'\n",
                     table.singular_cells);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// vstab

struct VstabFlags {
    std::optional<double> omega;
    double delta_min_deg = 0.0;
    double delta_max_deg = 8.0;
    std::size_t delta_steps = 9;
    std::optional<double> gamma_deg;
    double v_lo = 0.5;
    double v_hi = 35.0;
    std::string output;
};

int cmd_vstab(const std::string& config_path, const VstabFlags& flags) {
    const RunConfig cfg = load_run_config(config_path);
    const double omega = flags.omega.value_or(cfg.default_state.omega_z);
    const double gamma =
        flags.gamma_deg ? deg_to_rad(*flags.gamma_deg) : cfg.default_state.gamma_b;
    if (flags.delta_steps < 1)
        throw SkidError(ErrorCode::InvalidParams, "delta-steps", "need at least one grid point");
    if (flags.delta_max_deg < flags.delta_min_deg)
        throw SkidError(ErrorCode::InvalidParams, "delta-max", "need delta-min <= delta-max");

    std::vector<double> grid;
    for (std::size_t i = 0; i < flags.delta_steps; ++i) {
        const double t = flags.delta_steps == 1
                             ? 0.0
                             : static_cast<double>(i) / static_cast<double>(flags.delta_steps - 1);
        grid.push_back(deg_to_rad(flags.delta_min_deg +
                                  t * (flags.delta_max_deg - flags.delta_min_deg)));
    }

    const Environment env = [&] {
        Environment e = cfg.environment;
        e.phi = effective_phi(cfg, cfg.default_state);
        return e;
    }();
    const auto rows = stability_envelope(cfg.vehicle, env, omega, grid, gamma, flags.v_lo,
                                         flags.v_hi, resolve_thread_count());
    write_file(flags.output, envelope_csv(rows));

    std::optional<double> best;
    double best_delta = 0.0;
    for (const auto& r : rows) {
        if (r.result && r.result->status != VstabStatus::NotBracketed &&
            (!best || r.result->v_stab > *best)) {
            best = r.result->v_stab;
            best_delta = r.delta_1;
        }
    }
    if (best)
        std::printf("max v_stab: %.6g km/h (delta_1 = %g deg) -> %s\n", mps_to_kmh(*best),
                    rad_to_deg(best_delta), flags.output.c_str());
    else
        std::printf("max v_stab: none (eps_z > 0 over the whole bracket) -> %s\n",
                    flags.output.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
    StateFlags state;
    double dt = 1e-3;
    double t_end = 10.0;
    int record_every = 1;
    bool no_stop_on_damped = false;
    std::string output;
};

int cmd_simulate(const std::string& config_path, const SimulateFlags& flags) {
    const RunConfig cfg = load_run_config(config_path);
    const MotionState s = resolve_state(cfg, flags.state);
    const Environment env = resolve_environment(cfg, s, flags.state);

    SimConfig sim;
    sim.dt = flags.dt;
    sim.t_end = flags.t_end;
    sim.record_every = flags.record_every;
    sim.stop_on_damped = !flags.no_stop_on_damped;

    const SimResult result = simulate(s, cfg.vehicle, env, sim);
    write_file(flags.output, trajectory_csv(result.rows));
    std::printf("termination: %s  t_final = %.9g s  omega_z = %.9g rad/s  v_x1 = %.9g m/s  "
                "psi = %.9g rad  (%zu rows -> %s)\n",
                sim_termination_name(result.reason), result.t_final, result.omega_final,
                result.v_final, result.psi_final, result.rows.size(), flags.output.c_str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string& config_path) {
    const ConfigReport report = inspect_run_config(config_path);
    bool all_pass = true;
    auto print = [&](const std::string& name, bool pass, const std::string& detail) {
        std::printf("[%s] %-22s %s\n", pass ? "pass" : "FAIL", name.c_str(), detail.c_str());
        all_pass = all_pass && pass;
    };
    for (const auto& item : report.checks) print(item.name, item.pass, item.detail);

    if (all_pass) {
        const VehicleParams& p = report.config.vehicle;
        const Environment& env = report.config.environment;
        constexpr std::size_t kGridSize = 10000;

        const ResidualStats oracle = oracle_equivalence(p, env, kGridSize);
        print("oracle_equivalence", oracle.pass(),
              "worst relative gap " + csv_number(oracle.worst) + " over " +
                  std::to_string(oracle.evaluated) + " states (tol 1e-9)");

        const ResidualStats subst = substitution_identity(p, env, kGridSize);
        print("substitution_identity", subst.pass(),
              "worst relative gap " + csv_number(subst.worst) + " (tol 1e-10)");

        const ResidualStats system = system_consistency(p, env, kGridSize);
        print("system_consistency", system.pass(),
              "worst relative residual " + csv_number(system.worst) + " (tol 1e-8)");

        // Longitudinal balance at the configured state: diagnostic only, no threshold.
        try {
            const MotionState s = report.config.default_state;
            const Environment env_s = [&] {
                Environment e = env;
                e.phi = effective_phi(report.config, s);
                return e;
            }();
            const double eps = yaw_angular_acceleration(s, p, env_s);
            const double r_d1 = front_lateral_reaction(s, p, env_s, eps);
            const double p_f1 = default_front_resistance(s, p, env_s, eps);
            const double res = longitudinal_residual(s, p, env_s, eps, p_f1, r_d1);
            std::printf("[info] longitudinal_residual  %.9g N at the configured state "
                        "(P_f1 = %.9g N)\n",
                        res, p_f1);
        } catch (const SkidError& e) {
            std::printf("[info] longitudinal_residual  skipped: %s\n", e.what());
        }
    } else {
        std::printf("[info] model self-checks skipped: fix config invariants first\n");
    }

    std::printf("%s\n", all_pass ? "all checks passed" : "CHECK FAILURES PRESENT");
    return all_pass ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skidsim: planar rear-drive traction-skid dynamics"};
    app.require_subcommand(1);

    std::string config_path;

    auto* eval = app.add_subcommand("eval", "evaluate one state and print the derived record");
    StateFlags eval_state;
    eval->add_option("--config", config_path, "config file (JSON)")->required();
    add_state_flags(eval, eval_state);

    auto* sweep = app.add_subcommand("sweep", "grid sweep of eps_z to CSV");
    SweepFlags sweep_flags;
    sweep->add_option("--config", config_path, "config file (JSON)")->required();
    sweep->add_option("--preset", sweep_flags.preset, "fig2a..fig2f");
    sweep->add_option("--x", sweep_flags.x_name, "swept variable: v, omega, phi, sx, delta");
    sweep->add_option("--lo", sweep_flags.lo, "grid start (deg for delta)");
    sweep->add_option("--hi", sweep_flags.hi, "grid end (deg for delta)");
    sweep->add_option("--n", sweep_flags.n, "grid points (>= 2)");
    sweep->add_option("--series", sweep_flags.series_name, "series variable");
    sweep->add_option("--series-values", sweep_flags.series_values,
                      "series values (deg for delta)");
    sweep->add_option("-o,--output", sweep_flags.output, "output CSV path")->required();
    sweep->add_flag("--plot", sweep_flags.plot, "also write a gnuplot script next to the CSV");
    add_state_flags(sweep, sweep_flags.state);

    auto* vstab = app.add_subcommand("vstab", "self-stabilization speed envelope to CSV");
    VstabFlags vstab_flags;
    vstab->add_option("--config", config_path, "config file (JSON)")->required();
    vstab->add_option("--omega", vstab_flags.omega, "yaw rate, rad/s (default: config state)");
    vstab->add_option("--delta-min", vstab_flags.delta_min_deg, "slip angle grid start, deg");
    vstab->add_option("--delta-max", vstab_flags.delta_max_deg, "slip angle grid end, deg");
    vstab->add_option("--delta-steps", vstab_flags.delta_steps, "slip angle grid points");
    vstab->add_option("--gamma", vstab_flags.gamma_deg, "rear reaction angle, deg");
    vstab->add_option("--v-lo", vstab_flags.v_lo, "bracket start, m/s");
    vstab->add_option("--v-hi", vstab_flags.v_hi, "bracket end, m/s");
    vstab->add_option("-o,--output", vstab_flags.output, "output CSV path")->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "integrate the skid over time to CSV");
    SimulateFlags sim_flags;
    simulate_cmd->add_option("--config", config_path, "config file (JSON)")->required();
    add_state_flags(simulate_cmd, sim_flags.state);
    simulate_cmd->add_option("--dt", sim_flags.dt, "step, s");
    simulate_cmd->add_option("--t-end", sim_flags.t_end, "horizon, s");
    simulate_cmd->add_option("--record-every", sim_flags.record_every, "record every N steps");
    simulate_cmd->add_flag("--no-stop-on-damped", sim_flags.no_stop_on_damped,
                           "keep integrating through the yaw-rate zero crossing");
    simulate_cmd->add_option("-o,--output", sim_flags.output, "output CSV path")->required();

    auto* check = app.add_subcommand("check", "config invariants and model self-checks");
    check->add_option("--config", config_path, "config file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (eval->parsed()) return cmd_eval(config_path, eval_state);
        if (sweep->parsed()) return cmd_sweep(config_path, sweep_flags);
        if (vstab->parsed()) return cmd_vstab(config_path, vstab_flags);
        if (simulate_cmd->parsed()) return cmd_simulate(config_path, sim_flags);
        if (check->parsed()) return cmd_check(config_path);
    } catch (const SkidError& e) {
        std::fprintf(stderr, "error: %s (symbol: %s, code: %s)\n", e.what(), e.symbol().c_str(),
                     error_code_name(e.code()));
        return e.is_validation() ? kExitValidation : kExitSingular;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return kExitOk;
}
