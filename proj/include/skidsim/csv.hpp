#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "skidsim/simulate.hpp"
#include "skidsim/stability.hpp"
#include "skidsim/sweep.hpp"

namespace skidsim {

// 17 significant digits: parses back to the identical double. NaN prints "nan".
inline std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Dialect: comma separator, '\n' line endings, mandatory header, numeric payload.
inline std::string sweep_table_csv(const SweepTable& table) {
    std::string out = table.x_column;
    for (const auto& name : table.series_columns) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < table.x.size(); ++i) {
        const double x = table.x_var == SweepVar::delta_1 ? rad_to_deg(table.x[i]) : table.x[i];
        out += csv_number(x);
        for (const auto& column : table.eps) {
            out += ',';
            out += csv_number(column[i]);
        }
        out += '\n';
    }
    return out;
}

inline std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
    std::string out =
        "t_s,omega_z_radps,v_x1_mps,psi_rad,x_m,y_m,eps_z_radps2,r_b_n,r_z2_n,damping\n";
    for (const auto& r : rows) {
        out += csv_number(r.t);
        out += ',';
        out += csv_number(r.omega_z);
        out += ',';
        out += csv_number(r.v_x1);
        out += ',';
        out += csv_number(r.psi);
        out += ',';
        out += csv_number(r.x);
        out += ',';
        out += csv_number(r.y);
        out += ',';
        out += csv_number(r.eps_z);
        out += ',';
        out += csv_number(r.r_b);
        out += ',';
        out += csv_number(r.r_z2);
        out += ',';
        out += r.damping ? '1' : '0';
        out += '\n';
    }
    return out;
}

// Envelope rows; speeds in km/h at this boundary, rows without a boundary print "none".
inline std::string envelope_csv(const std::vector<EnvelopeRow>& rows) {
    std::string out = "delta_deg,v_stab_kmh,flags\n";
    for (const auto& r : rows) {
        out += csv_number(rad_to_deg(r.delta_1));
        out += ',';
        if (!r.result) {
            out += "none,error:" + r.error;
        } else {
            switch (r.result->status) {
                case VstabStatus::Root:
                    out += csv_number(mps_to_kmh(r.result->v_stab));
                    out += r.result->multi_root ? ",multi_root" : ",ok";
                    break;
                case VstabStatus::StableThroughout:
                    out += csv_number(mps_to_kmh(r.result->v_stab));
                    out += ",stable_throughout";
                    break;
                case VstabStatus::NotBracketed:
                    out += "none,not_bracketed";
                    break;
            }
        }
        out += '\n';
    }
    return out;
}

// Minimal gnuplot companion for a sweep CSV.
inline std::string sweep_plot_script(const SweepTable& table, const std::string& csv_path) {
    std::string out = "set datafile separator ','\n";
    out += "set key autotitle columnheader\n";
    out += "set xlabel '" + table.x_column + "'\n";
    out += "set ylabel 'eps_z_radps2'\n";
    out += "plot";
    for (std::size_t j = 0; j < table.series_columns.size(); ++j) {
        if (j) out += ',';
        out += " '" + csv_path + "' using 1:" + std::to_string(j + 2) + " with lines";
    }
    out += '\n';
    return out;
}

}  // namespace skidsim
