// SPDX-License-Identifier: Apache-2.0
//
// nfec - effective capacity analysis for joint near-field/far-field links
// Copyright (C) 2026 The nfec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "config.hpp"
#include "validation.hpp"

namespace nfec {

/// A CSV table: header first, '\n' line ends, 17 significant digits.
/// Trailing '#' lines carry notes about how the rows were produced.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw std::out_of_range("no column '" + std::string(name) + "'");
    }
};

inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string series_label(std::string_view prefix, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*s_%g", static_cast<int>(prefix.size()), prefix.data(), value);
    return buf;
}

inline std::string to_csv(const CsvTable& t) {
    std::string out;
    auto put_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    put_row(t.header);
    for (const auto& r : t.rows) put_row(r);
    for (const auto& n : t.notes) out += "# " + n + '\n';
    return out;
}

/// sigma_d substituted for zero in analytic evaluations.
inline constexpr double zero_sigma_substitute = 1e-6;

namespace detail {

inline SystemParams figure_params(const AppConfig& cfg, bool paper_literal) {
    SystemParams p = cfg.system;
    if (paper_literal) {
        p.prob_mode = ProbMode::paper_literal;
        p.mgf_mode = MgfMode::paper_literal;
    }
    return validate(p);
}

// Distinct, reproducible stream per sweep point.
inline std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
    return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1));
}

inline McConfig point_mc(const AppConfig& cfg, std::size_t index) {
    McConfig mc = cfg.mc;
    mc.seed = point_seed(cfg.mc.seed, index);
    mc.threads = 1;
    return mc;
}

// Applies one swept or series coordinate to the parameters.
inline void apply(SweepVariable var, double value, SystemParams& p) {
    switch (var) {
        case SweepVariable::sigma_d: p.sigma_d_m = value; break;
        case SweepVariable::d_max: p.d_max_m = value; break;
        case SweepVariable::theta: p.theta = value; break;
        case SweepVariable::d_f:
            // d_F = 2 L_t L_r / lambda with lambda and L_r held
            p.aperture_tx_m = value * p.wavelength_m / (2.0 * p.aperture_rx_m);
            break;
    }
}

inline double analytic_sigma(double sigma) { return sigma == 0.0 ? zero_sigma_substitute : sigma; }

template <class Fn>
auto sweep_map(std::size_t n, unsigned threads, Fn&& fn) {
    using Row = decltype(fn(std::size_t{}));
    return run_batches<Row>(n, threads, [&](std::uint64_t i) { return fn(static_cast<std::size_t>(i)); });
}

}  // namespace detail

/// Joint regime-error probabilities versus sigma_d, analytic and simulated.
inline CsvTable run_fig2(const AppConfig& cfg, bool paper_literal = false) {
    validate(cfg.fig2, "fig2");
    const SystemParams base = detail::figure_params(cfg, paper_literal);
    CsvTable t;
    t.header = {"sigma_d", "p_false_far", "p_false_near", "p_false_far_mc", "p_false_near_mc", "mc_se"};
    bool substituted = false;
    for (double s : cfg.fig2.grid) substituted |= s == 0.0;
    t.rows = detail::sweep_map(cfg.fig2.grid.size(), cfg.mc.threads, [&](std::size_t i) {
        const double sigma = cfg.fig2.grid[i];
        SystemParams p = base;
        p.sigma_d_m = detail::analytic_sigma(sigma);
        validate(p);
        const ErrorRates er = error_rates(p);
        SystemParams pm = p;
        pm.sigma_d_m = sigma;
        const auto [ff, fn] = estimate_error_probs(pm, detail::point_mc(cfg, i));
        return std::vector<std::string>{format_number(sigma), format_number(er.joint_false_far),
                                        format_number(er.joint_false_near), format_number(ff.value),
                                        format_number(fn.value), format_number(std::max(ff.std_err, fn.std_err))};
    });
    if (substituted) t.notes.push_back("sigma_d = 0 evaluated analytically at sigma_d = 1e-06 m");
    t.notes.push_back("mc_se is the larger binomial standard error of the two simulated columns");
    return t;
}

namespace detail {

// EC of every (grid, series) pair plus simulated spot checks at the two
// grid endpoints; MC columns are empty elsewhere.
inline CsvTable ec_sweep(const AppConfig& cfg, const SweepSpec& spec, const char* name, bool paper_literal) {
    validate(spec, name);
    if (spec.series.empty()) throw config_error(std::string(name) + ".series", "must be nonempty");
    const SystemParams base = figure_params(cfg, paper_literal);
    CsvTable t;
    t.header.push_back(std::string(to_string(spec.variable)));
    if (spec.variable == SweepVariable::d_f) t.header.push_back("aperture_tx_m");
    const auto series_prefix = std::string("ec_") + std::string(to_string(spec.series_variable));
    for (double s : spec.series) t.header.push_back(series_label(series_prefix, s));
    for (double s : spec.series) {
        t.header.push_back(series_label(series_prefix + "_mc", s));
        t.header.push_back(series_label(series_prefix + "_mc_se", s));
    }
    bool substituted = false;
    for (double x : spec.grid) substituted |= spec.variable == SweepVariable::sigma_d && x == 0.0;
    for (double x : spec.series) substituted |= spec.series_variable == SweepVariable::sigma_d && x == 0.0;

    const std::size_t n = spec.grid.size();
    t.rows = sweep_map(n, cfg.mc.threads, [&](std::size_t i) {
        SystemParams p = base;
        apply(spec.variable, spec.grid[i], p);
        std::vector<std::string> row{format_number(spec.grid[i])};
        if (spec.variable == SweepVariable::d_f) row.push_back(format_number(p.aperture_tx_m));
        const bool spot = i == 0 || i + 1 == n;
        std::vector<std::string> mc_cells;
        for (std::size_t k = 0; k < spec.series.size(); ++k) {
            SystemParams q = p;
            apply(spec.series_variable, spec.series[k], q);
            SystemParams qa = q;
            qa.sigma_d_m = analytic_sigma(q.sigma_d_m);
            validate(qa);
            row.push_back(format_number(effective_capacity(qa.theta, qa).ec_bits_per_use));
            if (spot) {
                const McEstimate m = estimate_ec(q, q.theta, point_mc(cfg, i * spec.series.size() + k));
                mc_cells.push_back(format_number(m.value));
                mc_cells.push_back(format_number(m.std_err));
            } else {
                mc_cells.insert(mc_cells.end(), 2, "");
            }
        }
        row.insert(row.end(), mc_cells.begin(), mc_cells.end());
        return row;
    });
    if (substituted) t.notes.push_back("sigma_d = 0 evaluated analytically at sigma_d = 1e-06 m");
    if (spec.variable == SweepVariable::d_f)
        t.notes.push_back("d_f realized by aperture_tx_m = d_f * wavelength_m / (2 * aperture_rx_m)");
    return t;
}

}  // namespace detail

/// EC versus d_max, one series per theta.
inline CsvTable run_fig3(const AppConfig& cfg, bool paper_literal = false) {
    return detail::ec_sweep(cfg, cfg.fig3, "fig3", paper_literal);
}

/// EC versus the Fraunhofer distance, one series per sigma_d.
inline CsvTable run_fig4(const AppConfig& cfg, bool paper_literal = false) {
    return detail::ec_sweep(cfg, cfg.fig4, "fig4", paper_literal);
}

/// EC versus sigma_d, one series per theta.
inline CsvTable run_fig5(const AppConfig& cfg, bool paper_literal = false) {
    return detail::ec_sweep(cfg, cfg.fig5, "fig5", paper_literal);
}

/// Simulated correlation ToA ranging against the distance bound. Every
/// gamma reuses the same noise stream, so rows differ only by the SNR.
inline CsvTable run_crlb(const AppConfig& cfg) {
    const CrlbConfig& c = cfg.crlb;
    validate(c.waveform);
    if (c.gamma.empty()) throw config_error("crlb.gamma", "must be nonempty");
    CsvTable t;
    t.header = {"gamma", "crlb_var", "empirical_var", "ratio"};
    const double beta2 = mean_square_bandwidth(c.waveform);
    for (double gamma : c.gamma) {
        const double bound = crlb_distance_variance({gamma, beta2});
        auto rng = detail::batch_rng(cfg.mc.seed, 0);
        const ToaStudy s = simulate_toa_estimation(c.waveform, c.distance_m, gamma, c.sample_rate_hz, c.trials, rng);
        t.rows.push_back({format_number(gamma), format_number(bound), format_number(s.variance_m2),
                          format_number(s.variance_m2 / bound)});
    }
    return t;
}

/// Single-point EC with every diagnostic, as one JSON document.
inline json run_ec(const AppConfig& cfg, bool paper_literal = false) {
    const SystemParams p = detail::figure_params(cfg, paper_literal);
    const EcResult r = effective_capacity(p.theta, p);
    const ErrorRates er = error_rates(p);
    return json{{"params", params_to_json(p)},
                {"fraunhofer_distance_m", fraunhofer_distance(p)},
                {"result", ec_result_json(r)},
                {"ec_spectral_bits_per_use", effective_capacity_spectral(p.theta, p)},
                {"mean_service_rate", mean_service_rate(p)},
                {"error_rates",
                 {{"joint_false_far", er.joint_false_far},
                  {"joint_false_near", er.joint_false_near},
                  {"conditional_false_far", er.conditional_false_far},
                  {"conditional_false_near", er.conditional_false_near}}}};
}

}  // namespace nfec
