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

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "crlb_toa.hpp"
#include "ec_engine.hpp"
#include "montecarlo.hpp"
#include "params.hpp"

namespace nfec {

using json = nlohmann::json;

enum class SweepVariable { sigma_d, d_max, d_f, theta };

/// One figure sweep: the x-axis grid plus the values that label each series.
/// For d_f the grid is in metres and is realized by rescaling aperture_tx_m.
struct SweepSpec {
    SweepVariable variable = SweepVariable::sigma_d;
    std::vector<double> grid;
    SweepVariable series_variable = SweepVariable::theta;
    std::vector<double> series;
};

struct CrlbConfig {
    WaveformSpec waveform;
    std::vector<double> gamma{125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0, 8000.0};
    double distance_m = 30.0;
    double sample_rate_hz = 1.6e9;
    std::size_t trials = 10000;
};

struct ValidateConfig {
    std::vector<double> thetas{1e-3, 1e-2, 1e-1};
    double queue_theta = 0.01;
    double queue_arrival_fraction = 0.95;
    std::uint64_t queue_horizon = 1'000'000;
    std::size_t monotonicity_grid = 4096;
};

struct AppConfig {
    SystemParams system = default_params();
    McConfig mc;
    SweepSpec fig2;
    SweepSpec fig3;
    SweepSpec fig4;
    SweepSpec fig5;
    CrlbConfig crlb;
    ValidateConfig validate;
};

inline std::string_view to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::sigma_d: return "sigma_d";
        case SweepVariable::d_max: return "d_max";
        case SweepVariable::d_f: return "d_f";
        case SweepVariable::theta: return "theta";
    }
    return "";
}

inline std::string_view to_string(PulseShape s) {
    switch (s) {
        case PulseShape::rect_spectrum: return "rect_spectrum";
        case PulseShape::root_raised_cosine: return "root_raised_cosine";
        case PulseShape::gaussian_pulse: return "gaussian_pulse";
    }
    return "";
}

inline PulseShape parse_pulse_shape(std::string_view s) {
    if (s == "rect_spectrum") return PulseShape::rect_spectrum;
    if (s == "root_raised_cosine") return PulseShape::root_raised_cosine;
    if (s == "gaussian_pulse") return PulseShape::gaussian_pulse;
    throw config_error("shape", "unknown value '" + std::string(s) + "'");
}

inline std::vector<double> integer_grid(int first, int last) {
    std::vector<double> g;
    for (int i = first; i <= last; ++i) g.push_back(i);
    return g;
}

inline AppConfig default_config() {
    AppConfig c;
    const double lambda = c.system.wavelength_m;
    c.fig2 = {SweepVariable::sigma_d, integer_grid(1, 20), SweepVariable::theta, {}};
    c.fig3 = {SweepVariable::d_max, {100, 150, 200, 250, 300, 350, 400, 450, 500},
              SweepVariable::theta, {1e-3, 1e-2, 1e-1}};
    std::vector<double> d_f;
    for (double k : {60.0, 80.0, 100.0, 120.0, 140.0})
        d_f.push_back(2.0 * (k * lambda) * c.system.aperture_rx_m / lambda);
    c.fig4 = {SweepVariable::d_f, d_f, SweepVariable::sigma_d, {1.0, 5.0, 10.0}};
    c.fig5 = {SweepVariable::sigma_d, integer_grid(0, 20), SweepVariable::theta, {1e-3, 1e-2, 1e-1, 1.0}};
    return c;
}

inline void validate(const SweepSpec& s, const char* name) {
    const std::string field = std::string(name) + ".grid";
    if (s.grid.empty()) throw config_error(field, "must be nonempty");
    for (std::size_t i = 1; i < s.grid.size(); ++i)
        if (!(s.grid[i] > s.grid[i - 1])) throw config_error(field, "must be strictly increasing");
    for (double x : s.grid)
        if (!std::isfinite(x)) throw config_error(field, "must be finite");
}

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw config_error(where.empty() ? "config" : where, "must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw config_error(where.empty() ? key : where + "." + key, "unknown key");
}

template <class T>
void read_number(const json& j, const char* key, T& out, const std::string& where = "") {
    if (!j.contains(key)) return;
    const std::string field = where.empty() ? key : where + "." + key;
    if (!j.at(key).is_number()) throw config_error(field, "must be a number");
    if constexpr (std::is_integral_v<T>) {
        if (!j.at(key).is_number_integer() || j.at(key).get<double>() < 0)
            throw config_error(field, "must be a nonnegative integer");
        out = j.at(key).get<T>();
    } else {
        out = j.at(key).get<T>();
    }
}

inline void read_grid(const json& j, const char* key, std::vector<double>& out, const std::string& where) {
    if (!j.contains(key)) return;
    const std::string field = where + "." + key;
    if (!j.at(key).is_array()) throw config_error(field, "must be an array of numbers");
    out.clear();
    for (const auto& x : j.at(key)) {
        if (!x.is_number()) throw config_error(field, "must be an array of numbers");
        out.push_back(x.get<double>());
    }
}

inline std::string read_string(const json& j, const char* key, const std::string& where = "") {
    const std::string field = where.empty() ? key : where + "." + key;
    if (!j.at(key).is_string()) throw config_error(field, "must be a string");
    return j.at(key).get<std::string>();
}

}  // namespace detail

/// Reads SystemParams fields on top of `base`. When exactly one of snr and
/// noise_psd is present the other follows from tx_power_w; when neither is,
/// snr is re-anchored so that C_f(d_max_m) = 1 bit.
inline SystemParams params_from_json(const json& j, SystemParams base = default_params()) {
    using detail::read_number;
    read_number(j, "wavelength_m", base.wavelength_m);
    read_number(j, "aperture_tx_m", base.aperture_tx_m);
    read_number(j, "aperture_rx_m", base.aperture_rx_m);
    read_number(j, "tx_power_w", base.tx_power_w);
    read_number(j, "c0", base.c0);
    read_number(j, "d_min_m", base.d_min_m);
    read_number(j, "d_max_m", base.d_max_m);
    read_number(j, "sigma_d_m", base.sigma_d_m);
    read_number(j, "theta", base.theta);
    const bool has_snr = j.contains("snr");
    const bool has_psd = j.contains("noise_psd");
    read_number(j, "snr", base.snr);
    read_number(j, "noise_psd", base.noise_psd);
    if (has_snr && !has_psd) {
        base.noise_psd = base.tx_power_w / base.snr;
    } else if (has_psd && !has_snr) {
        base.snr = base.tx_power_w / base.noise_psd;
    } else if (!has_snr && !has_psd) {
        base.snr = snr_for_unit_far_capacity(base.c0, base.aperture_tx_m, base.aperture_rx_m, base.d_max_m);
        base.noise_psd = base.tx_power_w / base.snr;
    }
    if (j.contains("prob_mode")) base.prob_mode = parse_prob_mode(detail::read_string(j, "prob_mode"));
    if (j.contains("mgf_mode")) base.mgf_mode = parse_mgf_mode(detail::read_string(j, "mgf_mode"));
    if (j.contains("ff_mgf_upper")) base.ff_mgf_upper = parse_ff_upper(detail::read_string(j, "ff_mgf_upper"));
    return base;
}

inline json params_to_json(const SystemParams& p) {
    return json{{"wavelength_m", p.wavelength_m},
                {"aperture_tx_m", p.aperture_tx_m},
                {"aperture_rx_m", p.aperture_rx_m},
                {"tx_power_w", p.tx_power_w},
                {"noise_psd", p.noise_psd},
                {"snr", p.snr},
                {"c0", p.c0},
                {"d_min_m", p.d_min_m},
                {"d_max_m", p.d_max_m},
                {"sigma_d_m", p.sigma_d_m},
                {"theta", p.theta},
                {"prob_mode", to_string(p.prob_mode)},
                {"mgf_mode", to_string(p.mgf_mode)},
                {"ff_mgf_upper", to_string(p.ff_mgf_upper)}};
}

inline const std::set<std::string>& param_keys() {
    static const std::set<std::string> keys{
        "wavelength_m", "aperture_tx_m", "aperture_rx_m", "tx_power_w", "noise_psd", "snr", "c0",
        "d_min_m", "d_max_m", "sigma_d_m", "theta", "prob_mode", "mgf_mode", "ff_mgf_upper"};
    return keys;
}

/// Parses a full configuration document; absent keys keep their defaults.
inline AppConfig config_from_json(const json& j) {
    using detail::read_grid;
    using detail::read_number;
    auto known = param_keys();
    known.insert({"mc", "fig2", "fig3", "fig4", "fig5", "crlb", "validate"});
    detail::reject_unknown(j, known, "");

    AppConfig c = default_config();
    c.system = params_from_json(j, c.system);
    if (j.contains("mc")) {
        const json& m = j.at("mc");
        detail::reject_unknown(m, {"samples", "seed", "batches", "threads"}, "mc");
        read_number(m, "samples", c.mc.n_samples, "mc");
        read_number(m, "seed", c.mc.seed, "mc");
        read_number(m, "batches", c.mc.batches, "mc");
        read_number(m, "threads", c.mc.threads, "mc");
    }
    for (auto [name, spec] : {std::pair{"fig2", &c.fig2}, {"fig3", &c.fig3}, {"fig4", &c.fig4}, {"fig5", &c.fig5}}) {
        if (!j.contains(name)) continue;
        const json& s = j.at(name);
        detail::reject_unknown(s, {"grid", "series"}, name);
        read_grid(s, "grid", spec->grid, name);
        read_grid(s, "series", spec->series, name);
    }
    if (j.contains("crlb")) {
        const json& r = j.at("crlb");
        detail::reject_unknown(r, {"shape", "bandwidth_hz", "rolloff", "gamma", "distance_m", "sample_rate_hz", "trials"},
                               "crlb");
        if (r.contains("shape")) c.crlb.waveform.shape = parse_pulse_shape(detail::read_string(r, "shape", "crlb"));
        read_number(r, "bandwidth_hz", c.crlb.waveform.bandwidth_hz, "crlb");
        read_number(r, "rolloff", c.crlb.waveform.rolloff, "crlb");
        read_grid(r, "gamma", c.crlb.gamma, "crlb");
        read_number(r, "distance_m", c.crlb.distance_m, "crlb");
        read_number(r, "sample_rate_hz", c.crlb.sample_rate_hz, "crlb");
        read_number(r, "trials", c.crlb.trials, "crlb");
    }
    if (j.contains("validate")) {
        const json& v = j.at("validate");
        detail::reject_unknown(v, {"thetas", "queue_theta", "queue_arrival_fraction", "queue_horizon", "monotonicity_grid"},
                               "validate");
        read_grid(v, "thetas", c.validate.thetas, "validate");
        read_number(v, "queue_theta", c.validate.queue_theta, "validate");
        read_number(v, "queue_arrival_fraction", c.validate.queue_arrival_fraction, "validate");
        read_number(v, "queue_horizon", c.validate.queue_horizon, "validate");
        read_number(v, "monotonicity_grid", c.validate.monotonicity_grid, "validate");
    }
    return c;
}

/// Full configuration as written by config_from_json's inverse.
inline json config_to_json(const AppConfig& c) {
    json j = params_to_json(c.system);
    j["mc"] = {{"samples", c.mc.n_samples}, {"seed", c.mc.seed}, {"batches", c.mc.batches}, {"threads", c.mc.threads}};
    for (auto [name, spec] : {std::pair{"fig2", &c.fig2}, {"fig3", &c.fig3}, {"fig4", &c.fig4}, {"fig5", &c.fig5}})
        j[name] = {{"grid", spec->grid}, {"series", spec->series}};
    j["crlb"] = {{"shape", to_string(c.crlb.waveform.shape)},
                 {"bandwidth_hz", c.crlb.waveform.bandwidth_hz},
                 {"rolloff", c.crlb.waveform.rolloff},
                 {"gamma", c.crlb.gamma},
                 {"distance_m", c.crlb.distance_m},
                 {"sample_rate_hz", c.crlb.sample_rate_hz},
                 {"trials", c.crlb.trials}};
    j["validate"] = {{"thetas", c.validate.thetas},
                     {"queue_theta", c.validate.queue_theta},
                     {"queue_arrival_fraction", c.validate.queue_arrival_fraction},
                     {"queue_horizon", c.validate.queue_horizon},
                     {"monotonicity_grid", c.validate.monotonicity_grid}};
    return j;
}

inline AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error("config", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline json state_vector_json(const StateVector& v) {
    json o = json::object();
    for (StateId s : all_states) o["S" + std::to_string(static_cast<int>(s))] = v[index_of(s)];
    return o;
}

inline json ec_result_json(const EcResult& r) {
    return json{
        {"theta", r.theta},
        {"ec_bits_per_use", r.ec_bits_per_use},
        {"state_probs",
         {{"probs", state_vector_json(r.state_probs.probs)},
          {"mode", to_string(r.state_probs.mode)},
          {"pre_normalization_sum", r.state_probs.pre_normalization_sum}}},
        {"mgfs",
         {{"values", state_vector_json(r.mgfs.values)},
          {"deficits", state_vector_json(r.mgfs.deficits)},
          {"mode", to_string(r.mgfs.mode)},
          {"theta", r.mgfs.theta}}},
        {"log_mgf_sum", r.log_mgf_sum},
        {"diagnostics",
         {{"ff_upper_used", to_string(r.diagnostics.ff_upper_used)},
          {"outage_probability", r.diagnostics.outage_probability},
          {"s7_discrepancy", r.diagnostics.s7_discrepancy},
          {"clamp_probability", r.diagnostics.clamp_probability}}}};
}

}  // namespace nfec
