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

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nfec {

inline constexpr double speed_of_light = 299792458.0;  // m/s

/// How the eight unconditional state probabilities are assembled.
///  - paper_literal:   1/4 prefactors with regime-conditional densities,
///                     followed by renormalization of the 8-vector.
///  - geometric_prior: area-based regime priors with the consistent S7
///                     conditional; sums to one without renormalization.
enum class ProbMode { paper_literal, geometric_prior };

/// How per-state MGFs are normalized.
///  - paper_literal: plain Gaussian-weighted integral over the state region.
///  - normalized:    conditional expectation E[exp(-theta R) | state].
enum class MgfMode { paper_literal, normalized };

/// Upper limit of the far-field estimate region used by the MGF integrals.
/// `automatic` resolves to d_max under MgfMode::paper_literal and to
/// `extended` (d + 10 sigma) under MgfMode::normalized.
enum class FfUpperLimit { automatic, d_max, extended };

/// Raised for any violated configuration invariant. `field()` names the
/// offending SystemParams member.
class config_error : public std::invalid_argument {
public:
    config_error(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Raised when a formula is evaluated outside its domain.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Physical and statistical configuration of the link. Lengths in metres,
/// capacities in bits per channel use, theta per bit.
struct SystemParams {
    double wavelength_m = 0.0;
    double aperture_tx_m = 0.0;
    double aperture_rx_m = 0.0;
    double tx_power_w = 1.0;
    double noise_psd = 1.0;
    double snr = 1.0;  // rho = P / N0
    double c0 = 1.0;
    double d_min_m = 1.0;
    double d_max_m = 500.0;
    double sigma_d_m = 5.0;
    double theta = 0.01;
    ProbMode prob_mode = ProbMode::geometric_prior;
    MgfMode mgf_mode = MgfMode::normalized;
    FfUpperLimit ff_mgf_upper = FfUpperLimit::automatic;

    bool operator==(const SystemParams&) const = default;
};

inline double fraunhofer_distance(const SystemParams& p) {
    return 2.0 * p.aperture_tx_m * p.aperture_rx_m / p.wavelength_m;
}

/// SNR that puts the far-field capacity at exactly one bit at d_max.
inline double snr_for_unit_far_capacity(double c0, double aperture_tx_m,
                                        double aperture_rx_m, double d_max_m) {
    return d_max_m * d_max_m / (c0 * aperture_tx_m * aperture_rx_m);
}

/// 28 GHz carrier, 100 and 25 wavelength apertures, 1..500 m annulus,
/// sigma_d = 5 m, P = 1 W, and rho anchored so that C_f(d_max) = 1 bit.
inline SystemParams default_params() {
    SystemParams p;
    p.wavelength_m = speed_of_light / 28.0e9;
    p.aperture_tx_m = 100.0 * p.wavelength_m;
    p.aperture_rx_m = 25.0 * p.wavelength_m;
    p.c0 = 1.0;
    p.d_min_m = 1.0;
    p.d_max_m = 500.0;
    p.sigma_d_m = 5.0;
    p.theta = 0.01;
    p.tx_power_w = 1.0;
    p.snr = snr_for_unit_far_capacity(p.c0, p.aperture_tx_m, p.aperture_rx_m, p.d_max_m);
    p.noise_psd = p.tx_power_w / p.snr;
    return p;
}

namespace detail {

inline void require(bool ok, const char* field, const char* what) {
    if (!ok) throw config_error(field, what);
}

inline bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace detail

/// Checks every SystemParams invariant and returns the parameters unchanged.
inline SystemParams validate(const SystemParams& p) {
    using detail::finite_positive;
    using detail::require;
    require(finite_positive(p.wavelength_m), "wavelength_m", "must be finite and > 0");
    require(finite_positive(p.aperture_rx_m), "aperture_rx_m", "must be finite and > 0");
    require(finite_positive(p.aperture_tx_m), "aperture_tx_m", "must be finite and > 0");
    require(p.aperture_tx_m >= p.aperture_rx_m, "aperture_rx_m",
            "aperture ordering violated (aperture_rx_m > aperture_tx_m)");
    require(finite_positive(p.tx_power_w), "tx_power_w", "must be finite and > 0");
    require(finite_positive(p.noise_psd), "noise_psd", "must be finite and > 0");
    require(finite_positive(p.snr), "snr", "must be finite and > 0");
    require(std::abs(p.snr - p.tx_power_w / p.noise_psd) <= 1e-9 * p.snr, "snr",
            "inconsistent with tx_power_w / noise_psd");
    require(finite_positive(p.c0), "c0", "must be finite and > 0");
    require(std::isfinite(p.d_min_m), "d_min_m", "must be finite");
    require(p.d_min_m > 0.0, "d_min_m", "must be > 0 (the origin is excluded)");
    require(std::isfinite(p.d_max_m), "d_max_m", "must be finite");
    require(p.d_max_m > p.d_min_m, "d_max_m", "empty support (d_max_m <= d_min_m)");
    require(std::isfinite(p.sigma_d_m) && p.sigma_d_m >= 0.0, "sigma_d_m",
            "must be finite and >= 0");
    require(finite_positive(p.theta), "theta", "must be finite and > 0");
    const double d_f = fraunhofer_distance(p);
    require(d_f > p.d_min_m && d_f < p.d_max_m, "aperture_tx_m",
            "fraunhofer distance outside (d_min_m, d_max_m)");
    return p;
}

/// The FF upper limit actually used for a given MGF mode.
inline FfUpperLimit resolved_ff_upper(const SystemParams& p) {
    if (p.ff_mgf_upper != FfUpperLimit::automatic) return p.ff_mgf_upper;
    return p.mgf_mode == MgfMode::normalized ? FfUpperLimit::extended : FfUpperLimit::d_max;
}

inline std::string_view to_string(ProbMode m) {
    return m == ProbMode::paper_literal ? "paper_literal" : "geometric_prior";
}
inline std::string_view to_string(MgfMode m) {
    return m == MgfMode::paper_literal ? "paper_literal" : "normalized";
}
inline std::string_view to_string(FfUpperLimit m) {
    switch (m) {
        case FfUpperLimit::d_max: return "d_max";
        case FfUpperLimit::extended: return "extended";
        default: return "auto";
    }
}

inline ProbMode parse_prob_mode(std::string_view s) {
    if (s == "paper_literal") return ProbMode::paper_literal;
    if (s == "geometric_prior") return ProbMode::geometric_prior;
    throw config_error("prob_mode", "unknown value '" + std::string(s) + "'");
}
inline MgfMode parse_mgf_mode(std::string_view s) {
    if (s == "paper_literal") return MgfMode::paper_literal;
    if (s == "normalized") return MgfMode::normalized;
    throw config_error("mgf_mode", "unknown value '" + std::string(s) + "'");
}
inline FfUpperLimit parse_ff_upper(std::string_view s) {
    if (s == "auto") return FfUpperLimit::automatic;
    if (s == "d_max") return FfUpperLimit::d_max;
    if (s == "extended") return FfUpperLimit::extended;
    throw config_error("ff_mgf_upper", "unknown value '" + std::string(s) + "'");
}

}  // namespace nfec
