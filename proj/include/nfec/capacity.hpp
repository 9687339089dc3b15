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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "params.hpp"

namespace nfec {

enum class Regime { near_field, far_field };

struct SlotRates {
    double scheduled_rate = 0.0;  // R(d_hat)
    double true_capacity = 0.0;   // C_n(d) or C_f(d)
    double service = 0.0;
    bool in_outage = false;
};

namespace detail {

inline double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

}  // namespace detail

/// Phase-compensation term v(d) = ln[((Lt+Lr)^2 + 4d^2) / ((Lt-Lr)^2 + 4d^2)],
/// written as a log1p so it stays accurate when d dwarfs the apertures.
inline double v_coupling(double d, const SystemParams& p) {
    if (!(d > 0.0)) throw domain_error("v_coupling: requires d > 0");
    const double lt = p.aperture_tx_m;
    const double lr = p.aperture_rx_m;
    const double diff = lt - lr;
    return std::log1p(4.0 * lt * lr / (diff * diff + 4.0 * d * d));
}

/// Distance at which the denominator of u(d) vanishes (twice d_F).
inline double near_field_formula_limit(const SystemParams& p) {
    return 4.0 * p.aperture_tx_m * p.aperture_rx_m / p.wavelength_m;
}

inline double u_coupling(double d, const SystemParams& p) {
    if (!(d > 0.0)) throw domain_error("u_coupling: requires d > 0");
    if (d >= near_field_formula_limit(p))
        throw domain_error("u_coupling: d at or beyond 4 Lt Lr / lambda");
    const double area = p.aperture_tx_m * p.aperture_rx_m;
    const double lambda = p.wavelength_m;
    const double num = 2.0 * area - d * d * v_coupling(d, p);
    const double den = area * lambda * d - lambda * lambda * d * d / 4.0;
    return num * num / den;
}

/// Near-field SNR geometry factor,
/// (Lt Lr lambda / d^3 - lambda^2 / (4 d^2))^2 / (2 Lt Lr / d^2 - v(d))^3.
inline double near_field_gain(double d, const SystemParams& p) {
    const double area = p.aperture_tx_m * p.aperture_rx_m;
    const double lambda = p.wavelength_m;
    const double a = area * lambda / (d * d * d) - lambda * lambda / (4.0 * d * d);
    const double b = 2.0 * area / (d * d) - v_coupling(d, p);
    return a * a / (b * b * b);
}

inline double far_field_gain(double d, const SystemParams& p) {
    return p.aperture_tx_m * p.aperture_rx_m / (d * d);
}

/// Continuous-aperture near-field capacity in bits per channel use.
inline double capacity_near(double d, const SystemParams& p) {
    const double u = u_coupling(d, p);
    const double snr_term = p.c0 * near_field_gain(d, p) * p.snr;
    if (!(snr_term > -1.0) || !std::isfinite(snr_term))
        throw domain_error("capacity_near: log argument not positive");
    return u * detail::log2_1p(snr_term);
}

inline double capacity_far(double d, const SystemParams& p) {
    if (!(d > 0.0)) throw domain_error("capacity_far: requires d > 0");
    return detail::log2_1p(p.c0 * far_field_gain(d, p) * p.snr);
}

/// Capacity of the regime the user actually occupies.
inline double true_capacity(double d, const SystemParams& p) {
    return d < fraunhofer_distance(p) ? capacity_near(d, p) : capacity_far(d, p);
}

/// Rate the scheduler picks from the distance estimate. Near-field
/// evaluation is clamped at d_min, where the formula is still bounded.
inline double scheduled_rate(double d_hat, const SystemParams& p) {
    if (!(d_hat >= 0.0)) throw domain_error("scheduled_rate: requires d_hat >= 0");
    if (d_hat < fraunhofer_distance(p)) return capacity_near(std::max(d_hat, p.d_min_m), p);
    return capacity_far(d_hat, p);
}

/// Realized service in a slot: the scheduled rate if it does not exceed the
/// true capacity (equality is reliable), zero otherwise.
inline SlotRates service_rate(double d, double d_hat, const SystemParams& p) {
    SlotRates r;
    r.true_capacity = true_capacity(d, p);
    r.scheduled_rate = scheduled_rate(d_hat, p);
    const bool reliable = r.scheduled_rate <= r.true_capacity;
    r.service = reliable ? r.scheduled_rate : 0.0;
    r.in_outage = !reliable && r.scheduled_rate > 0.0;
    return r;
}

struct RateMonotonicityReport {
    std::size_t n_grid = 0;
    bool monotone = true;               // composite rate nonincreasing on the grid
    bool near_field_monotone = true;    // over grid points below d_F
    bool far_field_monotone = true;     // over grid points at or above d_F
    double boundary_jump = 0.0;         // C_n(d_F-) - C_f(d_F)
    double first_violation_m = std::numeric_limits<double>::quiet_NaN();
};

/// Scheduled rate on a log-spaced grid over [d_min, d_max]. A positive
/// boundary jump is what makes S3 always reliable and S6 always an outage.
inline RateMonotonicityReport check_rate_monotonicity(const SystemParams& p, std::size_t n_grid) {
    if (n_grid < 2) throw std::invalid_argument("check_rate_monotonicity: n_grid >= 2");
    RateMonotonicityReport rep;
    rep.n_grid = n_grid;
    const double d_f = fraunhofer_distance(p);
    const double lo = std::log(p.d_min_m);
    const double hi = std::log(p.d_max_m);
    double prev_rate = 0.0;
    double prev_d = 0.0;
    for (std::size_t i = 0; i < n_grid; ++i) {
        const double d = i + 1 == n_grid
                             ? p.d_max_m
                             : std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_grid - 1));
        const double rate = scheduled_rate(d, p);
        if (i > 0 && rate > prev_rate) {
            if (rep.monotone) rep.first_violation_m = d;
            rep.monotone = false;
            if (d < d_f) rep.near_field_monotone = false;
            else if (prev_d >= d_f) rep.far_field_monotone = false;
        }
        prev_rate = rate;
        prev_d = d;
    }
    const double below = std::nextafter(d_f, 0.0);
    rep.boundary_jump = capacity_near(below, p) - capacity_far(d_f, p);
    if (rep.boundary_jump < 0.0) rep.monotone = false;
    return rep;
}

}  // namespace nfec
