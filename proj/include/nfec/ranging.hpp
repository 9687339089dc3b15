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
#include <random>

#include "capacity.hpp"
#include "numerics.hpp"
#include "params.hpp"

namespace nfec {

struct RangingOutcome {
    double d_true = 0.0;
    double d_hat = 0.0;
    Regime decided = Regime::near_field;
    bool correct = true;
};

namespace detail {

inline void require_sigma(double sigma, const char* who) {
    if (!(sigma > 0.0)) throw domain_error(std::string(who) + ": requires sigma_d > 0");
}

// Standard deviations beyond which Gaussian mass is treated as zero in
// quadrature bounds (tail mass below 1e-23).
inline constexpr double tail_sigmas = 10.0;

}  // namespace detail

/// CDF of the estimate at d_hat when it is N(d, sigma^2) truncated to [0, inf).
inline double trunc_gauss_cdf(double d_hat, double d, double sigma) {
    if (!(d_hat >= 0.0)) throw domain_error("trunc_gauss_cdf: requires d_hat >= 0");
    if (!(d > 0.0)) throw domain_error("trunc_gauss_cdf: requires d > 0");
    detail::require_sigma(sigma, "trunc_gauss_cdf");
    return normal_mass(-d / sigma, (d_hat - d) / sigma) / std_normal_cdf(d / sigma);
}

/// Draw from N(d, sigma^2) conditioned on a nonnegative result.
template <class Rng>
double sample_estimate(double d, double sigma, Rng& rng) {
    if (sigma == 0.0) return d;
    std::normal_distribution<double> noise(0.0, sigma);
    for (;;) {
        const double d_hat = d + noise(rng);
        if (d_hat >= 0.0) return d_hat;
    }
}

inline Regime classify(double d_hat, double d_f) {
    return d_hat < d_f ? Regime::near_field : Regime::far_field;
}

inline RangingOutcome make_outcome(double d, double d_hat, double d_f) {
    RangingOutcome o{d, d_hat, classify(d_hat, d_f), true};
    o.correct = (d < d_f) == (o.decided == Regime::near_field);
    return o;
}

/// Pr(d_hat >= d_F | d, d_hat >= 0) for a near-field user.
inline double p_false_far_cond(double d, const SystemParams& p) {
    const double d_f = fraunhofer_distance(p);
    if (!(d < d_f)) throw domain_error("p_false_far_cond: requires d < d_F");
    if (!(d > 0.0)) throw domain_error("p_false_far_cond: requires d > 0");
    detail::require_sigma(p.sigma_d_m, "p_false_far_cond");
    const double s = p.sigma_d_m;
    return q_function((d_f - d) / s) / std_normal_cdf(d / s);
}

/// Pr(0 <= d_hat < d_F | d, d_hat >= 0) for a far-field user.
inline double p_false_near_cond(double d, const SystemParams& p) {
    const double d_f = fraunhofer_distance(p);
    if (!(d >= d_f)) throw domain_error("p_false_near_cond: requires d >= d_F");
    detail::require_sigma(p.sigma_d_m, "p_false_near_cond");
    const double s = p.sigma_d_m;
    return normal_mass(-d / s, (d_f - d) / s) / std_normal_cdf(d / s);
}

/// Radial density 2d / (hi^2 - lo^2) of a user uniform in area over [lo, hi].
inline double radial_density(double d, double lo, double hi) {
    return 2.0 * d / (hi * hi - lo * lo);
}

inline double annulus_density(double d, const SystemParams& p) {
    return radial_density(d, p.d_min_m, p.d_max_m);
}

/// Area fraction of the annulus that lies in the near field.
inline double near_field_prior(const SystemParams& p) {
    const double d_f = fraunhofer_distance(p);
    const double lo = p.d_min_m;
    const double hi = p.d_max_m;
    return (d_f * d_f - lo * lo) / (hi * hi - lo * lo);
}

namespace detail {

// Outer-integration knots for functions of d whose features sit within a
// few sigma of d_F; keeps the adaptive rule from stepping over them.
inline std::vector<double> regime_knots(double lo, double d_f, double sigma) {
    std::vector<double> k{d_f};
    for (double m : {1.0, 3.0, tail_sigmas}) {
        k.push_back(d_f - m * sigma);
        k.push_back(d_f + m * sigma);
    }
    k.push_back(lo + tail_sigmas * sigma);
    return k;
}

}  // namespace detail

/// Joint probability of (true NF, decided FF): the conditional error
/// weighted by the full-annulus density over [d_min, d_F).
inline double p_false_far(const SystemParams& p, const QuadratureSettings& q = {}) {
    const double d_f = fraunhofer_distance(p);
    auto f = [&](double d) { return p_false_far_cond(std::min(d, std::nextafter(d_f, 0.0)), p) * annulus_density(d, p); };
    return integrate_pieces(f, p.d_min_m, d_f, detail::regime_knots(p.d_min_m, d_f, p.sigma_d_m), q).value;
}

/// Joint probability of (true FF, decided NF) over [d_F, d_max].
inline double p_false_near(const SystemParams& p, const QuadratureSettings& q = {}) {
    const double d_f = fraunhofer_distance(p);
    auto f = [&](double d) { return p_false_near_cond(std::max(d, d_f), p) * annulus_density(d, p); };
    return integrate_pieces(f, d_f, p.d_max_m, detail::regime_knots(p.d_min_m, d_f, p.sigma_d_m), q).value;
}

/// Both error conventions: joint (as weighted by the annulus density) and
/// regime-conditional (divided by the regime's prior).
struct ErrorRates {
    double joint_false_far = 0.0;
    double joint_false_near = 0.0;
    double conditional_false_far = 0.0;
    double conditional_false_near = 0.0;
};

inline ErrorRates error_rates(const SystemParams& p, const QuadratureSettings& q = {}) {
    ErrorRates r;
    r.joint_false_far = p_false_far(p, q);
    r.joint_false_near = p_false_near(p, q);
    const double prior_nf = near_field_prior(p);
    r.conditional_false_far = r.joint_false_far / prior_nf;
    r.conditional_false_near = r.joint_false_near / (1.0 - prior_nf);
    return r;
}

/// Inverse-CDF draw of the true distance for a user uniform in area.
template <class Rng>
double sample_distance(double d_min, double d_max, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double u = unif(rng);
    return std::clamp(std::sqrt(d_min * d_min + u * (d_max * d_max - d_min * d_min)), d_min, d_max);
}

}  // namespace nfec
