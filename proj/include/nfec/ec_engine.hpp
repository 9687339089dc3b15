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

#include <array>
#include <cmath>
#include <vector>

#include "capacity.hpp"
#include "numerics.hpp"
#include "params.hpp"
#include "ranging.hpp"
#include "regime_markov.hpp"

namespace nfec {

struct StateMgfs {
    StateVector values{};    // M_{R|S_i}(theta)
    StateVector deficits{};  // 1 - values, integrated directly for small theta
    MgfMode mode = MgfMode::normalized;
    double theta = 0.0;
};

struct EcDiagnostics {
    FfUpperLimit ff_upper_used = FfUpperLimit::d_max;
    double outage_probability = 0.0;  // mass of S2, S4, S6, S8
    double s7_discrepancy = 0.0;      // printed minus consistent S7 mass
    double clamp_probability = 0.0;   // Pr(d_hat < d_min), near-field rate clamped
};

struct EcResult {
    double theta = 0.0;
    double ec_bits_per_use = 0.0;
    StateDistribution state_probs;
    StateMgfs mgfs;
    double log_mgf_sum = 0.0;  // sum_i P_i M_i
    EcDiagnostics diagnostics;
};

namespace detail {

inline void require_theta(double theta, const char* who) {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw domain_error(std::string(who) + ": requires finite theta > 0");
}

// Estimate region of a reliable state in the standardized variable
// t = (d_hat - d) / sigma; empty when first >= second.
inline std::pair<double, double> state_region(StateId state, double d, const SystemParams& p) {
    const double s = p.sigma_d_m;
    const double d_f = fraunhofer_distance(p);
    const double upper_m = resolved_ff_upper(p) == FfUpperLimit::extended ? d + tail_sigmas * s : p.d_max_m;
    const double upper = std::min((upper_m - d) / s, tail_sigmas);
    switch (state) {
        case StateId::s1: return {0.0, std::min((d_f - d) / s, tail_sigmas)};
        case StateId::s3: return {(d_f - d) / s, upper};
        case StateId::s7: return {0.0, upper};
        default: return {0.0, 0.0};
    }
}

// Gaussian mass of the region and the integral of (1 - exp(-theta R)) over it.
struct RegionIntegral {
    double mass = 0.0;
    double deficit = 0.0;
};

inline RegionIntegral region_integral(StateId state, double d, double theta, const SystemParams& p,
                                      const QuadratureSettings& q) {
    const auto [lo, hi] = state_region(state, d, p);
    if (!(hi > lo)) return {};
    const double s = p.sigma_d_m;
    auto g = [&](double t) {
        return -std::expm1(-theta * scheduled_rate(std::max(d + s * t, 0.0), p)) * std_normal_pdf(t);
    };
    return {normal_mass(lo, hi), integrate_1d(g, lo, hi, q).value};
}

inline std::vector<double> mgf_outer_knots(const SystemParams& p) {
    const double d_f = fraunhofer_distance(p);
    const double s = p.sigma_d_m;
    auto k = regime_knots(p.d_min_m, d_f, s);
    for (double m : {1.0, 3.0, tail_sigmas}) k.push_back(p.d_max_m - m * s);
    return k;
}

}  // namespace detail

/// MGF of the scheduled rate given the state and the true distance.
/// Outage and empty states return exactly 1.
inline double mgf_state_cond(StateId state, double d, double theta, const SystemParams& p,
                             const QuadratureSettings& q = {}) {
    detail::require_theta(theta, "mgf_state_cond");
    detail::require_sigma(p.sigma_d_m, "mgf_state_cond");
    const double d_f = fraunhofer_distance(p);
    if (is_near_field_state(state) ? !(d < d_f) : !(d >= d_f))
        throw domain_error("mgf_state_cond: distance does not match the state's regime");
    if (!is_reliable_state(state) || is_empty_state(state)) return 1.0;
    const auto r = detail::region_integral(state, d, theta, p, q);
    if (p.mgf_mode == MgfMode::paper_literal) return r.mass - r.deficit;
    if (!(r.mass > 0.0)) return 1.0;
    return 1.0 - r.deficit / r.mass;
}

/// All eight unconditional MGFs under the configured MgfMode.
inline StateMgfs state_mgfs(double theta, const SystemParams& p, const QuadratureSettings& q = {}) {
    detail::require_theta(theta, "state_mgfs");
    detail::require_sigma(p.sigma_d_m, "state_mgfs");
    StateMgfs out;
    out.mode = p.mgf_mode;
    out.theta = theta;
    out.values.fill(1.0);
    out.deficits.fill(0.0);
    const double d_f = fraunhofer_distance(p);
    const double below = std::nextafter(d_f, 0.0);
    SystemParams consistent = p;
    consistent.prob_mode = ProbMode::geometric_prior;
    for (StateId state : {StateId::s1, StateId::s3, StateId::s7}) {
        const bool nf = is_near_field_state(state);
        const double lo = nf ? p.d_min_m : d_f;
        const double hi = nf ? d_f : p.d_max_m;
        auto clamp_d = [&](double d) { return nf ? std::min(d, below) : std::max(d, d_f); };
        const auto knots = detail::mgf_outer_knots(p);
        double deficit = 0.0;
        if (p.mgf_mode == MgfMode::normalized) {
            // E[1 - e^{-theta R} | S_i] = int Pr(S_i|d) (1 - M(d)) f(d) / int Pr(S_i|d) f(d)
            auto num = [&](double x) {
                const double d = clamp_d(x);
                const auto r = detail::region_integral(state, d, theta, p, q);
                if (!(r.mass > 0.0)) return 0.0;
                return state_prob_cond(state, d, consistent) * (r.deficit / r.mass) * annulus_density(d, p);
            };
            auto den = [&](double x) {
                const double d = clamp_d(x);
                return state_prob_cond(state, d, consistent) * annulus_density(d, p);
            };
            const double mass = integrate_pieces(den, lo, hi, knots, q).value;
            deficit = mass > 0.0 ? integrate_pieces(num, lo, hi, knots, q).value / mass : 0.0;
            out.values[index_of(state)] = 1.0 - deficit;
        } else {
            auto f = [&](double x) {
                const double d = clamp_d(x);
                const auto r = detail::region_integral(state, d, theta, p, q);
                return (r.mass - r.deficit) * radial_density(d, lo, hi);
            };
            const double value = integrate_pieces(f, lo, hi, knots, q).value;
            deficit = 1.0 - value;
            out.values[index_of(state)] = value;
        }
        out.deficits[index_of(state)] = deficit;
    }
    return out;
}

inline double mgf_state(StateId state, double theta, const SystemParams& p, const QuadratureSettings& q = {}) {
    if (!is_reliable_state(state) || is_empty_state(state)) {
        detail::require_theta(theta, "mgf_state");
        return 1.0;
    }
    return state_mgfs(theta, p, q).values[index_of(state)];
}

namespace detail {

inline void require_consistent_modes(const SystemParams& p) {
    const bool validated = p.prob_mode == ProbMode::geometric_prior && p.mgf_mode == MgfMode::normalized;
    const bool literal = p.prob_mode == ProbMode::paper_literal && p.mgf_mode == MgfMode::paper_literal;
    if (!validated && !literal)
        throw config_error("mgf_mode",
                           "mode pairing must be geometric_prior/normalized or paper_literal/paper_literal");
}

}  // namespace detail

/// Integral of g(d, d_hat) against the joint law of the true distance
/// (uniform in area) and the truncated-Gaussian estimate. Inner breakpoints
/// at d_hat = d and d_hat = d_F, where the service switches.
template <class G>
double integrate_joint_law(G&& g, const SystemParams& p, const QuadratureSettings& q = {}) {
    detail::require_sigma(p.sigma_d_m, "integrate_joint_law");
    const double s = p.sigma_d_m;
    const double d_f = fraunhofer_distance(p);
    auto outer = [&](double d) {
        const double t_lo = std::max(-d / s, -detail::tail_sigmas);
        auto inner = [&](double t) { return g(d, std::max(d + s * t, 0.0)) * std_normal_pdf(t); };
        const double v = integrate_pieces(inner, t_lo, detail::tail_sigmas, {0.0, (d_f - d) / s}, q).value;
        return v / std_normal_cdf(d / s) * annulus_density(d, p);
    };
    return integrate_pieces(outer, p.d_min_m, p.d_max_m, detail::regime_knots(p.d_min_m, d_f, s), q).value;
}

/// Mean realized service E[s] in bits per channel use.
inline double mean_service_rate(const SystemParams& p, const QuadratureSettings& q = {}) {
    return integrate_joint_law([&](double d, double d_hat) { return service_rate(d, d_hat, p).service; }, p, q);
}

/// Pr(d_hat < d_min): slots whose near-field rate is evaluated at the clamp.
inline double clamp_probability(const SystemParams& p, const QuadratureSettings& q = {}) {
    const double s = p.sigma_d_m;
    auto f = [&](double d) {
        return normal_mass(-d / s, (p.d_min_m - d) / s) / std_normal_cdf(d / s) * annulus_density(d, p);
    };
    return integrate_pieces(f, p.d_min_m, p.d_max_m, {p.d_min_m + detail::tail_sigmas * s}, q).value;
}

/// Effective capacity -(1/theta) ln(sum_i P_i M_i), in bits per channel use.
inline EcResult effective_capacity(double theta, const SystemParams& p, const QuadratureSettings& q = {}) {
    detail::require_theta(theta, "effective_capacity");
    detail::require_consistent_modes(p);
    EcResult r;
    r.theta = theta;
    r.state_probs = state_distribution(p, q);
    r.mgfs = state_mgfs(theta, p, q);
    double total_deficit = 0.0;
    for (std::size_t i = 0; i < state_count; ++i) {
        r.log_mgf_sum += r.state_probs.probs[i] * r.mgfs.values[i];
        total_deficit += r.state_probs.probs[i] * r.mgfs.deficits[i];
        if (!is_reliable_state(state_at(i))) r.diagnostics.outage_probability += r.state_probs.probs[i];
    }
    r.ec_bits_per_use = p.mgf_mode == MgfMode::normalized ? -std::log1p(-total_deficit) / theta
                                                          : -std::log(r.log_mgf_sum) / theta;
    r.diagnostics.ff_upper_used = resolved_ff_upper(p);
    r.diagnostics.s7_discrepancy = s7_discrepancy(p, q);
    r.diagnostics.clamp_probability = clamp_probability(p, q);
    return r;
}

using Matrix8 = std::array<StateVector, state_count>;

struct PowerIterationSettings {
    double tol = 1e-12;
    int max_iterations = 10000;
};

/// Dominant eigenvalue of a nonnegative matrix by power iteration.
inline double spectral_radius(const Matrix8& a, PowerIterationSettings settings = {}) {
    StateVector v;
    v.fill(1.0 / static_cast<double>(state_count));
    double lambda = 0.0;
    for (int it = 0; it < settings.max_iterations; ++it) {
        StateVector w{};
        for (std::size_t i = 0; i < state_count; ++i)
            for (std::size_t j = 0; j < state_count; ++j) w[i] += a[i][j] * v[j];
        const double norm = std::accumulate(w.begin(), w.end(), 0.0, [](double acc, double x) { return acc + std::abs(x); });
        if (!(norm > 0.0)) return 0.0;
        for (std::size_t i = 0; i < state_count; ++i) v[i] = w[i] / norm;
        if (it > 0 && std::abs(norm - lambda) <= settings.tol * norm) return norm;
        lambda = norm;
    }
    throw std::runtime_error("spectral_radius: power iteration did not converge");
}

/// P * diag(M) for the identical-row chain.
inline Matrix8 service_matrix(const TransitionMatrix& tm, const StateMgfs& mgfs) {
    Matrix8 a{};
    for (std::size_t i = 0; i < state_count; ++i)
        for (std::size_t j = 0; j < state_count; ++j) a[i][j] = tm.rows[i][j] * mgfs.values[j];
    return a;
}

inline double effective_capacity_spectral(double theta, const SystemParams& p, const QuadratureSettings& q = {}) {
    detail::require_theta(theta, "effective_capacity_spectral");
    detail::require_consistent_modes(p);
    const auto tm = transition_matrix(state_distribution(p, q));
    return -std::log(spectral_radius(service_matrix(tm, state_mgfs(theta, p, q)))) / theta;
}

}  // namespace nfec
