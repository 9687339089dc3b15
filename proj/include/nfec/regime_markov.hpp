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
#include <numeric>

#include "numerics.hpp"
#include "params.hpp"
#include "ranging.hpp"

namespace nfec {

/// The eight slot states. NF-true states are S1..S4, FF-true states S5..S8;
/// odd states are reliable, even states are outages.
enum class StateId : int { s1 = 1, s2, s3, s4, s5, s6, s7, s8 };

inline constexpr std::size_t state_count = 8;

inline constexpr std::array<StateId, state_count> all_states{
    StateId::s1, StateId::s2, StateId::s3, StateId::s4,
    StateId::s5, StateId::s6, StateId::s7, StateId::s8};

constexpr std::size_t index_of(StateId s) { return static_cast<std::size_t>(s) - 1; }
constexpr StateId state_at(std::size_t i) { return static_cast<StateId>(static_cast<int>(i) + 1); }

constexpr bool is_near_field_state(StateId s) { return static_cast<int>(s) <= 4; }
constexpr bool is_reliable_state(StateId s) { return static_cast<int>(s) % 2 == 1; }
constexpr bool is_empty_state(StateId s) { return s == StateId::s4 || s == StateId::s5; }

/// State from first principles: true regime, decided regime and the actual
/// rate comparison.
constexpr StateId classify_state(bool true_near, bool decided_near, bool reliable) {
    int base = true_near ? (decided_near ? 1 : 3) : (decided_near ? 5 : 7);
    return static_cast<StateId>(reliable ? base : base + 1);
}

using StateVector = std::array<double, state_count>;

struct StateDistribution {
    StateVector probs{};
    ProbMode mode = ProbMode::geometric_prior;
    double pre_normalization_sum = 0.0;
};

struct TransitionMatrix {
    std::array<StateVector, state_count> rows{};
};

/// S7 conditional exactly as printed: Pr(d_hat >= d_F) / Pr(d_hat >= 0).
/// Overlaps S8 for d > d_F.
inline double s7_cond_literal(double d, const SystemParams& p) {
    const double s = p.sigma_d_m;
    return q_function((fraunhofer_distance(p) - d) / s) / std_normal_cdf(d / s);
}

/// Consistent S7 conditional: for d >= d_F the binding event is d_hat >= d.
inline double s7_cond_consistent(double d, const SystemParams& p) {
    return 0.5 / std_normal_cdf(d / p.sigma_d_m);
}

/// Pr(state | d). NF states require d < d_F, FF states d >= d_F.
inline double state_prob_cond(StateId state, double d, const SystemParams& p) {
    detail::require_sigma(p.sigma_d_m, "state_prob_cond");
    const double d_f = fraunhofer_distance(p);
    if (!(d > 0.0)) throw domain_error("state_prob_cond: requires d > 0");
    if (is_near_field_state(state) && !(d < d_f))
        throw domain_error("state_prob_cond: near-field state needs d < d_F");
    if (!is_near_field_state(state) && !(d >= d_f))
        throw domain_error("state_prob_cond: far-field state needs d >= d_F");
    const double s = p.sigma_d_m;
    const double to_boundary = (d_f - d) / s;
    const double trunc = std_normal_cdf(d / s);
    switch (state) {
        case StateId::s1: return normal_mass(0.0, to_boundary) / trunc;
        case StateId::s2: return normal_mass(-d / s, 0.0) / trunc;
        case StateId::s3: return q_function(to_boundary) / trunc;
        case StateId::s6: return normal_mass(-d / s, to_boundary) / trunc;
        case StateId::s7:
            return p.prob_mode == ProbMode::paper_literal ? s7_cond_literal(d, p) : s7_cond_consistent(d, p);
        case StateId::s8: return normal_mass(to_boundary, 0.0) / trunc;
        default: return 0.0;
    }
}

namespace detail {

// Integral of Pr(state | d) * weight(d) over the state's regime.
template <class Weight>
double integrate_state(StateId state, const SystemParams& p, Weight&& weight, const QuadratureSettings& q) {
    if (is_empty_state(state)) return 0.0;
    const double d_f = fraunhofer_distance(p);
    const bool nf = is_near_field_state(state);
    const double lo = nf ? p.d_min_m : d_f;
    const double hi = nf ? d_f : p.d_max_m;
    const double below = std::nextafter(d_f, 0.0);
    auto f = [&](double d) {
        const double dd = nf ? std::min(d, below) : std::max(d, d_f);
        return state_prob_cond(state, dd, p) * weight(dd);
    };
    return integrate_pieces(f, lo, hi, regime_knots(p.d_min_m, d_f, p.sigma_d_m), q).value;
}

}  // namespace detail

/// Unconditional state probabilities under the configured ProbMode.
inline StateDistribution state_distribution(const SystemParams& p, const QuadratureSettings& q = {}) {
    StateDistribution dist;
    dist.mode = p.prob_mode;
    const double d_f = fraunhofer_distance(p);
    for (StateId s : all_states) {
        double w = 0.0;
        if (p.prob_mode == ProbMode::geometric_prior) {
            w = detail::integrate_state(s, p, [&](double d) { return annulus_density(d, p); }, q);
        } else {
            const bool nf = is_near_field_state(s);
            const double lo = nf ? p.d_min_m : d_f;
            const double hi = nf ? d_f : p.d_max_m;
            w = 0.25 * detail::integrate_state(s, p, [&](double d) { return radial_density(d, lo, hi); }, q);
        }
        dist.probs[index_of(s)] = w;
    }
    dist.pre_normalization_sum = std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0);
    if (p.prob_mode == ProbMode::paper_literal)
        for (double& x : dist.probs) x /= dist.pre_normalization_sum;
    return dist;
}

/// Area-weighted gap between the printed and the consistent S7 conditional,
/// i.e. the mass double-counted with S8.
inline double s7_discrepancy(const SystemParams& p, const QuadratureSettings& q = {}) {
    const double d_f = fraunhofer_distance(p);
    auto f = [&](double d) {
        const double dd = std::max(d, d_f);
        return (s7_cond_literal(dd, p) - s7_cond_consistent(dd, p)) * annulus_density(dd, p);
    };
    return integrate_pieces(f, d_f, p.d_max_m, detail::regime_knots(p.d_min_m, d_f, p.sigma_d_m), q).value;
}

/// Slots are i.i.d. across time, so every row is the stationary vector.
inline TransitionMatrix transition_matrix(const StateDistribution& dist) {
    TransitionMatrix m;
    m.rows.fill(dist.probs);
    return m;
}

}  // namespace nfec
