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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "nfec/regime_markov.hpp"
#include "oracles.hpp"

namespace {

using nfec::StateId;
using nfec::SystemParams;

SystemParams with_sigma(double s) {
    SystemParams p = nfec::default_params();
    p.sigma_d_m = s;
    return p;
}

double prob(const nfec::StateDistribution& dist, StateId s) { return dist.probs[nfec::index_of(s)]; }

TEST(ClassifyState, CoversAllEight) {
    EXPECT_EQ(nfec::classify_state(true, true, true), StateId::s1);
    EXPECT_EQ(nfec::classify_state(true, true, false), StateId::s2);
    EXPECT_EQ(nfec::classify_state(true, false, true), StateId::s3);
    EXPECT_EQ(nfec::classify_state(true, false, false), StateId::s4);
    EXPECT_EQ(nfec::classify_state(false, true, true), StateId::s5);
    EXPECT_EQ(nfec::classify_state(false, true, false), StateId::s6);
    EXPECT_EQ(nfec::classify_state(false, false, true), StateId::s7);
    EXPECT_EQ(nfec::classify_state(false, false, false), StateId::s8);
    for (StateId s : nfec::all_states) EXPECT_EQ(nfec::state_at(nfec::index_of(s)), s);
}

TEST(ConditionalStates, NearGroupSumsToOne) {
    const SystemParams p = with_sigma(5.0);
    const double d_f = nfec::fraunhofer_distance(p);
    for (double d = 1.0; d < d_f; d += 0.37) {
        double sum = 0.0;
        for (StateId s : {StateId::s1, StateId::s2, StateId::s3, StateId::s4}) sum += nfec::state_prob_cond(s, d, p);
        EXPECT_NEAR(sum, 1.0, 1e-12) << d;
    }
}

TEST(ConditionalStates, FarGroupSumsToOne) {
    const SystemParams p = with_sigma(5.0);
    const double d_f = nfec::fraunhofer_distance(p);
    for (double d = d_f; d <= p.d_max_m; d += 1.9) {
        double sum = 0.0;
        for (StateId s : {StateId::s5, StateId::s6, StateId::s7, StateId::s8}) sum += nfec::state_prob_cond(s, d, p);
        EXPECT_NEAR(sum, 1.0, 1e-12) << d;
    }
}

TEST(ConditionalStates, ReliableFarFieldMatchesPlainGaussianFarAway) {
    const SystemParams p = with_sigma(5.0);
    EXPECT_NEAR(nfec::state_prob_cond(StateId::s7, 300.0, p), 0.5, 1e-15);
    EXPECT_NEAR(nfec::state_prob_cond(StateId::s6, 300.0, p), oracle::phi((nfec::fraunhofer_distance(p) - 300.0) / 5.0),
                1e-15);
}

TEST(ConditionalStates, WrongRegimeThrows) {
    const SystemParams p = with_sigma(5.0);
    const double d_f = nfec::fraunhofer_distance(p);
    EXPECT_THROW(nfec::state_prob_cond(StateId::s1, d_f, p), nfec::domain_error);
    EXPECT_THROW(nfec::state_prob_cond(StateId::s7, d_f - 1.0, p), nfec::domain_error);
    EXPECT_THROW(nfec::state_prob_cond(StateId::s1, 10.0, with_sigma(0.0)), nfec::domain_error);
}

TEST(StateDistribution, SumsToOneAcrossSigma) {
    for (double s : {0.5, 1.0, 5.0, 12.0, 20.0}) {
        const auto dist = nfec::state_distribution(with_sigma(s));
        EXPECT_NEAR(std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0), 1.0, 1e-9) << s;
        EXPECT_EQ(prob(dist, StateId::s4), 0.0);
        EXPECT_EQ(prob(dist, StateId::s5), 0.0);
    }
}

TEST(StateDistribution, GroupsMatchRegimePriors) {
    const SystemParams p = with_sigma(5.0);
    const auto dist = nfec::state_distribution(p);
    const double prior = nfec::near_field_prior(p);
    EXPECT_NEAR(prob(dist, StateId::s1) + prob(dist, StateId::s2) + prob(dist, StateId::s3), prior, 1e-11);
    EXPECT_NEAR(prob(dist, StateId::s6) + prob(dist, StateId::s7) + prob(dist, StateId::s8), 1 - prior, 1e-10);
}

TEST(StateDistribution, MatchesIndependentQuadrature) {
    const SystemParams p = with_sigma(5.0);
    const auto lib = nfec::state_distribution(p);
    const auto ref = oracle::state_probs(oracle::Link::from(p));
    for (std::size_t i = 0; i < nfec::state_count; ++i) EXPECT_NEAR(lib.probs[i], ref[i], 1e-9) << "S" << i + 1;
}

TEST(StateDistribution, ErrorStatesAreTheDecisionErrors) {
    const SystemParams p = with_sigma(7.0);
    const auto dist = nfec::state_distribution(p);
    EXPECT_NEAR(prob(dist, StateId::s3), nfec::p_false_far(p), 1e-12);
    EXPECT_NEAR(prob(dist, StateId::s6), nfec::p_false_near(p), 1e-12);
}

TEST(StateDistribution, InvariantUnderLengthScaling) {
    const SystemParams p = with_sigma(5.0);
    SystemParams q = p;
    const double k = 3.7;
    q.wavelength_m *= k;
    q.aperture_tx_m *= k;
    q.aperture_rx_m *= k;
    q.d_min_m *= k;
    q.d_max_m *= k;
    q.sigma_d_m *= k;
    const auto a = nfec::state_distribution(p);
    const auto b = nfec::state_distribution(q);
    for (std::size_t i = 0; i < nfec::state_count; ++i) EXPECT_NEAR(a.probs[i], b.probs[i], 1e-11);
}

TEST(LiteralMode, RawSumCarriesTheFarFieldSurplus) {
    SystemParams p = with_sigma(5.0);
    p.prob_mode = nfec::ProbMode::paper_literal;
    const auto dist = nfec::state_distribution(p);
    const double surplus = nfec::s7_discrepancy(p) / (1.0 - nfec::near_field_prior(p));
    EXPECT_NEAR(dist.pre_normalization_sum, 0.5 + 0.25 * surplus, 1e-10);
    EXPECT_GT(dist.pre_normalization_sum, 0.6);
    EXPECT_NEAR(std::accumulate(dist.probs.begin(), dist.probs.end(), 0.0), 1.0, 1e-14);
}

TEST(LiteralMode, NearGroupEqualsHalfAfterWeighting) {
    SystemParams p = with_sigma(5.0);
    p.prob_mode = nfec::ProbMode::paper_literal;
    const auto dist = nfec::state_distribution(p);
    const double nf = (prob(dist, StateId::s1) + prob(dist, StateId::s2) + prob(dist, StateId::s3)) *
                      dist.pre_normalization_sum;
    EXPECT_NEAR(nf, 0.25, 1e-11);
}

TEST(S7Discrepancy, LiteralConditionalOverlapsS8) {
    const SystemParams p = with_sigma(5.0);
    for (double d : {60.0, 100.0, 400.0}) {
        const double lit = nfec::s7_cond_literal(d, p);
        const double overlap = lit + nfec::state_prob_cond(StateId::s8, d, p) + nfec::state_prob_cond(StateId::s6, d, p);
        EXPECT_GT(overlap, 1.0);
    }
    EXPECT_GT(nfec::s7_discrepancy(p), 0.0);
}

TEST(TransitionMatrix, IdenticalStochasticRows) {
    const auto dist = nfec::state_distribution(with_sigma(5.0));
    const auto tm = nfec::transition_matrix(dist);
    for (const auto& row : tm.rows) {
        EXPECT_EQ(row, dist.probs);
        EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
    }
}

}  // namespace
