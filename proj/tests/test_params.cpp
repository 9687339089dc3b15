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

#include <gtest/gtest.h>

#include "nfec/params.hpp"

namespace {

using nfec::SystemParams;

// 5000 wavelengths at 28 GHz, evaluated once in 30-digit arithmetic.
constexpr double kDefaultFraunhofer = 53.5343675;

TEST(Fraunhofer, UnitGeometry) {
    SystemParams p;
    p.wavelength_m = 1.0;
    p.aperture_tx_m = 1.0;
    p.aperture_rx_m = 1.0;
    EXPECT_DOUBLE_EQ(nfec::fraunhofer_distance(p), 2.0);
}

TEST(Fraunhofer, DefaultsGive5000Wavelengths) {
    const SystemParams p = nfec::default_params();
    EXPECT_NEAR(nfec::fraunhofer_distance(p), kDefaultFraunhofer, 1e-9 * kDefaultFraunhofer);
    EXPECT_NEAR(nfec::fraunhofer_distance(p) / p.wavelength_m, 5000.0, 1e-9);
}

TEST(Fraunhofer, LinearInTxAperture) {
    SystemParams p = nfec::default_params();
    const double base = nfec::fraunhofer_distance(p);
    p.aperture_tx_m *= 2.0;
    EXPECT_DOUBLE_EQ(nfec::fraunhofer_distance(p), 2.0 * base);
}

TEST(Fraunhofer, MonotoneOnParameterGrid) {
    SystemParams p = nfec::default_params();
    for (double lt : {0.5, 1.0, 2.0})
        for (double lr : {0.1, 0.2, 0.4})
            for (double lambda : {0.005, 0.01, 0.02}) {
                p.aperture_tx_m = lt;
                p.aperture_rx_m = lr;
                p.wavelength_m = lambda;
                const double d = nfec::fraunhofer_distance(p);
                SystemParams q = p;
                q.aperture_tx_m *= 1.1;
                EXPECT_GT(nfec::fraunhofer_distance(q), d);
                q = p;
                q.aperture_rx_m *= 1.1;
                EXPECT_GT(nfec::fraunhofer_distance(q), d);
                q = p;
                q.wavelength_m *= 1.1;
                EXPECT_LT(nfec::fraunhofer_distance(q), d);
            }
}

TEST(DefaultParams, SnrAnchorsFarCapacityAtOneBit) {
    const SystemParams p = nfec::default_params();
    EXPECT_NEAR(p.snr, 872317.643946036850824, 1e-9 * p.snr);
    EXPECT_DOUBLE_EQ(p.noise_psd * p.snr, p.tx_power_w);
    EXPECT_DOUBLE_EQ(p.c0 * p.aperture_tx_m * p.aperture_rx_m * p.snr / (p.d_max_m * p.d_max_m), 1.0);
}

TEST(Validate, AcceptsDefaults) {
    const SystemParams p = nfec::default_params();
    EXPECT_EQ(nfec::validate(p), p);
}

TEST(Validate, Idempotent) {
    const SystemParams p = nfec::default_params();
    EXPECT_EQ(nfec::validate(nfec::validate(p)), nfec::validate(p));
}

std::string failing_field(const SystemParams& p) {
    try {
        nfec::validate(p);
    } catch (const nfec::config_error& e) {
        return e.field();
    }
    return "";
}

std::string failing_message(const SystemParams& p) {
    try {
        nfec::validate(p);
    } catch (const nfec::config_error& e) {
        return e.what();
    }
    return "";
}

TEST(Validate, EmptySupport) {
    SystemParams p = nfec::default_params();
    p.d_max_m = p.d_min_m;
    EXPECT_EQ(failing_field(p), "d_max_m");
    EXPECT_NE(failing_message(p).find("empty support"), std::string::npos);
}

TEST(Validate, ApertureOrdering) {
    SystemParams p = nfec::default_params();
    std::swap(p.aperture_tx_m, p.aperture_rx_m);
    EXPECT_EQ(failing_field(p), "aperture_rx_m");
    EXPECT_NE(failing_message(p).find("aperture ordering"), std::string::npos);
}

TEST(Validate, RejectsZeroInnerRadius) {
    SystemParams p = nfec::default_params();
    p.d_min_m = 0.0;
    EXPECT_EQ(failing_field(p), "d_min_m");
}

TEST(Validate, RejectsBoundaryOutsideAnnulus) {
    SystemParams p = nfec::default_params();
    p.d_max_m = 50.0;  // below d_F
    EXPECT_EQ(failing_field(p), "aperture_tx_m");
    p = nfec::default_params();
    p.d_min_m = 60.0;
    EXPECT_EQ(failing_field(p), "aperture_tx_m");
}

TEST(Validate, OneFieldPerInvariant) {
    const SystemParams base = nfec::default_params();
    struct Case {
        const char* field;
        void (*mutate)(SystemParams&);
    };
    const Case cases[] = {
        {"wavelength_m", [](SystemParams& p) { p.wavelength_m = -1.0; }},
        {"aperture_rx_m", [](SystemParams& p) { p.aperture_rx_m = 0.0; }},
        {"tx_power_w", [](SystemParams& p) { p.tx_power_w = 0.0; }},
        {"snr", [](SystemParams& p) { p.snr *= 2.0; }},
        {"c0", [](SystemParams& p) { p.c0 = 0.0; }},
        {"sigma_d_m", [](SystemParams& p) { p.sigma_d_m = -1.0; }},
        {"theta", [](SystemParams& p) { p.theta = 0.0; }},
    };
    for (const auto& c : cases) {
        SystemParams p = base;
        c.mutate(p);
        EXPECT_EQ(failing_field(p), c.field);
    }
}

TEST(Validate, ZeroSigmaIsAllowed) {
    SystemParams p = nfec::default_params();
    p.sigma_d_m = 0.0;
    EXPECT_NO_THROW(nfec::validate(p));
}

TEST(Modes, RoundTripThroughStrings) {
    for (auto m : {nfec::ProbMode::paper_literal, nfec::ProbMode::geometric_prior})
        EXPECT_EQ(nfec::parse_prob_mode(nfec::to_string(m)), m);
    for (auto m : {nfec::MgfMode::paper_literal, nfec::MgfMode::normalized})
        EXPECT_EQ(nfec::parse_mgf_mode(nfec::to_string(m)), m);
    for (auto m : {nfec::FfUpperLimit::automatic, nfec::FfUpperLimit::d_max, nfec::FfUpperLimit::extended})
        EXPECT_EQ(nfec::parse_ff_upper(nfec::to_string(m)), m);
    EXPECT_THROW(nfec::parse_prob_mode("nope"), nfec::config_error);
}

TEST(Modes, AutomaticUpperLimitFollowsMgfMode) {
    SystemParams p = nfec::default_params();
    EXPECT_EQ(nfec::resolved_ff_upper(p), nfec::FfUpperLimit::extended);
    p.mgf_mode = nfec::MgfMode::paper_literal;
    EXPECT_EQ(nfec::resolved_ff_upper(p), nfec::FfUpperLimit::d_max);
    p.ff_mgf_upper = nfec::FfUpperLimit::extended;
    EXPECT_EQ(nfec::resolved_ff_upper(p), nfec::FfUpperLimit::extended);
}

}  // namespace
