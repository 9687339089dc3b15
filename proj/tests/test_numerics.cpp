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
#include <numbers>

#include <gtest/gtest.h>

#include "nfec/numerics.hpp"
#include "oracles.hpp"

namespace {

TEST(NormalCdf, Symmetry) {
    EXPECT_EQ(nfec::std_normal_cdf(0.0), 0.5);
    EXPECT_NEAR(nfec::std_normal_cdf(-1.3), 1.0 - nfec::std_normal_cdf(1.3), 1e-15);
}

TEST(NormalCdf, PinnedValue) {
    // 30-digit reference
    EXPECT_NEAR(nfec::std_normal_cdf(1.96), 0.975002104851779563787, 1e-15);
}

TEST(NormalCdf, RelativeErrorAgainstBoost) {
    for (double x = -8.0; x <= 8.0; x += 0.0625) {
        const double ref = oracle::phi(x);
        EXPECT_NEAR(nfec::std_normal_cdf(x), ref, 1e-12 * ref) << x;
    }
}

TEST(QFunction, Basics) {
    EXPECT_EQ(nfec::q_function(0.0), 0.5);
    EXPECT_NEAR(nfec::q_function(2.7) + nfec::std_normal_cdf(2.7), 1.0, 1e-15);
    EXPECT_NEAR(nfec::q_function(3.0), 1.34989803163009452665e-3, 1e-17);
}

TEST(QFunction, DeepTailKeepsRelativePrecision) {
    for (double x : {10.0, 20.0, 30.0}) {
        const double ref = oracle::q(x);
        EXPECT_NEAR(nfec::q_function(x), ref, 1e-12 * ref) << x;
    }
}

// Strict only where the value has not yet rounded to 1 in double precision.
TEST(NormalLaw, StrictMonotonicityOnGrid) {
    double prev_cdf = 0.0;
    double prev_q = 1.0;
    for (double x = -8.0; x <= 8.0; x += 0.01) {
        if (x < 5.0) {
            EXPECT_GT(nfec::std_normal_cdf(x), prev_cdf);
        }
        if (x > -5.0) {
            EXPECT_LT(nfec::q_function(x), prev_q);
        }
        prev_cdf = nfec::std_normal_cdf(x);
        prev_q = nfec::q_function(x);
    }
}

TEST(NormalMass, MatchesDifferenceOfCdfs) {
    EXPECT_NEAR(nfec::normal_mass(-1.0, 2.0), oracle::phi(2.0) - oracle::phi(-1.0), 1e-15);
    EXPECT_NEAR(nfec::normal_mass(9.0, 10.0), oracle::q(9.0) - oracle::q(10.0), 1e-25);
    EXPECT_EQ(nfec::normal_mass(1.0, 1.0), 0.0);
}

TEST(Integrate1d, ClosedForms) {
    EXPECT_NEAR(nfec::integrate_1d([](double x) { return x; }, 0.0, 1.0).value, 0.5, 1e-14);
    EXPECT_NEAR(nfec::integrate_1d([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-12);
    const double s = 0.3;
    auto gauss = [&](double x) { return std::exp(-0.5 * std::pow((x - 4 * s) / s, 2)) / (s * std::sqrt(2 * std::numbers::pi)); };
    EXPECT_NEAR(nfec::integrate_1d(gauss, 0.0, 8 * s).value, std::erf(4.0 / std::numbers::sqrt2), 1e-9);
}

TEST(Integrate1d, ErrorEstimateBoundsTrueError) {
    struct Case {
        double (*f)(double);
        double a, b, exact;
    };
    const Case cases[] = {
        {[](double x) { return 3 * x * x * x - x + 2; }, -1.0, 2.0, 3.0 / 4 * 15 - 3.0 / 2 + 6},
        {[](double x) { return std::exp(-x * x); }, -3.0, 3.0, std::sqrt(std::numbers::pi) * std::erf(3.0)},
        {[](double x) { return 1.0 / (1.0 + std::exp(-x)); }, -5.0, 5.0, 5.0},
        {[](double x) { return std::sqrt(x); }, 0.0, 1.0, 2.0 / 3.0},
        {[](double x) { return x < 0.3 ? 1.0 : 0.0; }, 0.0, 1.0, 0.3},
    };
    for (const auto& c : cases) {
        const auto r = nfec::integrate_1d(c.f, c.a, c.b);
        EXPECT_LE(std::abs(r.value - c.exact), std::max(r.error, 1e-14)) << c.exact;
        EXPECT_LE(r.error, std::max(1e-12, 1e-9 * std::abs(r.value)));
    }
}

TEST(Integrate1d, TinyIntervalsConverge) {
    // width ~1e-7: the error must be scaled by the interval, not inflated by it
    const auto r = nfec::integrate_1d([](double t) { return std::exp(-t); }, 0.0, 1e-7);
    EXPECT_NEAR(r.value, -std::expm1(-1e-7), 1e-22);
}

TEST(Integrate1d, NonConvergenceCarriesBestEstimate) {
    nfec::QuadratureSettings s;
    s.max_subdivisions = 4;
    s.rel_tol = 1e-14;
    s.abs_tol = 1e-300;
    try {
        nfec::integrate_1d([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, s);
        FAIL() << "expected quadrature_error";
    } catch (const nfec::quadrature_error& e) {
        EXPECT_TRUE(std::isfinite(e.best_estimate().value));
        EXPECT_GT(e.best_estimate().error, 0.0);
    }
}

TEST(Integrate1d, RejectsBadArguments) {
    EXPECT_THROW(nfec::integrate_1d([](double x) { return x; }, 1.0, 0.0), std::invalid_argument);
    nfec::QuadratureSettings s;
    s.rel_tol = 0.0;
    EXPECT_THROW(nfec::integrate_1d([](double x) { return x; }, 0.0, 1.0, s), std::invalid_argument);
    EXPECT_EQ(nfec::integrate_1d([](double x) { return x; }, 2.0, 2.0).value, 0.0);
}

TEST(IntegratePieces, BreakpointsOutsideRangeIgnored) {
    auto step = [](double x) { return x < 0.25 ? 2.0 : 1.0; };
    const auto r = nfec::integrate_pieces(step, 0.0, 1.0, {-3.0, 0.25, 7.0, 0.25});
    EXPECT_NEAR(r.value, 1.25, 1e-14);
}

TEST(Integrate2d, UnitSquareAndTriangle) {
    auto one = [](double, double) { return 1.0; };
    EXPECT_NEAR(nfec::integrate_2d(one, 0.0, 1.0, [](double) { return std::pair{0.0, 1.0}; }).value, 1.0, 1e-13);
    EXPECT_NEAR(nfec::integrate_2d(one, 0.0, 1.0, [](double d) { return std::pair{0.0, d}; }).value, 0.5, 1e-13);
}

TEST(Integrate2d, SeparableGaussianMass) {
    auto g = [](double x, double y) { return nfec::std_normal_pdf(x) * nfec::std_normal_pdf(y); };
    const double nested = nfec::integrate_2d(g, -1.0, 2.0, [](double) { return std::pair{-0.5, 1.5}; }).value;
    const double separable = nfec::normal_mass(-1.0, 2.0) * nfec::normal_mass(-0.5, 1.5);
    EXPECT_NEAR(nested, separable, 1e-9 * separable);
}

}  // namespace
