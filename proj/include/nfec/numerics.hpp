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
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nfec {

inline double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Upper tail 1 - Phi(x), evaluated through erfc so large x keeps full
/// relative precision.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Phi(upper) - Phi(lower) without cancellation in either tail.
inline double normal_mass(double lower, double upper) {
    if (upper <= lower) return 0.0;
    if (lower >= 0.0) return q_function(lower) - q_function(upper);
    if (upper <= 0.0) return std_normal_cdf(upper) - std_normal_cdf(lower);
    return 0.5 * (std::erf(upper / std::numbers::sqrt2) - std::erf(lower / std::numbers::sqrt2));
}

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    unsigned max_subdivisions = 1u << 15;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Thrown when adaptive subdivision is exhausted before the tolerance is
/// met. Carries the best available estimate.
class quadrature_error : public std::runtime_error {
public:
    quadrature_error(QuadratureResult best, const std::string& what)
        : std::runtime_error(what), best_(best) {}
    QuadratureResult best_estimate() const noexcept { return best_; }

private:
    QuadratureResult best_;
};

namespace detail {

inline void check_settings(const QuadratureSettings& s) {
    if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0) || s.max_subdivisions < 1)
        throw std::invalid_argument("QuadratureSettings: tolerances must be > 0, max_subdivisions >= 1");
}

struct Segment {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// One 15-point Kronrod rule with its embedded 7-point Gauss rule; the
// error estimate is |K15 - G7| on [a, b], floored at the rounding level.
template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using gauss = boost::math::quadrature::gauss<double, 7>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double f0 = f(c);
    double k = wk[0] * f0;
    double g = wg[0] * f0;
    double l1 = wk[0] * std::abs(f0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(c + h * x[i]);
        const double fm = f(c - h * x[i]);
        k += wk[i] * (fp + fm);
        l1 += wk[i] * (std::abs(fp) + std::abs(fm));
        if (i % 2 == 0) g += wg[i / 2] * (fp + fm);
    }
    const double rounding = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(h) * l1;
    return {a, b, h * k, std::max(std::abs(h * (k - g)), rounding)};
}

}  // namespace detail

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature of f over [a, b]:
/// the segment with the largest error is bisected until the summed error
/// meets max(abs_tol, rel_tol * |I|).
template <class F>
QuadratureResult integrate_1d(F&& f, double a, double b, const QuadratureSettings& settings = {}) {
    detail::check_settings(settings);
    if (!(a <= b)) throw std::invalid_argument("integrate_1d: requires a <= b");
    if (a == b) return {};
    std::vector<detail::Segment> heap{detail::gauss_kronrod_15(f, a, b)};
    std::vector<detail::Segment> settled;  // too narrow to bisect further
    auto totals = [&] {
        QuadratureResult r;
        for (const auto& s : heap) r.value += s.value, r.error += s.error;
        for (const auto& s : settled) r.value += s.value, r.error += s.error;
        return r;
    };
    QuadratureResult result = totals();
    if (!std::isfinite(result.value)) throw quadrature_error(result, "integrate_1d: non-finite integrand");
    while (result.error > std::max(settings.abs_tol, settings.rel_tol * std::abs(result.value))) {
        if (heap.empty() || heap.size() + settled.size() >= settings.max_subdivisions)
            throw quadrature_error(result, "integrate_1d: no convergence within max_subdivisions");
        std::pop_heap(heap.begin(), heap.end());
        const detail::Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            settled.push_back(worst);
            continue;
        }
        for (const auto& half : {detail::gauss_kronrod_15(f, worst.a, mid), detail::gauss_kronrod_15(f, mid, worst.b)}) {
            heap.push_back(half);
            std::push_heap(heap.begin(), heap.end());
        }
        result.value += heap[heap.size() - 1].value + heap[heap.size() - 2].value - worst.value;
        result.error += heap[heap.size() - 1].error + heap[heap.size() - 2].error - worst.error;
        if (!std::isfinite(result.value)) throw quadrature_error(result, "integrate_1d: non-finite integrand");
        if (result.error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(result.value))) result = totals();
    }
    return totals();
}

/// Integrates over [a, b] split at the given breakpoints (discontinuities,
/// kinks). Breakpoints outside [a, b] are ignored; order does not matter.
template <class F>
QuadratureResult integrate_pieces(F&& f, double a, double b, std::vector<double> breakpoints,
                                  const QuadratureSettings& settings = {}) {
    if (!(a <= b)) throw std::invalid_argument("integrate_pieces: requires a <= b");
    std::vector<double> knots{a, b};
    for (double k : breakpoints)
        if (k > a && k < b) knots.push_back(k);
    std::sort(knots.begin(), knots.end());
    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (knots[i + 1] <= knots[i]) continue;
        const auto piece = integrate_1d(f, knots[i], knots[i + 1], settings);
        total.value += piece.value;
        total.error += piece.error;
    }
    return total;
}

/// Nested adaptive quadrature of f(x, y) for x in [a, b] and
/// y in inner(x) = [lo(x), hi(x)].
template <class F, class InnerBounds>
QuadratureResult integrate_2d(F&& f, double a, double b, InnerBounds&& inner,
                              const QuadratureSettings& settings = {}) {
    double worst_inner = 0.0;
    auto outer = [&](double x) {
        const std::pair<double, double> bounds = inner(x);
        if (!(bounds.first <= bounds.second))
            throw std::invalid_argument("integrate_2d: inner bounds out of order");
        const auto r = integrate_1d([&](double y) { return f(x, y); }, bounds.first, bounds.second, settings);
        worst_inner = std::max(worst_inner, r.error);
        return r.value;
    };
    auto result = integrate_1d(outer, a, b, settings);
    result.error += (b - a) * worst_inner;
    return result;
}

}  // namespace nfec
