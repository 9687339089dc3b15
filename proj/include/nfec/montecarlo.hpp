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
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "capacity.hpp"
#include "ec_engine.hpp"
#include "params.hpp"
#include "ranging.hpp"
#include "regime_markov.hpp"

namespace nfec {

struct McConfig {
    std::uint64_t n_samples = 1'000'000;
    std::uint64_t seed = 42;
    std::uint64_t batches = 100;  // used for batch-means errors
    unsigned threads = 1;       // 0 = hardware concurrency
};

struct McEstimate {
    double value = 0.0;
    double std_err = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
};

inline McEstimate make_estimate(double value, double std_err) {
    return {value, std_err, value - 1.96 * std_err, value + 1.96 * std_err};
}

struct SlotOutcome {
    double d = 0.0;
    double d_hat = 0.0;
    StateId state = StateId::s1;
    SlotRates rates;
};

/// One slot: draw the user, draw the estimate, schedule, and classify the
/// slot into S1..S8 from the actual regimes and rate comparison.
template <class Rng>
SlotOutcome simulate_slot(const SystemParams& p, Rng& rng) {
    SlotOutcome o;
    const double d_f = fraunhofer_distance(p);
    o.d = sample_distance(p.d_min_m, p.d_max_m, rng);
    o.d_hat = sample_estimate(o.d, p.sigma_d_m, rng);
    o.rates = service_rate(o.d, o.d_hat, p);
    o.state = classify_state(o.d < d_f, o.d_hat < d_f, o.rates.scheduled_rate <= o.rates.true_capacity);
    return o;
}

/// Per-batch tallies.
struct BatchTally {
    std::uint64_t n = 0;
    std::array<std::uint64_t, state_count> state_counts{};
    std::uint64_t false_far = 0;   // true NF and decided FF
    std::uint64_t false_near = 0;  // true FF and decided NF
    std::uint64_t clamped = 0;     // d_hat < d_min
    double service_sum = 0.0;
    std::vector<double> deficit_sum;                     // per theta: sum of 1 - e^{-theta s}
    std::vector<StateVector> state_deficit_sum;          // per theta and state
    std::vector<StateVector> state_deficit_sq_sum;
};

struct SlotStatistics {
    std::vector<double> thetas;
    std::vector<BatchTally> batches;  // in batch order
    BatchTally total;
};

namespace detail {

inline void check_mc(const McConfig& mc) {
    if (mc.n_samples < 1) throw config_error("samples", "must be >= 1");
    if (mc.batches < 1 || mc.n_samples % mc.batches != 0)
        throw config_error("batches", "must be >= 1 and divide the sample count");
}

inline std::mt19937_64 batch_rng(std::uint64_t seed, std::uint64_t batch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
    return std::mt19937_64(seq);
}

// Runs fn(batch_index) for every batch; results land in batch order so the
// merge is independent of scheduling.
template <class Result, class Fn>
std::vector<Result> run_batches(std::uint64_t n_batches, unsigned threads, Fn&& fn) {
    std::vector<Result> out(n_batches);
    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_batches));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < n_batches; ++b) out[b] = fn(b);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::uint64_t b = next++; b < n_batches; b = next++) {
                try {
                    out[b] = fn(b);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline void accumulate(BatchTally& into, const BatchTally& b) {
    into.n += b.n;
    for (std::size_t i = 0; i < state_count; ++i) into.state_counts[i] += b.state_counts[i];
    into.false_far += b.false_far;
    into.false_near += b.false_near;
    into.clamped += b.clamped;
    into.service_sum += b.service_sum;
    if (into.deficit_sum.empty()) {
        into.deficit_sum.assign(b.deficit_sum.size(), 0.0);
        into.state_deficit_sum.assign(b.state_deficit_sum.size(), StateVector{});
        into.state_deficit_sq_sum.assign(b.state_deficit_sq_sum.size(), StateVector{});
    }
    for (std::size_t k = 0; k < b.deficit_sum.size(); ++k) {
        into.deficit_sum[k] += b.deficit_sum[k];
        for (std::size_t i = 0; i < state_count; ++i) {
            into.state_deficit_sum[k][i] += b.state_deficit_sum[k][i];
            into.state_deficit_sq_sum[k][i] += b.state_deficit_sq_sum[k][i];
        }
    }
}

// Standard error of the overall mean from equal-size batch means.
template <class BatchValue>
double batch_means_se(const std::vector<BatchTally>& batches, BatchValue&& value) {
    const double nb = static_cast<double>(batches.size());
    if (batches.size() < 2) return 0.0;
    double mean = 0.0;
    for (const auto& b : batches) mean += value(b);
    mean /= nb;
    double ss = 0.0;
    for (const auto& b : batches) ss += (value(b) - mean) * (value(b) - mean);
    return std::sqrt(ss / (nb - 1.0) / nb);
}

}  // namespace detail

/// Simulates mc.n_samples i.i.d. slots and tallies everything the
/// estimators below need, for each theta in `thetas`.
inline SlotStatistics simulate_slots(const SystemParams& p, const std::vector<double>& thetas, const McConfig& mc) {
    detail::check_mc(mc);
    const std::uint64_t per_batch = mc.n_samples / mc.batches;
    const double d_f = fraunhofer_distance(p);
    SlotStatistics stats;
    stats.thetas = thetas;
    stats.batches = detail::run_batches<BatchTally>(mc.batches, mc.threads, [&](std::uint64_t b) {
        auto rng = detail::batch_rng(mc.seed, b);
        BatchTally t;
        t.deficit_sum.assign(thetas.size(), 0.0);
        t.state_deficit_sum.assign(thetas.size(), StateVector{});
        t.state_deficit_sq_sum.assign(thetas.size(), StateVector{});
        for (std::uint64_t k = 0; k < per_batch; ++k) {
            const SlotOutcome o = simulate_slot(p, rng);
            const std::size_t si = index_of(o.state);
            ++t.state_counts[si];
            if (o.d < d_f && o.d_hat >= d_f) ++t.false_far;
            if (o.d >= d_f && o.d_hat < d_f) ++t.false_near;
            if (o.d_hat < p.d_min_m) ++t.clamped;
            t.service_sum += o.rates.service;
            for (std::size_t j = 0; j < thetas.size(); ++j) {
                const double def = -std::expm1(-thetas[j] * o.rates.service);
                t.deficit_sum[j] += def;
                t.state_deficit_sum[j][si] += def;
                t.state_deficit_sq_sum[j][si] += def * def;
            }
        }
        t.n = per_batch;
        return t;
    });
    for (const auto& b : stats.batches) detail::accumulate(stats.total, b);
    return stats;
}

/// Empirical EC -(1/theta) ln mean(e^{-theta s}), batch-means error through
/// the delta method.
inline McEstimate ec_estimate(const SlotStatistics& st, std::size_t theta_index) {
    const double theta = st.thetas.at(theta_index);
    const double n = static_cast<double>(st.total.n);
    const double deficit = st.total.deficit_sum[theta_index] / n;
    const double se_def = detail::batch_means_se(st.batches, [&](const BatchTally& b) {
        return b.deficit_sum[theta_index] / static_cast<double>(b.n);
    });
    return make_estimate(-std::log1p(-deficit) / theta, se_def / (theta * (1.0 - deficit)));
}

inline McEstimate mean_service_estimate(const SlotStatistics& st) {
    const double n = static_cast<double>(st.total.n);
    const double se = detail::batch_means_se(st.batches, [](const BatchTally& b) {
        return b.service_sum / static_cast<double>(b.n);
    });
    return make_estimate(st.total.service_sum / n, se);
}

inline McEstimate binomial_estimate(std::uint64_t count, std::uint64_t n) {
    const double p = static_cast<double>(count) / static_cast<double>(n);
    return make_estimate(p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)));
}

inline std::array<McEstimate, state_count> state_prob_estimates(const SlotStatistics& st) {
    std::array<McEstimate, state_count> out;
    for (std::size_t i = 0; i < state_count; ++i) out[i] = binomial_estimate(st.total.state_counts[i], st.total.n);
    return out;
}

inline std::pair<McEstimate, McEstimate> error_prob_estimates(const SlotStatistics& st) {
    return {binomial_estimate(st.total.false_far, st.total.n), binomial_estimate(st.total.false_near, st.total.n)};
}

/// Mean of e^{-theta s} over the slots that landed in `state`.
inline McEstimate state_mgf_estimate(const SlotStatistics& st, std::size_t theta_index, StateId state) {
    const std::size_t i = index_of(state);
    const double count = static_cast<double>(st.total.state_counts[i]);
    if (count < 1.0) return make_estimate(1.0, 0.0);
    const double mean = st.total.state_deficit_sum[theta_index][i] / count;
    const double var = std::max(0.0, st.total.state_deficit_sq_sum[theta_index][i] / count - mean * mean);
    return make_estimate(1.0 - mean, std::sqrt(var / std::max(1.0, count - 1.0)));
}

inline McEstimate estimate_ec(const SystemParams& p, double theta, const McConfig& mc) {
    return ec_estimate(simulate_slots(p, {theta}, mc), 0);
}

inline std::array<McEstimate, state_count> estimate_state_probs(const SystemParams& p, const McConfig& mc) {
    return state_prob_estimates(simulate_slots(p, {}, mc));
}

inline std::pair<McEstimate, McEstimate> estimate_error_probs(const SystemParams& p, const McConfig& mc) {
    return error_prob_estimates(simulate_slots(p, {}, mc));
}

inline McEstimate estimate_mean_service(const SystemParams& p, const McConfig& mc) {
    return mean_service_estimate(simulate_slots(p, {}, mc));
}

struct TailReport {
    double arrival_rate = 0.0;
    double theta = 0.0;
    std::uint64_t horizon = 0;
    bool stable = true;
    bool identically_zero = false;
    double mean_service = 0.0;
    double mean_queue = 0.0;
    double max_queue = 0.0;
    double final_queue = 0.0;
    double growth_per_slot = 0.0;  // final_queue / horizon
    double fitted_slope = std::numeric_limits<double>::quiet_NaN();  // d ln Pr(Q > q) / dq
    std::vector<double> fit_q;
    std::vector<double> fit_log_tail;
    double contract_slope = 0.0;  // -0.9 theta
    bool contract_satisfied = false;
};

/// Constant-arrival queue Q_{k+1} = max(Q_k + a - s_k, 0) driven by
/// simulated slots. The log tail of the queue length is fitted by least
/// squares between tail levels 1e-1 and max(1e-4, 100 / n).
template <class Rng>
TailReport queue_tail(const SystemParams& p, double arrival_rate, double theta, std::uint64_t horizon, Rng& rng) {
    if (horizon < 1) throw std::invalid_argument("queue_tail: horizon >= 1");
    if (!(arrival_rate >= 0.0)) throw std::invalid_argument("queue_tail: arrival_rate >= 0");
    TailReport rep;
    rep.arrival_rate = arrival_rate;
    rep.theta = theta;
    rep.horizon = horizon;
    rep.contract_slope = -0.9 * theta;
    const std::uint64_t burn_in = horizon / 100;
    std::vector<double> samples;
    samples.reserve(horizon - burn_in);
    double q = 0.0;
    double service_sum = 0.0;
    for (std::uint64_t k = 0; k < horizon; ++k) {
        const double s = simulate_slot(p, rng).rates.service;
        service_sum += s;
        q = std::max(q + arrival_rate - s, 0.0);
        if (k >= burn_in) samples.push_back(q);
    }
    rep.mean_service = service_sum / static_cast<double>(horizon);
    rep.final_queue = q;
    rep.growth_per_slot = q / static_cast<double>(horizon);
    rep.max_queue = samples.empty() ? 0.0 : *std::max_element(samples.begin(), samples.end());
    double sum = 0.0;
    for (double x : samples) sum += x;
    rep.mean_queue = samples.empty() ? 0.0 : sum / static_cast<double>(samples.size());
    rep.stable = arrival_rate < rep.mean_service;
    if (!rep.stable) return rep;
    if (rep.max_queue == 0.0) {
        rep.identically_zero = true;
        rep.fitted_slope = -std::numeric_limits<double>::infinity();
        rep.contract_satisfied = true;
        return rep;
    }
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    auto tail = [&](double level) {
        return static_cast<double>(samples.end() - std::upper_bound(samples.begin(), samples.end(), level)) / n;
    };
    auto level_at = [&](double prob) {
        const auto idx = static_cast<std::size_t>(std::clamp(n - std::ceil(prob * n), 0.0, n - 1.0));
        return samples[idx];
    };
    const double p_start = std::min(0.1, tail(0.0));
    const double p_end = std::max(1e-4, 100.0 / n);
    if (!(p_start > p_end)) return rep;
    const double q_a = level_at(p_start);
    const double q_b = level_at(p_end);
    if (!(q_b > q_a)) return rep;
    constexpr int points = 25;
    for (int i = 0; i < points; ++i) {
        const double level = q_a + (q_b - q_a) * i / (points - 1);
        const double t = tail(level);
        if (t <= 0.0) continue;
        rep.fit_q.push_back(level);
        rep.fit_log_tail.push_back(std::log(t));
    }
    if (rep.fit_q.size() < 2) return rep;
    const double m = static_cast<double>(rep.fit_q.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < rep.fit_q.size(); ++i) {
        sx += rep.fit_q[i];
        sy += rep.fit_log_tail[i];
        sxx += rep.fit_q[i] * rep.fit_q[i];
        sxy += rep.fit_q[i] * rep.fit_log_tail[i];
    }
    rep.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.contract_satisfied = rep.fitted_slope <= rep.contract_slope;
    return rep;
}

/// Queue fed at arrival_fraction * EC(theta) (analytical, validated modes).
template <class Rng>
TailReport queue_delay_validation(const SystemParams& p, double theta, double arrival_fraction,
                                  std::uint64_t horizon, Rng& rng) {
    if (!(arrival_fraction > 0.0 && arrival_fraction < 1.0))
        throw config_error("queue_arrival_fraction", "must lie in (0, 1)");
    if (horizon < 100'000) throw config_error("queue_horizon", "must be >= 100000");
    SystemParams consistent = p;
    consistent.prob_mode = ProbMode::geometric_prior;
    consistent.mgf_mode = MgfMode::normalized;
    const double ec = effective_capacity(theta, consistent).ec_bits_per_use;
    return queue_tail(p, arrival_fraction * ec, theta, horizon, rng);
}

}  // namespace nfec
