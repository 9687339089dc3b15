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
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <fftw3.h>

#include "numerics.hpp"
#include "params.hpp"

namespace nfec {

enum class PulseShape { rect_spectrum, root_raised_cosine, gaussian_pulse };

/// Unit-energy ranging pulse. For the Gaussian pulse, bandwidth_hz is the
/// two-sided half-power width of |X(f)|^2; for the root-raised-cosine it is
/// the occupied band (1 + rolloff) / T.
struct WaveformSpec {
    PulseShape shape = PulseShape::rect_spectrum;
    double bandwidth_hz = 100e6;
    double rolloff = 0.25;
};

struct RangingLink {
    double gamma = 1.0;       // |beta|^2 / sigma_n^2
    double beta2_hz2 = 1.0;   // integral of f^2 |X(f)|^2
};

inline void validate(const WaveformSpec& w) {
    if (!(w.bandwidth_hz > 0.0) || !std::isfinite(w.bandwidth_hz))
        throw config_error("bandwidth_hz", "must be finite and > 0");
    if (w.shape == PulseShape::root_raised_cosine && !(w.rolloff > 0.0 && w.rolloff <= 1.0))
        throw config_error("rolloff", "must lie in (0, 1]");
}

inline void validate(const RangingLink& l) {
    if (!(l.gamma > 0.0)) throw config_error("gamma", "must be > 0");
    if (!(l.beta2_hz2 > 0.0)) throw config_error("beta2_hz2", "must be > 0");
}

inline double gaussian_spectrum_sigma(const WaveformSpec& w) {
    return w.bandwidth_hz / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

/// Energy spectral density |X(f)|^2, normalized to unit total energy.
/// Discontinuities take their midpoint value.
inline double energy_spectrum(const WaveformSpec& w, double f) {
    const double af = std::abs(f);
    const double b = w.bandwidth_hz;
    switch (w.shape) {
        case PulseShape::rect_spectrum:
            if (af < b / 2.0) return 1.0 / b;
            return af == b / 2.0 ? 0.5 / b : 0.0;
        case PulseShape::root_raised_cosine: {
            const double symbol_period = (1.0 + w.rolloff) / b;
            const double flat = (1.0 - w.rolloff) / (2.0 * symbol_period);
            const double edge = (1.0 + w.rolloff) / (2.0 * symbol_period);
            if (af <= flat) return symbol_period;
            if (af > edge) return 0.0;
            return 0.5 * symbol_period *
                   (1.0 + std::cos(std::numbers::pi * symbol_period / w.rolloff * (af - flat)));
        }
        case PulseShape::gaussian_pulse: {
            const double s = gaussian_spectrum_sigma(w);
            return std::exp(-0.5 * f * f / (s * s)) / (std::sqrt(2.0 * std::numbers::pi) * s);
        }
    }
    return 0.0;
}

/// Mean-square bandwidth beta_2 in Hz^2.
inline double mean_square_bandwidth(const WaveformSpec& w) {
    validate(w);
    const double b = w.bandwidth_hz;
    switch (w.shape) {
        case PulseShape::rect_spectrum: return b * b / 12.0;
        case PulseShape::gaussian_pulse: {
            const double s = gaussian_spectrum_sigma(w);
            return s * s;
        }
        case PulseShape::root_raised_cosine: {
            const double flat = (1.0 - w.rolloff) * b / (2.0 * (1.0 + w.rolloff));
            auto f2 = [&](double f) { return f * f * energy_spectrum(w, f); };
            QuadratureSettings q;
            q.rel_tol = 1e-12;
            q.abs_tol = 1e-300;
            return 2.0 * integrate_pieces(f2, 0.0, b / 2.0, {flat}, q).value;
        }
    }
    return 0.0;
}

inline RangingLink make_link(const WaveformSpec& w, double gamma) { return {gamma, mean_square_bandwidth(w)}; }

/// Delay variance bound 1 / (8 pi^2 gamma beta_2), in s^2.
inline double crlb_toa_variance(const RangingLink& l) {
    validate(l);
    return 1.0 / (8.0 * std::numbers::pi * std::numbers::pi * l.gamma * l.beta2_hz2);
}

/// Two-way range bound (c / 2)^2 times the delay bound, in m^2.
inline double crlb_distance_variance(const RangingLink& l) {
    const double half_c = speed_of_light / 2.0;
    return half_c * half_c * crlb_toa_variance(l);
}

/// Narrowband continuous-aperture bound: the delay bound divided by Lt * Lr.
/// With SI lengths the divisor carries units of m^2; pass `wavelength_m` to
/// use apertures measured in wavelengths instead.
inline double crlb_distance_variance_aperture(const RangingLink& l, double aperture_tx, double aperture_rx,
                                              std::optional<double> wavelength_m = std::nullopt) {
    if (!(aperture_tx > 0.0) || !(aperture_rx > 0.0))
        throw config_error("aperture_tx_m", "apertures must be > 0");
    double gain = aperture_tx * aperture_rx;
    if (wavelength_m) gain /= (*wavelength_m) * (*wavelength_m);
    return crlb_distance_variance(l) / gain;
}

struct ApertureSpec {
    double aperture_tx = 1.0;
    double aperture_rx = 1.0;
    std::optional<double> wavelength_m;
};

/// Ranging standard deviation that attains the bound; optimistic by
/// construction, usable directly as SystemParams::sigma_d_m.
inline double sigma_d_from_link(const RangingLink& l, std::optional<ApertureSpec> apertures = std::nullopt) {
    if (!apertures) return std::sqrt(crlb_distance_variance(l));
    return std::sqrt(crlb_distance_variance_aperture(l, apertures->aperture_tx, apertures->aperture_rx,
                                                     apertures->wavelength_m));
}

/// gamma * beta_2 needed for a given sigma_d (point-aperture bound).
inline double implied_gamma_beta2(double sigma_d_m) {
    return speed_of_light * speed_of_light /
           (32.0 * std::numbers::pi * std::numbers::pi * sigma_d_m * sigma_d_m);
}

namespace detail {

class FftPlan {
public:
    FftPlan(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out, int sign)
        : plan_(fftw_plan_dft_1d(static_cast<int>(in.size()), reinterpret_cast<fftw_complex*>(in.data()),
                                 reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE)) {
        if (!plan_) throw std::runtime_error("fftw plan creation failed");
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan() { fftw_destroy_plan(plan_); }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace detail

namespace detail {

inline std::vector<double> dft_frequencies(std::size_t n, double sample_rate_hz) {
    std::vector<double> f(n);
    const double df = sample_rate_hz / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k)
        f[k] = (k < n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n)) * df;
    return f;
}

}  // namespace detail

/// DFT of the sampled unit-energy pulse on an n-point grid at the given
/// rate, scaled so that sum |x[t]|^2 / fs = 1.
inline std::vector<std::complex<double>> sampled_spectrum(const WaveformSpec& w, double sample_rate_hz,
                                                          std::size_t n) {
    validate(w);
    const auto freq = detail::dft_frequencies(n, sample_rate_hz);
    std::vector<std::complex<double>> x(n);
    double energy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = std::sqrt(energy_spectrum(w, freq[k]));
        energy += std::norm(x[k]);
    }
    if (!(energy > 0.0)) throw config_error("sample_rate_hz", "DFT grid misses the pulse band");
    // Parseval on the DFT: sum |x[t]|^2 = sum |X[k]|^2 / n
    const double scale = std::sqrt(sample_rate_hz * static_cast<double>(n) / energy);
    for (auto& v : x) v *= scale;
    return x;
}

/// Time-domain energy sum |x[t]|^2 / fs of the sampled pulse.
inline double sampled_pulse_energy(const WaveformSpec& w, double sample_rate_hz, std::size_t n) {
    auto spec = sampled_spectrum(w, sample_rate_hz, n);
    std::vector<std::complex<double>> x(n);
    {
        detail::FftPlan inv(spec, x, FFTW_BACKWARD);
        inv.execute();
    }
    double e = 0.0;
    for (const auto& v : x) e += std::norm(v / static_cast<double>(n));
    return e / sample_rate_hz;
}

struct ToaStudy {
    double mean_m = 0.0;
    double bias_m = 0.0;
    double variance_m2 = 0.0;
    std::size_t fft_size = 0;
    std::vector<double> estimates;
};

/// Monte Carlo of the correlation ToA ranging estimator: band-limited pulse
/// delayed by the round trip 2d/c through a spectral phase ramp, complex
/// AWGN at SNR gamma (infinite gamma gives the noiseless echo), circular
/// cross-correlation, argmax of |r| refined by 3-point parabolic
/// interpolation, then d_hat = c tau_hat / 2.
///
/// FFTW planning is not thread-safe; call from one thread at a time.
template <class Rng>
ToaStudy simulate_toa_estimation(const WaveformSpec& w, double d, double gamma, double sample_rate_hz,
                                 std::size_t n_trials, Rng& rng) {
    validate(w);
    if (!(sample_rate_hz >= 4.0 * w.bandwidth_hz))
        throw config_error("sample_rate_hz", "must be at least 4x bandwidth_hz");
    if (n_trials < 100) throw config_error("trials", "must be >= 100");
    if (!(d > 0.0)) throw config_error("distance_m", "must be > 0");
    if (!(gamma > 0.0)) throw config_error("gamma", "must be > 0");

    const double tau = 2.0 * d / speed_of_light;
    std::size_t n = 1024;
    while (static_cast<double>(n) < 4.0 * tau * sample_rate_hz) n *= 2;
    const double ts = 1.0 / sample_rate_hz;
    const auto freq = detail::dft_frequencies(n, sample_rate_hz);
    const auto tmpl = sampled_spectrum(w, sample_rate_hz, n);

    std::vector<std::complex<double>> echo_spec(n), echo(n), work(n), corr(n);
    for (std::size_t k = 0; k < n; ++k)
        echo_spec[k] = tmpl[k] * std::polar(1.0, -2.0 * std::numbers::pi * freq[k] * tau);
    {
        detail::FftPlan inv(echo_spec, echo, FFTW_BACKWARD);
        inv.execute();
    }
    for (auto& x : echo) x /= static_cast<double>(n);

    const bool noiseless = std::isinf(gamma);
    const double noise_sd = noiseless ? 0.0 : std::sqrt(sample_rate_hz / gamma / 2.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<std::complex<double>> rx(n);
    detail::FftPlan fwd(rx, work, FFTW_FORWARD);
    detail::FftPlan inv(work, corr, FFTW_BACKWARD);

    ToaStudy study;
    study.fft_size = n;
    study.estimates.reserve(n_trials);
    for (std::size_t trial = 0; trial < n_trials; ++trial) {
        for (std::size_t i = 0; i < n; ++i) {
            rx[i] = echo[i];
            if (!noiseless) rx[i] += std::complex<double>(noise_sd * normal(rng), noise_sd * normal(rng));
        }
        fwd.execute();
        for (std::size_t k = 0; k < n; ++k) work[k] *= std::conj(tmpl[k]);
        inv.execute();
        std::size_t peak = 0;
        double best_sq = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::norm(corr[i]);
            if (a > best_sq) {
                best_sq = a;
                peak = i;
            }
        }
        const double best = std::abs(corr[peak]);
        const double am = std::abs(corr[(peak + n - 1) % n]);
        const double ap = std::abs(corr[(peak + 1) % n]);
        const double curvature = am - 2.0 * best + ap;
        const double offset = curvature < 0.0 ? 0.5 * (am - ap) / curvature : 0.0;
        double lag = static_cast<double>(peak) + offset;
        if (lag >= static_cast<double>(n) / 2.0) lag -= static_cast<double>(n);
        study.estimates.push_back(speed_of_light * lag * ts / 2.0);
    }
    double sum = 0.0;
    for (double e : study.estimates) sum += e;
    study.mean_m = sum / static_cast<double>(n_trials);
    double ss = 0.0;
    for (double e : study.estimates) ss += (e - study.mean_m) * (e - study.mean_m);
    study.variance_m2 = ss / static_cast<double>(n_trials - 1);
    study.bias_m = study.mean_m - d;
    return study;
}

}  // namespace nfec
