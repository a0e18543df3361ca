// Copyright (c) 2026 blursynth contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BLURSYNTH_NOISE_HPP
#define BLURSYNTH_NOISE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "blursynth/image.hpp"
#include "blursynth/rng.hpp"

namespace blursynth {

// Affine sensor noise model: Var(noise) = a * signal + b, where `signal` is
// counts above black level. `a` carries the signal-dependent (shot) part,
// `b` the signal-independent (read) part. The signal-dependent component is
// sampled as a Gaussian with matching variance.
struct NoiseParams {
    double a = 0.0;  // variance counts per signal count
    double b = 0.0;  // variance, counts^2

    bool is_zero() const { return a == 0.0 && b == 0.0; }
    bool operator==(const NoiseParams&) const = default;
};

inline void validate(const NoiseParams& p) {
    if (p.a < 0 || p.b < 0) throw std::invalid_argument("NoiseParams: a and b must be >= 0");
}

// Var(N) = a*signal + b for a single captured frame.
inline double noise_variance(double signal_level, const NoiseParams& p) {
    validate(p);
    if (signal_level < 0) throw std::invalid_argument("noise_variance: negative signal level");
    return p.a * signal_level + p.b;
}

// Variance left in the mean of n independently-noised frames: (a*s + b)/n.
inline double averaged_noise_variance(double signal_level, const NoiseParams& p, int n) {
    if (n < 1) throw std::invalid_argument("averaged_noise_variance: n must be >= 1");
    return noise_variance(signal_level, p) / n;
}

// Variance to add back so residual + injected totals the single-frame level:
// (a*s + b) * (1 - 1/n).
inline double residual_injection_variance(double signal_level, const NoiseParams& p, int n) {
    if (n < 1) throw std::invalid_argument("residual_injection_variance: n must be >= 1");
    return noise_variance(signal_level, p) * (1.0 - 1.0 / n);
}

// Adds zero-mean Gaussian noise with per-pixel variance
// scale * (a * max(value - black_level, 0) + b). Output is not clamped;
// clamping is an explicit later stage. Deterministic for a fixed seed and
// independent of evaluation order (per-pixel counter-based draws).
inline RawFrame inject_noise(const RawFrame& frame, const NoiseParams& p, double scale,
                             std::uint64_t seed) {
    validate(p);
    if (scale < 0.0 || scale > 1.0)
        throw std::invalid_argument("inject_noise: scale must lie in [0, 1]");
    if (scale == 0.0 || p.is_zero()) return frame;
    RawFrame out = frame;
    const double black = frame.black_level;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double signal = std::max(static_cast<double>(out.data[i]) - black, 0.0);
        const double var = scale * (p.a * signal + p.b);
        const double z = rng::standard_normal(seed, i);
        out.data[i] = static_cast<float>(out.data[i] + z * std::sqrt(var));
    }
    return out;
}

// One calibration point: mean signal above black and noise variance there.
struct LevelStats {
    double mean = 0.0;      // counts above black level
    double variance = 0.0;  // counts^2
};

namespace detail {

inline double fit_sse(const std::vector<LevelStats>& levels, double a, double b) {
    double sse = 0.0;
    for (const auto& l : levels) {
        const double r = l.variance - (a * l.mean + b);
        sse += r * r;
    }
    return sse;
}

}  // namespace detail

// Least-squares fit of variance = a*mean + b over calibration levels,
// constrained to a >= 0, b >= 0. The unconstrained optimum is used when
// feasible; otherwise the better of the two boundary fits (a=0 or b=0) is
// taken, which is exact for this two-parameter problem.
inline NoiseParams fit_affine_variance(const std::vector<LevelStats>& levels) {
    if (levels.size() < 3)
        throw std::invalid_argument("fit_affine_variance: need at least 3 illumination levels");
    const std::size_t k = levels.size();
    double mean_x = 0.0, mean_v = 0.0, max_abs_x = 0.0;
    for (const auto& l : levels) {
        mean_x += l.mean;
        mean_v += l.variance;
        max_abs_x = std::max(max_abs_x, std::abs(l.mean));
    }
    mean_x /= static_cast<double>(k);
    mean_v /= static_cast<double>(k);
    double sxx = 0.0, sxv = 0.0, sxx0 = 0.0, sxv0 = 0.0;
    for (const auto& l : levels) {
        sxx += (l.mean - mean_x) * (l.mean - mean_x);
        sxv += (l.mean - mean_x) * (l.variance - mean_v);
        sxx0 += l.mean * l.mean;
        sxv0 += l.mean * l.variance;
    }
    if (sxx <= 1e-12 * std::max(1.0, max_abs_x * max_abs_x))
        throw std::invalid_argument("fit_affine_variance: all levels equal (rank-deficient design)");

    const double a_free = sxv / sxx;
    const double b_free = mean_v - a_free * mean_x;
    if (a_free >= 0.0 && b_free >= 0.0) return {a_free, b_free};

    // Boundary candidates. Variances are nonnegative, so both are feasible.
    const NoiseParams zero_a{0.0, std::max(mean_v, 0.0)};
    const NoiseParams zero_b{sxx0 > 0.0 ? std::max(sxv0 / sxx0, 0.0) : 0.0, 0.0};
    return detail::fit_sse(levels, zero_a.a, zero_a.b) <= detail::fit_sse(levels, zero_b.a, zero_b.b)
               ? zero_a
               : zero_b;
}

struct NoiseFit {
    NoiseParams params;
    std::vector<LevelStats> levels;
    double rms_residual = 0.0;
};

// Reduces one set of same-illumination flat frames to (mean, variance).
// With two or more frames the variance is the per-pixel temporal sample
// variance averaged over pixels; a single frame falls back to spatial
// variance and must carry >= 10^4 pixels of uniform signal.
inline LevelStats flat_level_stats(const std::vector<RawFrame>& frames) {
    if (frames.empty()) throw std::invalid_argument("flat_level_stats: empty frame set");
    for (const auto& f : frames) {
        validate(f);
        if (!f.compatible_with(frames.front()))
            throw std::invalid_argument("flat_level_stats: incompatible frames in one set");
    }
    const std::size_t n_px = frames.front().pixel_count();
    const double black = frames.front().black_level;
    LevelStats stats;
    if (frames.size() >= 2) {
        const double m = static_cast<double>(frames.size());
        double mean_sum = 0.0, var_sum = 0.0;
        for (std::size_t i = 0; i < n_px; ++i) {
            double s = 0.0, s2 = 0.0;
            for (const auto& f : frames) {
                const double v = f.data[i];
                s += v;
                s2 += v * v;
            }
            const double mu = s / m;
            mean_sum += mu;
            var_sum += (s2 - m * mu * mu) / (m - 1.0);
        }
        stats.mean = std::max(mean_sum / static_cast<double>(n_px) - black, 0.0);
        stats.variance = var_sum / static_cast<double>(n_px);
    } else {
        if (n_px < 10000)
            throw std::invalid_argument(
                "flat_level_stats: single-frame level needs >= 10^4 uniform pixels");
        double s = 0.0, s2 = 0.0;
        for (const float v : frames.front().data) {
            s += v;
            s2 += static_cast<double>(v) * v;
        }
        const double n = static_cast<double>(n_px);
        const double mu = s / n;
        stats.mean = std::max(mu - black, 0.0);
        stats.variance = (s2 - n * mu * mu) / (n - 1.0);
    }
    return stats;
}

inline NoiseFit estimate_noise_fit(const std::vector<std::vector<RawFrame>>& flat_sets) {
    if (flat_sets.size() < 3)
        throw std::invalid_argument("estimate_noise_fit: need >= 3 illumination levels");
    NoiseFit fit;
    fit.levels.reserve(flat_sets.size());
    for (const auto& set : flat_sets) fit.levels.push_back(flat_level_stats(set));
    fit.params = fit_affine_variance(fit.levels);
    fit.rms_residual =
        std::sqrt(detail::fit_sse(fit.levels, fit.params.a, fit.params.b) /
                  static_cast<double>(fit.levels.size()));
    return fit;
}

inline NoiseParams estimate_noise_params(const std::vector<std::vector<RawFrame>>& flat_sets) {
    return estimate_noise_fit(flat_sets).params;
}

}  // namespace blursynth

#endif
