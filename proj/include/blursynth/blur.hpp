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

#ifndef BLURSYNTH_BLUR_HPP
#define BLURSYNTH_BLUR_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "blursynth/image.hpp"
#include "blursynth/isp.hpp"
#include "blursynth/noise.hpp"
#include "blursynth/parallel.hpp"
#include "blursynth/rng.hpp"

namespace blursynth {

// Discretizes the physical blur-accumulation integral: a blurry frame is
// the mean of `exposure` consecutive sharp frames, one window every
// `period` frames, with `period - exposure` frames of shutter dead time in
// between. Both are counted in sharp-frame units.

struct BlurVideoParams {
    int period = 1;    // T: sharp frames per synthesized frame
    int exposure = 1;  // tau: sharp frames the shutter stays open

    double duty_cycle() const { return static_cast<double>(exposure) / period; }
    bool operator==(const BlurVideoParams&) const = default;
};

inline void validate(const BlurVideoParams& p) {
    if (p.exposure < 1 || p.exposure > p.period)
        throw std::invalid_argument("BlurVideoParams: requires 1 <= exposure <= period");
}

// The signal domain in which frames are averaged.
enum class FormationSpace { Rgb, RgbCrf, Raw, RawNoise };

inline const char* to_string(FormationSpace s) {
    switch (s) {
        case FormationSpace::Rgb: return "rgb";
        case FormationSpace::RgbCrf: return "rgb-crf";
        case FormationSpace::Raw: return "raw";
        case FormationSpace::RawNoise: return "raw-noise";
    }
    return "?";
}

inline std::optional<FormationSpace> formation_space_from_string(std::string_view s) {
    if (s == "rgb") return FormationSpace::Rgb;
    if (s == "rgb-crf") return FormationSpace::RgbCrf;
    if (s == "raw") return FormationSpace::Raw;
    if (s == "raw-noise") return FormationSpace::RawNoise;
    return std::nullopt;
}

struct ExposureWindow {
    int start = 0;
    int length = 0;

    int center() const { return start + length / 2; }
    bool operator==(const ExposureWindow&) const = default;
};

// Complete exposure windows over n sharp frames: starts at offset, offset+T,
// offset+2T, ...; trailing windows that do not fit are dropped, never
// padded. Throws when no window fits.
inline std::vector<ExposureWindow> exposure_windows(const BlurVideoParams& params,
                                                    int n_sharp_frames, int offset = 0) {
    validate(params);
    if (offset < 0) throw std::invalid_argument("exposure_windows: offset must be >= 0");
    std::vector<ExposureWindow> windows;
    for (int start = offset; start + params.exposure <= n_sharp_frames; start += params.period)
        windows.push_back({start, params.exposure});
    if (windows.empty())
        throw std::invalid_argument("exposure_windows: no complete window fits in " +
                                    std::to_string(n_sharp_frames) + " frames");
    return windows;
}

struct VideoSummary {
    double blurry_fps = 0.0;
    double exposure_ms = 0.0;
    double duty_cycle = 0.0;
};

inline VideoSummary video_params_summary(const BlurVideoParams& params, double sharp_fps) {
    validate(params);
    if (!(sharp_fps > 0)) throw std::invalid_argument("video_params_summary: sharp_fps must be > 0");
    return {sharp_fps / params.period, 1000.0 * params.exposure / sharp_fps,
            params.duty_cycle()};
}

// Pixelwise arithmetic mean in the real-valued linear RAW domain.
inline RawFrame average_raw(std::span<const RawFrame> frames) {
    if (frames.empty()) throw std::invalid_argument("average_raw: empty window");
    for (const auto& f : frames)
        if (!f.compatible_with(frames.front()))
            throw std::invalid_argument("average_raw: incompatible frames in window");
    RawFrame out = frames.front();
    if (frames.size() == 1) return out;
    const double inv_n = 1.0 / static_cast<double>(frames.size());
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        double sum = 0.0;
        for (const auto& f : frames) sum += f.data[i];
        out.data[i] = static_cast<float>(sum * inv_n);
    }
    return out;
}

// RAW-space blur: average the window, then (when noise params are given)
// inject the variance lost to averaging so the total matches a single real
// long exposure. `full_variance` instead re-injects the whole single-frame
// variance on top of the residual.
inline RawFrame synthesize_blur_raw(std::span<const RawFrame> window,
                                    const std::optional<NoiseParams>& noise, std::uint64_t seed,
                                    bool full_variance = false) {
    RawFrame blurry = average_raw(window);
    if (noise && !noise->is_zero()) {
        const int n = static_cast<int>(window.size());
        const double scale = full_variance ? 1.0 : 1.0 - 1.0 / static_cast<double>(n);
        if (scale > 0.0) blurry = inject_noise(blurry, *noise, scale, seed);
    }
    return blurry;
}

namespace detail {

inline void check_rgb_window(std::span<const RgbImage> window) {
    if (window.empty()) throw std::invalid_argument("blur window is empty");
    for (const auto& img : window) {
        validate(img);
        if (img.domain != RgbDomain::Display)
            throw std::invalid_argument("blur window must be display-referred");
        if (img.width != window.front().width || img.height != window.front().height)
            throw std::invalid_argument("blur window has mismatched dimensions");
    }
}

}  // namespace detail

// Display-space blur: plain mean of post-ISP frames. Reproduces the naive
// formation that ignores the CRF's nonlinearity.
inline RgbImage synthesize_blur_rgb(std::span<const RgbImage> window) {
    detail::check_rgb_window(window);
    RgbImage out = window.front();
    if (window.size() == 1) return out;
    const double inv_n = 1.0 / static_cast<double>(window.size());
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        double sum = 0.0;
        for (const auto& img : window) sum += img.data[i];
        out.data[i] = static_cast<float>(sum * inv_n);
    }
    return out;
}

// Linearized blur: g(mean(g^-1(frames))). Collapses to synthesize_blur_rgb
// when the CRF is the identity; equals the RAW route when the supplied
// model matches the ISP's true CRF and no clamp is hit.
inline RgbImage synthesize_blur_crf(std::span<const RgbImage> window, const CrfModel& crf) {
    detail::check_rgb_window(window);
    validate(crf);
    RgbImage out = window.front();
    const double inv_n = 1.0 / static_cast<double>(window.size());
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        double sum = 0.0;
        for (const auto& img : window) sum += crf.invert(img.data[i]);
        out.data[i] = static_cast<float>(crf.apply(sum * inv_n));
    }
    return out;
}

// One training pair: the blurry frame and the sharp center frame of its
// window, both rendered through the same ISP to 8-bit.
struct BlurPair {
    RgbImage blurry;
    RgbImage sharp;
    ExposureWindow window;
    BlurVideoParams params;
    FormationSpace space = FormationSpace::Raw;
};

enum class NoiseInjection { Residual, Full };

inline const char* to_string(NoiseInjection m) {
    return m == NoiseInjection::Residual ? "residual" : "full";
}

struct SynthesisOptions {
    // CRF supplied to the linearized route; defaults to the ISP's own
    // (i.e. a perfect estimate). Only used for the rgb-crf space.
    std::optional<CrfModel> linearization_crf;
    NoiseInjection injection = NoiseInjection::Residual;
    int window_offset = 0;  // shifts every window start; phase control
    int threads = 1;
};

// Whole-dataset synthesis. RAW spaces average mosaiced frames and render
// the result once; RGB spaces render every sharp frame first and average
// after the ISP. Deterministic for a fixed seed: window k draws from
// substream(seed, k) no matter how windows are scheduled.
inline std::vector<BlurPair> synthesize_dataset(const SharpRawSequence& seq,
                                                const BlurVideoParams& params,
                                                FormationSpace space, const IspConfig& isp,
                                                const std::optional<NoiseParams>& noise,
                                                std::uint64_t seed,
                                                const SynthesisOptions& opts = {}) {
    validate(seq);
    validate(params);
    validate(isp);
    if (noise) validate(*noise);
    // raw-noise with absent/zero noise degenerates to plain raw averaging.
    const auto windows =
        exposure_windows(params, static_cast<int>(seq.frames.size()), opts.window_offset);
    const CrfModel linearization = opts.linearization_crf.value_or(isp.crf);
    validate(linearization);

    std::vector<BlurPair> pairs(windows.size());
    parallel_for(windows.size(), opts.threads, [&](std::size_t k) {
        const ExposureWindow w = windows[k];
        const std::span<const RawFrame> raw_window(seq.frames.data() + w.start,
                                                   static_cast<std::size_t>(w.length));
        BlurPair pair;
        pair.window = w;
        pair.params = params;
        pair.space = space;
        switch (space) {
            case FormationSpace::Raw:
                pair.blurry = render(average_raw(raw_window), isp);
                break;
            case FormationSpace::RawNoise:
                pair.blurry = render(
                    synthesize_blur_raw(raw_window, noise, rng::substream(seed, k),
                                        opts.injection == NoiseInjection::Full),
                    isp);
                break;
            case FormationSpace::Rgb:
            case FormationSpace::RgbCrf: {
                std::vector<RgbImage> rendered;
                rendered.reserve(raw_window.size());
                for (const auto& f : raw_window) rendered.push_back(render_display(f, isp));
                const RgbImage blurred =
                    space == FormationSpace::Rgb
                        ? synthesize_blur_rgb(rendered)
                        : synthesize_blur_crf(rendered, linearization);
                pair.blurry = quantize8(blurred);
                break;
            }
        }
        pair.sharp = render(seq.frames[static_cast<std::size_t>(w.center())], isp);
        pairs[k] = std::move(pair);
    });
    return pairs;
}

}  // namespace blursynth

#endif
