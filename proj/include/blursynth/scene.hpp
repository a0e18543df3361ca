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

#ifndef BLURSYNTH_SCENE_HPP
#define BLURSYNTH_SCENE_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "blursynth/image.hpp"
#include "blursynth/noise.hpp"
#include "blursynth/parallel.hpp"
#include "blursynth/rng.hpp"

namespace blursynth {

// Procedural linear scenes with analytically known motion. Sprites move on
// straight lines and render with hard edges (a pixel takes the sprite color
// iff its center falls inside the shape), so every frame is checkable by
// hand; the smoothing under test comes from blur synthesis, not the
// renderer.

enum class SpriteShape { Rectangle, Disk };

struct Sprite {
    SpriteShape shape = SpriteShape::Rectangle;
    std::array<double, 3> color{1.0, 1.0, 1.0};  // linear RGB in [0,1]
    double size = 1.0;  // full extent: square side / disk diameter, pixels
    double x0 = 0.0, y0 = 0.0;  // center position at t = 0
    double vx = 0.0, vy = 0.0;  // pixels per second
};

enum class TexturePattern { None, GradientX, GradientY, Checker };

inline const char* to_string(TexturePattern t) {
    switch (t) {
        case TexturePattern::None: return "none";
        case TexturePattern::GradientX: return "gradient-x";
        case TexturePattern::GradientY: return "gradient-y";
        case TexturePattern::Checker: return "checker";
    }
    return "?";
}

inline std::optional<TexturePattern> texture_from_string(std::string_view s) {
    if (s == "none") return TexturePattern::None;
    if (s == "gradient-x") return TexturePattern::GradientX;
    if (s == "gradient-y") return TexturePattern::GradientY;
    if (s == "checker") return TexturePattern::Checker;
    return std::nullopt;
}

struct SceneConfig {
    int width = 0;
    int height = 0;
    std::array<double, 3> background{0.0, 0.0, 0.0};  // linear RGB in [0,1]
    TexturePattern texture = TexturePattern::None;
    std::vector<Sprite> sprites;  // drawn in order, later sprites on top
};

inline void validate(const SceneConfig& s) {
    if (s.width <= 0 || s.height <= 0)
        throw std::invalid_argument("SceneConfig: dimensions must be positive");
    for (double c : s.background)
        if (c < 0.0 || c > 1.0) throw std::invalid_argument("SceneConfig: background outside [0,1]");
    for (const auto& sp : s.sprites) {
        if (sp.size <= 0.0) throw std::invalid_argument("SceneConfig: sprite size must be positive");
        for (double c : sp.color)
            if (c < 0.0 || c > 1.0)
                throw std::invalid_argument("SceneConfig: sprite color outside [0,1]");
    }
}

struct SensorModel {
    double gain = 1.0;  // counts per unit irradiance
    NoiseParams noise;
    CfaPattern cfa = CfaPattern::RGGB;
    double black_level = 0.0;
    double white_level = 65535.0;
    int bit_depth = 16;
};

inline void validate(const SensorModel& s) {
    if (!(s.gain > 0)) throw std::invalid_argument("SensorModel: gain must be > 0");
    validate(s.noise);
    if (s.bit_depth < 8 || s.bit_depth > 16)
        throw std::invalid_argument("SensorModel: bit_depth must be in [8, 16]");
    const double max_code = static_cast<double>((1u << s.bit_depth) - 1u);
    if (!(s.black_level < s.white_level) || s.white_level > max_code)
        throw std::invalid_argument("SensorModel: requires black_level < white_level <= 2^bit_depth - 1");
}

namespace detail {

inline double texture_factor(TexturePattern t, int x, int y, int w, int h) {
    switch (t) {
        case TexturePattern::None: return 1.0;
        case TexturePattern::GradientX:
            return 0.5 + 0.5 * (w > 1 ? static_cast<double>(x) / (w - 1) : 0.0);
        case TexturePattern::GradientY:
            return 0.5 + 0.5 * (h > 1 ? static_cast<double>(y) / (h - 1) : 0.0);
        case TexturePattern::Checker: return ((x / 8 + y / 8) % 2 == 0) ? 0.6 : 1.0;
    }
    return 1.0;
}

inline bool sprite_covers(const Sprite& sp, double cx, double cy, double px, double py) {
    const double half = sp.size * 0.5;
    const double dx = px - cx;
    const double dy = py - cy;
    if (sp.shape == SpriteShape::Rectangle)
        return std::abs(dx) <= half && std::abs(dy) <= half;
    return dx * dx + dy * dy <= half * half;
}

}  // namespace detail

// Instantaneous noise-free scene radiance at time t, linear domain.
inline RgbImage render_irradiance(const SceneConfig& scene, double t) {
    validate(scene);
    if (t < 0) throw std::invalid_argument("render_irradiance: t must be >= 0");
    RgbImage img = make_rgb_image(scene.width, scene.height, RgbDomain::Linear);
    for (int y = 0; y < scene.height; ++y) {
        for (int x = 0; x < scene.width; ++x) {
            const double f =
                detail::texture_factor(scene.texture, x, y, scene.width, scene.height);
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) = static_cast<float>(scene.background[c] * f);
        }
    }
    for (const auto& sp : scene.sprites) {
        const double cx = sp.x0 + sp.vx * t;
        const double cy = sp.y0 + sp.vy * t;
        const double half = sp.size * 0.5 + 1.0;
        const int x_lo = std::max(0, static_cast<int>(std::floor(cx - half)));
        const int x_hi = std::min(scene.width - 1, static_cast<int>(std::ceil(cx + half)));
        const int y_lo = std::max(0, static_cast<int>(std::floor(cy - half)));
        const int y_hi = std::min(scene.height - 1, static_cast<int>(std::ceil(cy + half)));
        for (int y = y_lo; y <= y_hi; ++y) {
            for (int x = x_lo; x <= x_hi; ++x) {
                if (detail::sprite_covers(sp, cx, cy, x + 0.5, y + 0.5))
                    for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<float>(sp.color[c]);
            }
        }
    }
    return img;
}

// Samples the linear image through the CFA: each site holds
// gain * (site channel value) + black_level. No noise, no quantization.
inline RawFrame mosaic(const RgbImage& image, CfaPattern pattern, const SensorModel& sensor) {
    validate(image);
    validate(sensor);
    if (image.domain != RgbDomain::Linear)
        throw std::invalid_argument("mosaic: input must be in the linear domain");
    if (image.width % 2 != 0 || image.height % 2 != 0)
        throw std::invalid_argument("mosaic: RAW frames need even width and height");
    RawFrame f = make_raw_frame(image.width, image.height, pattern, sensor.black_level,
                                sensor.white_level, sensor.bit_depth);
    for (int y = 0; y < f.height; ++y) {
        for (int x = 0; x < f.width; ++x) {
            const int c = static_cast<int>(cfa_channel_of(pattern, x, y));
            f.at(x, y) =
                static_cast<float>(sensor.gain * image.at(x, y, c) + sensor.black_level);
        }
    }
    return f;
}

// Renders n_frames at i/sharp_fps, mosaics them, and injects full-variance
// capture noise per frame. Each frame draws from its own RNG substream, so
// the result is a pure function of the arguments regardless of thread count.
inline SharpRawSequence gen_sequence(const SceneConfig& scene, const SensorModel& sensor,
                                     double sharp_fps, int n_frames, std::uint64_t seed,
                                     int threads = 1) {
    validate(scene);
    validate(sensor);
    if (n_frames < 1) throw std::invalid_argument("gen_sequence: n_frames must be >= 1");
    if (!(sharp_fps > 0)) throw std::invalid_argument("gen_sequence: sharp_fps must be > 0");
    SharpRawSequence seq;
    seq.sharp_fps = sharp_fps;
    seq.per_frame_exposure_ms = 1000.0 / sharp_fps;
    seq.frames.resize(static_cast<std::size_t>(n_frames));
    parallel_for(static_cast<std::size_t>(n_frames), threads, [&](std::size_t i) {
        const double t = static_cast<double>(i) / sharp_fps;
        RawFrame f = mosaic(render_irradiance(scene, t), sensor.cfa, sensor);
        if (!sensor.noise.is_zero())
            f = inject_noise(f, sensor.noise, 1.0, rng::substream(seed, i));
        seq.frames[i] = std::move(f);
    });
    return seq;
}

}  // namespace blursynth

#endif
