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

#ifndef BLURSYNTH_IMAGE_HPP
#define BLURSYNTH_IMAGE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blursynth {

// Pixel values are kept real-valued through the whole pipeline; integers
// appear only at clamp_quantize() and in the on-disk formats. Averaging and
// noise math are defined over continuous signals, so working buffers must
// not be quantized in between.

enum class CfaPattern { RGGB, BGGR, GRBG, GBRG };
enum class Channel { R = 0, G = 1, B = 2 };

inline const char* to_string(CfaPattern p) {
    switch (p) {
        case CfaPattern::RGGB: return "RGGB";
        case CfaPattern::BGGR: return "BGGR";
        case CfaPattern::GRBG: return "GRBG";
        case CfaPattern::GBRG: return "GBRG";
    }
    return "?";
}

inline std::optional<CfaPattern> cfa_from_string(std::string_view s) {
    if (s == "RGGB") return CfaPattern::RGGB;
    if (s == "BGGR") return CfaPattern::BGGR;
    if (s == "GRBG") return CfaPattern::GRBG;
    if (s == "GBRG") return CfaPattern::GBRG;
    return std::nullopt;
}

// Color of the CFA site at column x, row y. 2-periodic in both axes.
inline Channel cfa_channel_of(CfaPattern p, int x, int y) {
    if (x < 0 || y < 0) throw std::invalid_argument("cfa_channel_of: negative coordinate");
    const int i = (y & 1) * 2 + (x & 1);  // position inside the 2x2 tile
    static constexpr Channel kRggb[4] = {Channel::R, Channel::G, Channel::G, Channel::B};
    static constexpr Channel kBggr[4] = {Channel::B, Channel::G, Channel::G, Channel::R};
    static constexpr Channel kGrbg[4] = {Channel::G, Channel::R, Channel::B, Channel::G};
    static constexpr Channel kGbrg[4] = {Channel::G, Channel::B, Channel::R, Channel::G};
    switch (p) {
        case CfaPattern::RGGB: return kRggb[i];
        case CfaPattern::BGGR: return kBggr[i];
        case CfaPattern::GRBG: return kGrbg[i];
        case CfaPattern::GBRG: return kGbrg[i];
    }
    throw std::invalid_argument("cfa_channel_of: bad pattern");
}

// A single-channel Bayer-mosaiced linear sensor image. `data` holds working
// values that may exceed white_level transiently (e.g. after noise
// injection); quantized form exists only on disk.
struct RawFrame {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // row-major, width*height
    CfaPattern cfa = CfaPattern::RGGB;
    double black_level = 0.0;
    double white_level = 65535.0;
    int bit_depth = 16;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const float& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

    // Same geometry, CFA and value-range metadata; pixel contents may differ.
    bool compatible_with(const RawFrame& o) const {
        return width == o.width && height == o.height && cfa == o.cfa &&
               black_level == o.black_level && white_level == o.white_level &&
               bit_depth == o.bit_depth;
    }

    bool operator==(const RawFrame&) const = default;
};

inline void validate(const RawFrame& f) {
    if (f.width <= 0 || f.height <= 0 || f.width % 2 != 0 || f.height % 2 != 0)
        throw std::invalid_argument("RawFrame: width and height must be positive and even");
    if (f.bit_depth < 8 || f.bit_depth > 16)
        throw std::invalid_argument("RawFrame: bit_depth must be in [8, 16]");
    const double max_code = static_cast<double>((1u << f.bit_depth) - 1u);
    if (!(f.black_level < f.white_level) || f.white_level > max_code)
        throw std::invalid_argument("RawFrame: requires black_level < white_level <= 2^bit_depth - 1");
    if (f.data.size() != f.pixel_count())
        throw std::invalid_argument("RawFrame: data length != width*height");
}

inline RawFrame make_raw_frame(int width, int height, CfaPattern cfa = CfaPattern::RGGB,
                               double black_level = 0.0, double white_level = 65535.0,
                               int bit_depth = 16, float fill = 0.0f) {
    RawFrame f;
    f.width = width;
    f.height = height;
    f.cfa = cfa;
    f.black_level = black_level;
    f.white_level = white_level;
    f.bit_depth = bit_depth;
    f.data.assign(static_cast<std::size_t>(width) * height, fill);
    validate(f);
    return f;
}

inline double round_half_up(double v) { return std::floor(v + 0.5); }

// Clamp to [0, white_level], then round half-up. Idempotent and monotone.
inline RawFrame clamp_quantize(const RawFrame& in) {
    RawFrame out = in;
    const double hi = in.white_level;
    for (float& v : out.data) {
        double x = static_cast<double>(v);
        x = x < 0.0 ? 0.0 : (x > hi ? hi : x);
        v = static_cast<float>(round_half_up(x));
    }
    return out;
}

enum class RgbDomain {
    Linear,      // scene-referred, nominally [0,1]
    Display,     // after CRF, [0,1]
    Quantized8,  // integer codes 0..255 stored as floats
};

inline const char* to_string(RgbDomain d) {
    switch (d) {
        case RgbDomain::Linear: return "linear";
        case RgbDomain::Display: return "display";
        case RgbDomain::Quantized8: return "quantized8";
    }
    return "?";
}

// Interleaved 3-channel image. Operations declare which domain they accept;
// mixing domains is a contract violation, not a silent conversion.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<float> data;  // row-major, width*height*3
    RgbDomain domain = RgbDomain::Linear;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    float& at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    const float& at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + c];
    }

    bool operator==(const RgbImage&) const = default;
};

inline void validate(const RgbImage& img) {
    if (img.width <= 0 || img.height <= 0)
        throw std::invalid_argument("RgbImage: dimensions must be positive");
    if (img.data.size() != img.pixel_count() * 3)
        throw std::invalid_argument("RgbImage: data length != width*height*3");
}

inline RgbImage make_rgb_image(int width, int height, RgbDomain domain, float fill = 0.0f) {
    RgbImage img;
    img.width = width;
    img.height = height;
    img.domain = domain;
    img.data.assign(static_cast<std::size_t>(width) * height * 3, fill);
    validate(img);
    return img;
}

// Timed sequence of geometry-compatible RAW frames, the discretized carrier
// of the continuous scene signal.
struct SharpRawSequence {
    std::vector<RawFrame> frames;
    double sharp_fps = 0.0;
    double per_frame_exposure_ms = 0.0;
    std::map<std::string, std::string> meta;  // free-form provenance
};

inline void validate(const SharpRawSequence& seq) {
    if (seq.frames.empty()) throw std::invalid_argument("SharpRawSequence: no frames");
    if (!(seq.sharp_fps > 0)) throw std::invalid_argument("SharpRawSequence: sharp_fps must be > 0");
    if (seq.per_frame_exposure_ms > 1000.0 / seq.sharp_fps + 1e-12)
        throw std::invalid_argument("SharpRawSequence: per-frame exposure exceeds frame period");
    validate(seq.frames.front());
    for (std::size_t i = 1; i < seq.frames.size(); ++i) {
        validate(seq.frames[i]);
        if (!seq.frames[i].compatible_with(seq.frames.front()))
            throw std::invalid_argument("SharpRawSequence: frame " + std::to_string(i) +
                                        " incompatible with frame 0");
    }
}

}  // namespace blursynth

#endif
