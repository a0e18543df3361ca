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

#ifndef BLURSYNTH_ISP_HPP
#define BLURSYNTH_ISP_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "blursynth/image.hpp"

namespace blursynth {

// Software ISP: black level -> white balance -> demosaic -> color matrix ->
// CRF -> 8-bit quantize, in that fixed order. Every stage before the CRF is
// affine or a fixed linear stencil per pixel, so each commutes exactly with
// frame averaging; the CRF is the single nonlinearity and the single clamp
// point. That structure is what the formation-space comparisons measure.

enum class CrfKind { Identity, Power, Srgb };

// Camera response function g: linear [0,1] -> display [0,1]. Strictly
// increasing with g(0)=0 and g(1)=1 for every supported kind, hence
// invertible on the unit interval.
struct CrfModel {
    CrfKind kind = CrfKind::Identity;
    double gamma = 2.2;  // Power only: g(x) = x^(1/gamma)

    static CrfModel identity() { return {CrfKind::Identity, 1.0}; }
    static CrfModel power(double gamma) { return {CrfKind::Power, gamma}; }
    static CrfModel srgb() { return {CrfKind::Srgb, 1.0}; }

    double apply(double x) const {
        switch (kind) {
            case CrfKind::Identity: return x;
            case CrfKind::Power: return std::pow(x, 1.0 / gamma);
            case CrfKind::Srgb:
                return x <= 0.0031308 ? 12.92 * x : 1.055 * std::pow(x, 1.0 / 2.4) - 0.055;
        }
        return x;
    }

    double invert(double y) const {
        switch (kind) {
            case CrfKind::Identity: return y;
            case CrfKind::Power: return std::pow(y, gamma);
            case CrfKind::Srgb:
                return y <= 0.0031308 * 12.92 ? y / 12.92 : std::pow((y + 0.055) / 1.055, 2.4);
        }
        return y;
    }

    bool operator==(const CrfModel&) const = default;
};

inline void validate(const CrfModel& crf) {
    if (crf.kind == CrfKind::Power && !(crf.gamma > 0))
        throw std::invalid_argument("CrfModel: power CRF needs gamma > 0");
}

inline std::string to_string(const CrfModel& crf) {
    switch (crf.kind) {
        case CrfKind::Identity: return "identity";
        case CrfKind::Power: return "power:" + std::to_string(crf.gamma);
        case CrfKind::Srgb: return "srgb";
    }
    return "?";
}

inline std::optional<CrfModel> crf_from_string(std::string_view s) {
    if (s == "identity") return CrfModel::identity();
    if (s == "srgb") return CrfModel::srgb();
    constexpr std::string_view prefix = "power:";
    if (s.substr(0, prefix.size()) == prefix) {
        try {
            const double gamma = std::stod(std::string(s.substr(prefix.size())));
            if (gamma > 0) return CrfModel::power(gamma);
        } catch (...) {
        }
    }
    return std::nullopt;
}

using ColorMatrix = std::array<std::array<double, 3>, 3>;

inline constexpr ColorMatrix kIdentityCcm{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

enum class DemosaicMethod { Bilinear };

struct IspConfig {
    // When unset, black/white levels come from the frame's own metadata.
    std::optional<double> black_level;
    std::array<double, 3> wb_gains{1.0, 1.0, 1.0};
    DemosaicMethod demosaic = DemosaicMethod::Bilinear;
    ColorMatrix ccm = kIdentityCcm;
    CrfModel crf = CrfModel::identity();
    int output_bit_depth = 8;

    bool operator==(const IspConfig&) const = default;
};

inline void validate(const IspConfig& c) {
    for (double g : c.wb_gains)
        if (!(g > 0)) throw std::invalid_argument("IspConfig: white-balance gains must be > 0");
    for (const auto& row : c.ccm) {
        const double sum = row[0] + row[1] + row[2];
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("IspConfig: color matrix rows must sum to 1");
    }
    validate(c.crf);
    if (c.output_bit_depth != 8)
        throw std::invalid_argument("IspConfig: only 8-bit output is supported");
}

// Subtract the black level and rescale so black -> 0 and white -> 1.
// Values above white pass through > 1 and are clamped at the CRF stage.
inline RawFrame black_level_correct(const RawFrame& frame,
                                    std::optional<double> black_override = std::nullopt) {
    validate(frame);
    const double black = black_override.value_or(frame.black_level);
    if (!(frame.white_level > black))
        throw std::invalid_argument("black_level_correct: white_level <= black_level");
    const double scale = 1.0 / (frame.white_level - black);
    RawFrame out = frame;
    out.black_level = 0.0;
    out.white_level = 1.0;
    for (float& v : out.data)
        v = static_cast<float>(std::max(static_cast<double>(v) - black, 0.0) * scale);
    return out;
}

// Multiplies each CFA site by its channel's gain. Expects normalized input.
inline RawFrame white_balance(const RawFrame& frame, const std::array<double, 3>& gains) {
    for (double g : gains)
        if (!(g > 0)) throw std::invalid_argument("white_balance: gains must be > 0");
    RawFrame out = frame;
    // Gains are constant per 2x2 phase; resolve them once per tile corner.
    double tile[2][2];
    for (int ty = 0; ty < 2; ++ty)
        for (int tx = 0; tx < 2; ++tx)
            tile[ty][tx] = gains[static_cast<int>(cfa_channel_of(frame.cfa, tx, ty))];
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = static_cast<float>(out.at(x, y) * tile[y & 1][x & 1]);
    return out;
}

namespace detail {

// Reflects an out-of-range index without repeating the edge sample
// (-1 -> 1, n -> n-2). This keeps the CFA phase intact, which plain edge
// replication would break; for the +/-1 stencils below it equals averaging
// only the in-range same-channel taps.
inline int mirror(int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
}

}  // namespace detail

// Bilinear Bayer interpolation: every missing channel is the mean of its
// nearest same-channel neighbors (2 or 4 taps). A fixed linear stencil, so
// it commutes with frame averaging and reproduces constants and linear
// ramps exactly at interior pixels.
inline RgbImage demosaic_bilinear(const RawFrame& frame) {
    if (frame.width % 2 != 0 || frame.height % 2 != 0 || frame.width < 2 || frame.height < 2)
        throw std::invalid_argument("demosaic_bilinear: needs even dimensions >= 2");
    RgbImage out = make_rgb_image(frame.width, frame.height, RgbDomain::Linear);
    const int w = frame.width;
    const int h = frame.height;
    auto v = [&](int x, int y) {
        return static_cast<double>(frame.at(detail::mirror(x, w), detail::mirror(y, h)));
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const Channel own = cfa_channel_of(frame.cfa, x, y);
            double rgb[3];
            if (own == Channel::G) {
                rgb[1] = v(x, y);
                // The row neighbor channel interpolates horizontally, the
                // column neighbor channel vertically.
                const Channel row_ch = cfa_channel_of(frame.cfa, x + 1, y);
                const double row_val = 0.5 * (v(x - 1, y) + v(x + 1, y));
                const double col_val = 0.5 * (v(x, y - 1) + v(x, y + 1));
                rgb[static_cast<int>(row_ch)] = row_val;
                rgb[static_cast<int>(row_ch == Channel::R ? Channel::B : Channel::R)] = col_val;
            } else {
                rgb[static_cast<int>(own)] = v(x, y);
                rgb[1] = 0.25 * (v(x - 1, y) + v(x + 1, y) + v(x, y - 1) + v(x, y + 1));
                const Channel other = own == Channel::R ? Channel::B : Channel::R;
                rgb[static_cast<int>(other)] =
                    0.25 * (v(x - 1, y - 1) + v(x + 1, y - 1) + v(x - 1, y + 1) + v(x + 1, y + 1));
            }
            for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(rgb[c]);
        }
    }
    return out;
}

// Per-pixel 3x3 matrix multiply. Rows must sum to 1 so grays are preserved.
inline RgbImage color_correct(const RgbImage& image, const ColorMatrix& ccm) {
    validate(image);
    if (image.domain != RgbDomain::Linear)
        throw std::invalid_argument("color_correct: input must be linear");
    for (const auto& row : ccm)
        if (std::abs(row[0] + row[1] + row[2] - 1.0) > 1e-9)
            throw std::invalid_argument("color_correct: matrix rows must sum to 1");
    RgbImage out = image;
    const std::size_t n = image.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = image.data[3 * i + 0];
        const double g = image.data[3 * i + 1];
        const double b = image.data[3 * i + 2];
        for (int c = 0; c < 3; ++c)
            out.data[3 * i + c] =
                static_cast<float>(ccm[c][0] * r + ccm[c][1] * g + ccm[c][2] * b);
    }
    return out;
}

// Clamp to [0,1], then encode through g. The ISP's only clamp point.
inline RgbImage apply_crf(const RgbImage& image, const CrfModel& crf) {
    validate(image);
    validate(crf);
    if (image.domain != RgbDomain::Linear)
        throw std::invalid_argument("apply_crf: input must be linear");
    RgbImage out = image;
    out.domain = RgbDomain::Display;
    for (float& x : out.data) {
        double v = static_cast<double>(x);
        v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        x = static_cast<float>(crf.apply(v));
    }
    return out;
}

// Exact inverse of apply_crf's nonlinearity. Clamping cannot be undone.
inline RgbImage inverse_crf(const RgbImage& image, const CrfModel& crf) {
    validate(image);
    validate(crf);
    if (image.domain != RgbDomain::Display)
        throw std::invalid_argument("inverse_crf: input must be display-referred");
    RgbImage out = image;
    out.domain = RgbDomain::Linear;
    for (float& y : out.data) y = static_cast<float>(crf.invert(static_cast<double>(y)));
    return out;
}

// Round half-up to 8-bit codes.
inline RgbImage quantize8(const RgbImage& image) {
    validate(image);
    if (image.domain != RgbDomain::Display)
        throw std::invalid_argument("quantize8: input must be display-referred");
    RgbImage out = image;
    out.domain = RgbDomain::Quantized8;
    for (float& v : out.data) {
        double q = round_half_up(static_cast<double>(v) * 255.0);
        q = q < 0.0 ? 0.0 : (q > 255.0 ? 255.0 : q);
        v = static_cast<float>(q);
    }
    return out;
}

// Full chain up to (but not including) quantization.
inline RgbImage render_display(const RawFrame& frame, const IspConfig& config) {
    validate(config);
    const RawFrame normalized = black_level_correct(frame, config.black_level);
    const RawFrame balanced = white_balance(normalized, config.wb_gains);
    const RgbImage linear = demosaic_bilinear(balanced);
    const RgbImage corrected = color_correct(linear, config.ccm);
    return apply_crf(corrected, config.crf);
}

// Full chain to 8-bit display codes.
inline RgbImage render(const RawFrame& frame, const IspConfig& config) {
    return quantize8(render_display(frame, config));
}

// Preset A: power CRF (gamma 2.2), unit white balance, identity matrix.
inline IspConfig isp_preset_a() {
    IspConfig c;
    c.crf = CrfModel::power(2.2);
    return c;
}

// Preset B: sRGB piecewise CRF, warm white balance, non-trivial color
// matrix. Deliberately renders differently from preset A.
inline IspConfig isp_preset_b() {
    IspConfig c;
    c.wb_gains = {1.8, 1.0, 1.6};
    c.ccm = {{{1.45, -0.35, -0.10}, {-0.25, 1.50, -0.25}, {-0.08, -0.42, 1.50}}};
    c.crf = CrfModel::srgb();
    return c;
}

inline std::optional<IspConfig> isp_preset_by_name(std::string_view name) {
    if (name == "preset-a") return isp_preset_a();
    if (name == "preset-b") return isp_preset_b();
    return std::nullopt;
}

}  // namespace blursynth

#endif
