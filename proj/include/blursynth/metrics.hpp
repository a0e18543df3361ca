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

#ifndef BLURSYNTH_METRICS_HPP
#define BLURSYNTH_METRICS_HPP

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "blursynth/image.hpp"

namespace blursynth {

// Full-reference quality metrics over 8-bit rendered images, evaluated
// where the pipeline's consumers evaluate: after the ISP.

namespace detail {

inline void check_metric_inputs(const RgbImage& ref, const RgbImage& test) {
    validate(ref);
    validate(test);
    if (ref.domain != RgbDomain::Quantized8 || test.domain != RgbDomain::Quantized8)
        throw std::invalid_argument("metrics: images must be 8-bit quantized");
    if (ref.width != test.width || ref.height != test.height)
        throw std::invalid_argument("metrics: dimension mismatch");
}

// 11-tap Gaussian, sigma 1.5, normalized to sum 1.
inline const std::array<double, 11>& ssim_kernel() {
    static const std::array<double, 11> k = [] {
        std::array<double, 11> w{};
        double sum = 0.0;
        for (int i = 0; i < 11; ++i) {
            const double d = i - 5;
            w[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
            sum += w[i];
        }
        for (double& x : w) x /= sum;
        return w;
    }();
    return k;
}

// Horizontal then vertical valid-region convolution with the SSIM kernel.
// in: w x h plane, out: (w-10) x (h-10).
inline std::vector<double> ssim_blur_valid(const std::vector<double>& in, int w, int h) {
    const auto& k = ssim_kernel();
    const int ow = w - 10;
    const int oh = h - 10;
    std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < 11; ++i) s += k[i] * in[static_cast<std::size_t>(y) * w + x + i];
            tmp[static_cast<std::size_t>(y) * ow + x] = s;
        }
    std::vector<double> out(static_cast<std::size_t>(ow) * oh);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < 11; ++i) s += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    return out;
}

}  // namespace detail

// 10*log10(255^2 / MSE) with the MSE over all pixels and channels.
// Identical images report +infinity.
inline double psnr(const RgbImage& ref, const RgbImage& test) {
    detail::check_metric_inputs(ref, test);
    double sse = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
        const double d = static_cast<double>(ref.data[i]) - test.data[i];
        sse += d * d;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sse / static_cast<double>(ref.data.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

// Mean local SSIM: 11x11 Gaussian window (sigma 1.5), C1=(0.01*255)^2,
// C2=(0.03*255)^2, computed over the valid region per channel, then
// averaged across channels.
inline double ssim(const RgbImage& ref, const RgbImage& test) {
    detail::check_metric_inputs(ref, test);
    if (ref.width < 11 || ref.height < 11)
        throw std::invalid_argument("ssim: images must be at least 11x11");
    constexpr double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    const int w = ref.width;
    const int h = ref.height;
    const std::size_t n = ref.pixel_count();
    double total = 0.0;
    std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = ref.data[3 * i + c];
            const double b = test.data[3 * i + c];
            x[i] = a;
            y[i] = b;
            xx[i] = a * a;
            yy[i] = b * b;
            xy[i] = a * b;
        }
        const auto mu_x = detail::ssim_blur_valid(x, w, h);
        const auto mu_y = detail::ssim_blur_valid(y, w, h);
        const auto m_xx = detail::ssim_blur_valid(xx, w, h);
        const auto m_yy = detail::ssim_blur_valid(yy, w, h);
        const auto m_xy = detail::ssim_blur_valid(xy, w, h);
        double channel_sum = 0.0;
        for (std::size_t i = 0; i < mu_x.size(); ++i) {
            const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
            const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
            const double cov = m_xy[i] - mu_x[i] * mu_y[i];
            channel_sum += ((2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * cov + c2)) /
                           ((mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (var_x + var_y + c2));
        }
        total += channel_sum / static_cast<double>(mu_x.size());
    }
    return total / 3.0;
}

struct PairMetrics {
    std::string name;
    double psnr = 0.0;
    double ssim = 0.0;
};

struct MetricReport {
    std::vector<PairMetrics> pairs;
    double mean_psnr = 0.0;
    double mean_ssim = 0.0;
};

inline MetricReport make_report(std::vector<PairMetrics> pairs) {
    MetricReport report;
    report.pairs = std::move(pairs);
    if (report.pairs.empty()) return report;
    double psnr_sum = 0.0, ssim_sum = 0.0;
    for (const auto& p : report.pairs) {
        psnr_sum += p.psnr;
        ssim_sum += p.ssim;
    }
    report.mean_psnr = psnr_sum / static_cast<double>(report.pairs.size());
    report.mean_ssim = ssim_sum / static_cast<double>(report.pairs.size());
    return report;
}

}  // namespace blursynth

#endif
