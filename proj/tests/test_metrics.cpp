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

#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "blursynth/metrics.hpp"
#include "testutil.hpp"

using namespace blursynth;
using Catch::Matchers::WithinAbs;

namespace {

RgbImage shifted(const RgbImage& img, float delta) {
    RgbImage out = img;
    for (float& v : out.data) v = std::min(std::max(v + delta, 0.0f), 255.0f);
    return out;
}

}  // namespace

TEST_CASE("psnr closed forms") {
    const RgbImage img = testutil::random_quant8(5, 24, 24);
    CHECK(std::isinf(psnr(img, img)));

    RgbImage ref = make_rgb_image(16, 16, RgbDomain::Quantized8, 100.0f);
    RgbImage test = make_rgb_image(16, 16, RgbDomain::Quantized8, 116.0f);
    CHECK_THAT(psnr(ref, test), WithinAbs(24.0486, 0.001));

    RgbImage black = make_rgb_image(16, 16, RgbDomain::Quantized8, 0.0f);
    RgbImage white = make_rgb_image(16, 16, RgbDomain::Quantized8, 255.0f);
    CHECK_THAT(psnr(black, white), WithinAbs(0.0, 1e-9));
}

TEST_CASE("psnr rejects mismatched or non-quantized inputs") {
    const RgbImage a = testutil::random_quant8(6, 16, 16);
    const RgbImage b = testutil::random_quant8(6, 16, 12);
    CHECK_THROWS_AS(psnr(a, b), std::invalid_argument);
    RgbImage linear = make_rgb_image(16, 16, RgbDomain::Linear, 0.5f);
    CHECK_THROWS_AS(psnr(a, linear), std::invalid_argument);
}

TEST_CASE("psnr strictly decreases as uniform error grows") {
    const RgbImage ref = make_rgb_image(16, 16, RgbDomain::Quantized8, 80.0f);
    double previous = std::numeric_limits<double>::infinity();
    for (const float amplitude : {1.0f, 2.0f, 4.0f, 16.0f, 50.0f}) {
        const double value = psnr(ref, shifted(ref, amplitude));
        CHECK(value < previous);
        previous = value;
    }
}

TEST_CASE("ssim identities and sign") {
    const RgbImage img = testutil::random_quant8(7, 32, 24);
    CHECK(ssim(img, img) == 1.0);

    SECTION("fine checkerboard against its negative is strongly negative") {
        RgbImage board = make_rgb_image(32, 32, RgbDomain::Quantized8);
        RgbImage negative = make_rgb_image(32, 32, RgbDomain::Quantized8);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x)
                for (int c = 0; c < 3; ++c) {
                    const float v = ((x + y) % 2 == 0) ? 255.0f : 0.0f;
                    board.at(x, y, c) = v;
                    negative.at(x, y, c) = 255.0f - v;
                }
        CHECK(ssim(board, negative) < 0.0);
    }
    SECTION("ssim never exceeds 1 and is below 1 for differing images") {
        for (std::uint64_t k = 0; k < 8; ++k) {
            const RgbImage a = testutil::random_quant8(rng::substream(80, k), 16, 16);
            const RgbImage b = testutil::random_quant8(rng::substream(81, k), 16, 16);
            const double s = ssim(a, b);
            CHECK(s <= 1.0);
            if (!(a == b)) CHECK(s < 1.0);
        }
    }
    SECTION("images below 11x11 are rejected") {
        const RgbImage small = testutil::random_quant8(8, 8, 8);
        CHECK_THROWS_AS(ssim(small, small), std::invalid_argument);
    }
}

TEST_CASE("psnr and ssim are symmetric") {
    for (std::uint64_t k = 0; k < 6; ++k) {
        const RgbImage a = testutil::random_quant8(rng::substream(90, k), 20, 16);
        const RgbImage b = testutil::random_quant8(rng::substream(91, k), 20, 16);
        CHECK(psnr(a, b) == psnr(b, a));
        CHECK_THAT(ssim(a, b), WithinAbs(ssim(b, a), 1e-12));
    }
}

TEST_CASE("ssim matches the independent windowed reference within 1e-6") {
    for (const std::uint64_t seed : {11ull, 22ull, 33ull}) {
        const RgbImage a = testutil::random_quant8(rng::substream(100, seed), 28, 22);
        const RgbImage b = testutil::random_quant8(rng::substream(101, seed), 28, 22);
        CHECK_THAT(ssim(a, b), WithinAbs(testutil::ssim_reference(a, b), 1e-6));
    }
}

TEST_CASE("make_report aggregates means") {
    const MetricReport report =
        make_report({{"a", 30.0, 0.9}, {"b", 40.0, 0.8}, {"c", 20.0, 1.0}});
    CHECK_THAT(report.mean_psnr, WithinAbs(30.0, 1e-12));
    CHECK_THAT(report.mean_ssim, WithinAbs(0.9, 1e-12));
}
