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

#include <catch2/catch_amalgamated.hpp>

#include "blursynth/image.hpp"
#include "blursynth/rng.hpp"
#include "testutil.hpp"

using namespace blursynth;

TEST_CASE("cfa_channel_of matches the pattern definitions") {
    CHECK(cfa_channel_of(CfaPattern::RGGB, 0, 0) == Channel::R);
    CHECK(cfa_channel_of(CfaPattern::RGGB, 1, 0) == Channel::G);
    CHECK(cfa_channel_of(CfaPattern::RGGB, 0, 1) == Channel::G);
    CHECK(cfa_channel_of(CfaPattern::RGGB, 1, 1) == Channel::B);

    CHECK(cfa_channel_of(CfaPattern::BGGR, 0, 0) == Channel::B);
    CHECK(cfa_channel_of(CfaPattern::BGGR, 1, 1) == Channel::R);
    CHECK(cfa_channel_of(CfaPattern::BGGR, 2, 2) == Channel::B);  // (2,2) == (0,0)

    CHECK(cfa_channel_of(CfaPattern::GRBG, 1, 0) == Channel::R);
    CHECK(cfa_channel_of(CfaPattern::GRBG, 0, 1) == Channel::B);
    CHECK(cfa_channel_of(CfaPattern::GBRG, 1, 0) == Channel::B);
    CHECK(cfa_channel_of(CfaPattern::GBRG, 0, 1) == Channel::R);

    CHECK_THROWS_AS(cfa_channel_of(CfaPattern::RGGB, -1, 0), std::invalid_argument);
}

TEST_CASE("cfa_channel_of is 2-periodic and every tile holds R,G,G,B") {
    const CfaPattern patterns[] = {CfaPattern::RGGB, CfaPattern::BGGR, CfaPattern::GRBG,
                                   CfaPattern::GBRG};
    for (const auto p : patterns) {
        for (int k = 0; k < 200; ++k) {
            const int x = static_cast<int>(rng::at(1, 2 * k) % 1000);
            const int y = static_cast<int>(rng::at(1, 2 * k + 1) % 1000);
            CHECK(cfa_channel_of(p, x, y) == cfa_channel_of(p, x + 2, y));
            CHECK(cfa_channel_of(p, x, y) == cfa_channel_of(p, x, y + 2));
        }
        int counts[3] = {0, 0, 0};
        for (int y = 0; y < 2; ++y)
            for (int x = 0; x < 2; ++x) ++counts[static_cast<int>(cfa_channel_of(p, x, y))];
        CHECK(counts[0] == 1);
        CHECK(counts[1] == 2);
        CHECK(counts[2] == 1);
    }
}

TEST_CASE("clamp_quantize clamps then rounds half-up") {
    RawFrame f = testutil::constant_raw(2, 2, 0.0f);
    f.data = {70000.0f, 100.4f, 100.5f, 65535.0f};
    const RawFrame q = clamp_quantize(f);
    CHECK(q.data[0] == 65535.0f);
    CHECK(q.data[1] == 100.0f);
    CHECK(q.data[2] == 101.0f);
    CHECK(q.data[3] == 65535.0f);

    RawFrame negative = testutil::constant_raw(2, 2, -12.7f);
    CHECK(clamp_quantize(negative).data[0] == 0.0f);
}

TEST_CASE("clamp_quantize is idempotent and monotone") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RawFrame a = testutil::random_raw(rng::substream(42, seed), 8, 6, -500.0, 70000.0);
        const RawFrame qa = clamp_quantize(a);
        CHECK(clamp_quantize(qa) == qa);

        RawFrame b = a;
        for (std::size_t i = 0; i < b.data.size(); ++i)
            b.data[i] += static_cast<float>(1000.0 * rng::uniform01(rng::substream(43, seed), i));
        const RawFrame qb = clamp_quantize(b);
        for (std::size_t i = 0; i < qa.data.size(); ++i) CHECK(qa.data[i] <= qb.data[i]);
    }
}

TEST_CASE("RawFrame invariants are enforced") {
    CHECK_THROWS_AS(make_raw_frame(3, 4), std::invalid_argument);  // odd width
    CHECK_THROWS_AS(make_raw_frame(4, 0), std::invalid_argument);  // empty
    CHECK_THROWS_AS(make_raw_frame(4, 4, CfaPattern::RGGB, 100.0, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(make_raw_frame(4, 4, CfaPattern::RGGB, 0.0, 300.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_raw_frame(4, 4, CfaPattern::RGGB, 0.0, 65535.0, 17),
                    std::invalid_argument);

    RawFrame f = make_raw_frame(4, 4);
    f.data.pop_back();
    CHECK_THROWS_AS(validate(f), std::invalid_argument);
}

TEST_CASE("RgbImage tracks its value domain and data length") {
    RgbImage img = make_rgb_image(4, 2, RgbDomain::Display, 0.5f);
    CHECK(img.data.size() == 4 * 2 * 3);
    img.data.pop_back();
    CHECK_THROWS_AS(validate(img), std::invalid_argument);
}

TEST_CASE("SharpRawSequence requires compatible frames and sane timing") {
    SharpRawSequence seq;
    seq.sharp_fps = 940.0;
    seq.per_frame_exposure_ms = 1000.0 / 940.0;
    seq.frames.push_back(testutil::constant_raw(4, 4, 10.0f));
    seq.frames.push_back(testutil::constant_raw(4, 4, 20.0f));
    CHECK_NOTHROW(validate(seq));

    SECTION("exposure above the frame period is rejected") {
        seq.per_frame_exposure_ms = 1.2;
        CHECK_THROWS_AS(validate(seq), std::invalid_argument);
    }
    SECTION("mixed geometry is rejected") {
        seq.frames.push_back(testutil::constant_raw(6, 4, 10.0f));
        CHECK_THROWS_AS(validate(seq), std::invalid_argument);
    }
    SECTION("mixed levels are rejected") {
        seq.frames.push_back(testutil::constant_raw(4, 4, 10.0f, 64.0, 65535.0));
        CHECK_THROWS_AS(validate(seq), std::invalid_argument);
    }
    SECTION("empty sequence is rejected") {
        seq.frames.clear();
        CHECK_THROWS_AS(validate(seq), std::invalid_argument);
    }
}
