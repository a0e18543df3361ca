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

#include <fstream>

#include <catch2/catch_amalgamated.hpp>

#include "blursynth/io.hpp"
#include "testutil.hpp"

using namespace blursynth;
using testutil::TempDir;

namespace {

SharpRawSequence noisy_sequence(int n_frames, int w, int h) {
    SharpRawSequence seq;
    seq.sharp_fps = 940.0;
    seq.per_frame_exposure_ms = 1000.0 / 940.0;
    seq.meta = {{"origin", "test"}};
    for (int i = 0; i < n_frames; ++i)
        seq.frames.push_back(
            testutil::random_raw(rng::substream(3000, i), w, h, 0.0, 65535.0));
    return seq;
}

}  // namespace

TEST_CASE("pgm round-trip is lossless and big-endian") {
    TempDir dir("pgm");
    RawFrame f = testutil::constant_raw(2, 2, 0.0f);
    f.data = {0.0f, 1.0f, 256.0f, 65535.0f};
    const fs::path path = dir.path() / "f.pgm";
    write_pgm(path, f);

    SECTION("payload bytes follow the two-byte big-endian sample layout") {
        const auto bytes = testutil::read_bytes(path);
        // header: "P5\n2 2\n65535\n" = 13 bytes, then 8 payload bytes
        REQUIRE(bytes.size() == 13 + 8);
        const unsigned char expected[8] = {0, 0, 0, 1, 1, 0, 0xFF, 0xFF};
        for (int i = 0; i < 8; ++i) CHECK(bytes[13 + i] == expected[i]);
    }
    SECTION("read returns identical samples") {
        const RawFrame back = read_pgm(path, f.cfa, f.black_level, f.white_level, f.bit_depth);
        CHECK(back == f);
    }
    SECTION("8-bit frames use single-byte samples") {
        RawFrame small = testutil::constant_raw(2, 2, 200.0f, 0.0, 255.0, 8);
        const fs::path p8 = dir.path() / "f8.pgm";
        write_pgm(p8, small);
        CHECK(fs::file_size(p8) == 11 + 4);  // "P5\n2 2\n255\n" + 4 samples
        CHECK(read_pgm(p8, small.cfa, 0.0, 255.0, 8) == small);
    }
    SECTION("unquantized values are refused") {
        RawFrame bad = testutil::constant_raw(2, 2, 0.5f);
        CHECK_THROWS_AS(write_pgm(dir.path() / "bad.pgm", bad), io_error);
    }
}

TEST_CASE("ppm round-trip is lossless") {
    TempDir dir("ppm");
    const RgbImage img = testutil::random_quant8(17, 6, 4);
    const fs::path path = dir.path() / "i.ppm";
    write_ppm(path, img);
    CHECK(read_ppm(path) == img);
    CHECK(fs::file_size(path) == 11 + 6 * 4 * 3);  // "P6\n6 4\n255\n"

    RgbImage display = make_rgb_image(4, 4, RgbDomain::Display, 0.5f);
    CHECK_THROWS_AS(write_ppm(dir.path() / "d.ppm", display), io_error);
}

TEST_CASE("sequence write/read round-trips quantized data and metadata") {
    TempDir dir("seq");
    const SharpRawSequence seq = noisy_sequence(5, 8, 6);
    SequenceProvenance provenance;
    provenance.noise = NoiseParams{0.01, 2.0};
    provenance.seed = 42;
    write_sequence(seq, dir.path(), provenance);

    SECTION("16-bit frame files have the exact expected size") {
        // header "P5\n8 6\n65535\n" = 13 bytes + 8*6*2 payload
        CHECK(fs::file_size(dir.path() / "frame_000000.pgm") == 13 + 8 * 6 * 2);
    }
    SECTION("round-trip equals the quantized source") {
        const LoadedSequence loaded = read_sequence(dir.path());
        REQUIRE(loaded.sequence.frames.size() == seq.frames.size());
        for (std::size_t i = 0; i < seq.frames.size(); ++i)
            CHECK(loaded.sequence.frames[i] == clamp_quantize(seq.frames[i]));
        CHECK(loaded.sequence.sharp_fps == seq.sharp_fps);
        CHECK(loaded.sequence.per_frame_exposure_ms == seq.per_frame_exposure_ms);
        CHECK(loaded.sequence.meta == seq.meta);
        REQUIRE(loaded.manifest.noise.has_value());
        CHECK(loaded.manifest.noise->a == 0.01);
        CHECK(loaded.manifest.seed == 42);
        CHECK(loaded.manifest.frame_files.size() == 5);
    }
    SECTION("a second write produces byte-identical files") {
        TempDir dir2("seq2");
        write_sequence(seq, dir2.path(), provenance);
        CHECK(testutil::directories_identical(dir.path(), dir2.path()));
    }
    SECTION("missing frame files are reported by name") {
        fs::remove(dir.path() / "frame_000002.pgm");
        try {
            read_sequence(dir.path());
            FAIL("expected io_error");
        } catch (const io_error& e) {
            CHECK(std::string(e.what()).find("frame_000002.pgm") != std::string::npos);
        }
    }
    SECTION("truncated frame data is detected") {
        fs::resize_file(dir.path() / "frame_000001.pgm", 20);
        CHECK_THROWS_AS(read_sequence(dir.path()), io_error);
    }
    SECTION("unknown manifest fields are rejected") {
        json j = detail::load_json_file(dir.path() / "meta.json", "test");
        j["surprise"] = 1;
        detail::save_json_file(dir.path() / "meta.json", j, "test");
        CHECK_THROWS_AS(read_sequence(dir.path()), io_error);
    }
    SECTION("missing manifest fields are rejected") {
        json j = detail::load_json_file(dir.path() / "meta.json", "test");
        j.erase("sharp_fps");
        detail::save_json_file(dir.path() / "meta.json", j, "test");
        CHECK_THROWS_AS(read_sequence(dir.path()), io_error);
    }
    SECTION("geometry mismatch between manifest and frame is detected") {
        json j = detail::load_json_file(dir.path() / "meta.json", "test");
        j["width"] = 16;
        detail::save_json_file(dir.path() / "meta.json", j, "test");
        CHECK_THROWS_AS(read_sequence(dir.path()), io_error);
    }
}

TEST_CASE("dataset manifest and pair writing") {
    TempDir dir("ds");
    DatasetManifest manifest;
    manifest.source_sequence = "some/seq";
    manifest.params = {8, 5};
    manifest.space = FormationSpace::RawNoise;
    manifest.isp = isp_preset_b();
    manifest.isp_preset = "preset-b";
    manifest.noise = NoiseParams{0.01, 2.0};
    manifest.seed = 7;
    write_dataset_manifest(dir.path(), manifest);

    BlurPair pair;
    pair.blurry = testutil::random_quant8(21, 12, 12);
    pair.sharp = testutil::random_quant8(22, 12, 12);
    pair.window = {0, 5};
    pair.params = manifest.params;
    pair.space = manifest.space;

    SECTION("write_pair names files by index and appends manifest rows") {
        const auto [blur_path, sharp_path] = write_pair(pair, dir.path());
        CHECK(blur_path.filename() == "blur_000000.ppm");
        CHECK(sharp_path.filename() == "sharp_000000.ppm");
        pair.window.start = 8;
        const auto [blur2, sharp2] = write_pair(pair, dir.path());
        CHECK(blur2.filename() == "blur_000001.ppm");

        const DatasetManifest loaded = read_dataset_manifest(dir.path());
        REQUIRE(loaded.pairs.size() == 2);
        CHECK(loaded.pairs[0].blurry_file == "blur_000000.ppm");
        CHECK(loaded.pairs[0].window_start == 0);
        CHECK(loaded.pairs[1].window_start == 8);
        CHECK(loaded.params == manifest.params);
        CHECK(loaded.space == manifest.space);
        CHECK(loaded.isp == manifest.isp);
        CHECK(loaded.isp_preset == manifest.isp_preset);
        CHECK(loaded.noise == manifest.noise);

        CHECK(read_ppm(blur_path) == pair.blurry);
        CHECK(read_ppm(sharp_path) == pair.sharp);
    }
    SECTION("manifest with inconsistent blur params is rejected") {
        json j = detail::load_json_file(dir.path() / "dataset.json", "test");
        j["tau"] = 9;  // > T
        detail::save_json_file(dir.path() / "dataset.json", j, "test");
        CHECK_THROWS_AS(read_dataset_manifest(dir.path()), io_error);
    }
}

TEST_CASE("config files parse strictly") {
    SECTION("isp config round-trip, presets included") {
        for (const auto& config : {IspConfig{}, isp_preset_a(), isp_preset_b()}) {
            CHECK(isp_from_json(to_json(config)) == config);
        }
    }
    SECTION("isp config file requires schema_version") {
        TempDir dir("isp");
        json j = to_json(isp_preset_a());
        detail::save_json_file(dir.path() / "isp.json", j, "test");
        CHECK_THROWS_AS(read_isp_file(dir.path() / "isp.json"), io_error);
        j["schema_version"] = 1;
        detail::save_json_file(dir.path() / "isp.json", j, "test");
        CHECK(read_isp_file(dir.path() / "isp.json") == isp_preset_a());
    }
    SECTION("crf json rejects stray fields") {
        CHECK_THROWS_AS(crf_from_json(json{{"kind", "identity"}, {"gamma", 2.2}}), io_error);
        CHECK_THROWS_AS(crf_from_json(json{{"kind", "power"}}), io_error);
        CHECK_THROWS_AS(crf_from_json(json{{"kind", "cube"}}), io_error);
    }
    SECTION("scene file round-trip") {
        SceneFile file;
        file.scene.width = 64;
        file.scene.height = 48;
        file.scene.background = {0.2, 0.25, 0.2};
        file.scene.texture = TexturePattern::Checker;
        file.scene.sprites.push_back(
            {SpriteShape::Disk, {0.8, 0.1, 0.1}, 16.0, 20.0, 24.0, 940.0, 0.0});
        file.sensor.gain = 50000.0;
        file.sensor.noise = {0.01, 2.0};
        const SceneFile back = scene_file_from_json(to_json(file));
        CHECK(back.scene.width == file.scene.width);
        CHECK(back.scene.texture == file.scene.texture);
        REQUIRE(back.scene.sprites.size() == 1);
        CHECK(back.scene.sprites[0].vx == 940.0);
        CHECK(back.sensor.noise == file.sensor.noise);
    }
    SECTION("scene file rejects unknown sprite fields") {
        SceneFile file;
        file.scene.width = 8;
        file.scene.height = 8;
        file.scene.sprites.push_back({SpriteShape::Disk, {1, 1, 1}, 4.0, 2.0, 2.0, 0.0, 0.0});
        json j = to_json(file);
        j["scene"]["sprites"][0]["spin"] = true;
        CHECK_THROWS_AS(scene_file_from_json(j), io_error);
    }
    SECTION("metric report serializes infinities as strings") {
        MetricReport report = make_report(
            {{"x", std::numeric_limits<double>::infinity(), 1.0}, {"y", 24.0, 0.9}});
        const json j = to_json(report);
        CHECK(j["pairs"][0]["psnr"] == "inf");
        CHECK(j["pairs"][1]["psnr"] == 24.0);
        CHECK(j["mean_psnr"] == "inf");
    }
}
