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

#ifndef BLURSYNTH_IO_HPP
#define BLURSYNTH_IO_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "blursynth/blur.hpp"
#include "blursynth/image.hpp"
#include "blursynth/isp.hpp"
#include "blursynth/metrics.hpp"
#include "blursynth/noise.hpp"
#include "blursynth/scene.hpp"

namespace blursynth {

// On-disk layout
//   sequence dir:  meta.json + frame_%06d.pgm   (P5, maxval 2^bit_depth - 1,
//                  two-byte samples big-endian when maxval > 255)
//   dataset dir:   dataset.json + blur_%06d.ppm / sharp_%06d.ppm  (P6, 8-bit)
// Manifests are UTF-8 JSON with a schema_version; unknown fields are
// rejected so a manifest always means exactly what this code thinks it
// means. All round-trips are lossless at the quantized level.

class io_error : public std::runtime_error {
  public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int kSequenceSchemaVersion = 1;
inline constexpr int kDatasetSchemaVersion = 1;
inline constexpr int kConfigSchemaVersion = 1;

namespace detail {

inline void check_fields(const json& j, const std::string& what,
                         std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) throw io_error(what + ": expected a JSON object");
    for (const char* key : required)
        if (!j.contains(key)) throw io_error(what + ": missing field '" + key + "'");
    std::set<std::string> known;
    for (const char* key : required) known.insert(key);
    for (const char* key : optional) known.insert(key);
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw io_error(what + ": unknown field '" + key + "'");
}

template <typename T>
T get_field(const json& j, const std::string& what, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw io_error(what + ": bad field '" + key + "': " + e.what());
    }
}

inline std::string frame_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "frame_%06d.pgm", index);
    return buf;
}

inline std::string pair_name(const char* stem, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%06d.ppm", stem, index);
    return buf;
}

inline json load_json_file(const fs::path& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw io_error(what + ": cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw io_error(what + ": invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const fs::path& path, const json& j, const std::string& what) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error(what + ": cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw io_error(what + ": write failed for " + path.string());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Netpbm images

// Writes a P5 PGM. Values must already be quantized (integral, within
// [0, maxval]); quantization is the caller's explicit stage.
inline void write_pgm(const fs::path& path, const RawFrame& frame) {
    validate(frame);
    const unsigned maxval = (1u << frame.bit_depth) - 1u;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("write_pgm: cannot open " + path.string());
    out << "P5\n" << frame.width << ' ' << frame.height << '\n' << maxval << '\n';
    std::vector<unsigned char> bytes;
    bytes.reserve(frame.data.size() * (maxval > 255 ? 2 : 1));
    for (const float v : frame.data) {
        const double d = static_cast<double>(v);
        if (d < 0.0 || d > maxval || d != std::floor(d))
            throw io_error("write_pgm: unquantized value " + std::to_string(d) + " for " +
                           path.string());
        const unsigned u = static_cast<unsigned>(d);
        if (maxval > 255) bytes.push_back(static_cast<unsigned char>(u >> 8));
        bytes.push_back(static_cast<unsigned char>(u & 0xFF));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write_pgm: write failed for " + path.string());
}

namespace detail {

inline unsigned next_pnm_token(std::istream& in, const std::string& what) {
    // Netpbm headers: tokens separated by whitespace, '#' starts a comment.
    for (;;) {
        const int c = in.peek();
        if (c == EOF) throw io_error(what + ": truncated header");
        if (std::isspace(static_cast<unsigned char>(c))) {
            in.get();
        } else if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            break;
        }
    }
    unsigned value = 0;
    if (!(in >> value)) throw io_error(what + ": malformed header token");
    return value;
}

}  // namespace detail

// Reads a P5 PGM; geometry and maxval come from the file, the rest of the
// frame metadata from the caller (normally the sequence manifest).
inline RawFrame read_pgm(const fs::path& path, CfaPattern cfa, double black_level,
                         double white_level, int bit_depth) {
    const std::string what = "read_pgm(" + path.string() + ")";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(what + ": cannot open file");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5') throw io_error(what + ": not a binary PGM (P5)");
    const unsigned width = detail::next_pnm_token(in, what);
    const unsigned height = detail::next_pnm_token(in, what);
    const unsigned maxval = detail::next_pnm_token(in, what);
    if (maxval == 0 || maxval > 65535) throw io_error(what + ": unsupported maxval");
    in.get();  // single whitespace after maxval
    const unsigned expected_maxval = (1u << bit_depth) - 1u;
    if (maxval != expected_maxval)
        throw io_error(what + ": maxval " + std::to_string(maxval) + " does not match bit depth " +
                       std::to_string(bit_depth));
    RawFrame frame = make_raw_frame(static_cast<int>(width), static_cast<int>(height), cfa,
                                    black_level, white_level, bit_depth);
    const std::size_t n = frame.pixel_count();
    const std::size_t sample_size = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> bytes(n * sample_size);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw io_error(what + ": truncated pixel data");
    for (std::size_t i = 0; i < n; ++i) {
        const unsigned v = sample_size == 2
                               ? (static_cast<unsigned>(bytes[2 * i]) << 8) | bytes[2 * i + 1]
                               : bytes[i];
        frame.data[i] = static_cast<float>(v);
    }
    return frame;
}

// Writes a P6 PPM from 8-bit quantized data.
inline void write_ppm(const fs::path& path, const RgbImage& image) {
    validate(image);
    if (image.domain != RgbDomain::Quantized8)
        throw io_error("write_ppm: image must be 8-bit quantized");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("write_ppm: cannot open " + path.string());
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    std::vector<unsigned char> bytes(image.data.size());
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        const double d = static_cast<double>(image.data[i]);
        if (d < 0.0 || d > 255.0 || d != std::floor(d))
            throw io_error("write_ppm: unquantized value for " + path.string());
        bytes[i] = static_cast<unsigned char>(d);
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write_ppm: write failed for " + path.string());
}

inline RgbImage read_ppm(const fs::path& path) {
    const std::string what = "read_ppm(" + path.string() + ")";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(what + ": cannot open file");
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '6') throw io_error(what + ": not a binary PPM (P6)");
    const unsigned width = detail::next_pnm_token(in, what);
    const unsigned height = detail::next_pnm_token(in, what);
    const unsigned maxval = detail::next_pnm_token(in, what);
    if (maxval != 255) throw io_error(what + ": only maxval 255 is supported");
    in.get();
    RgbImage image =
        make_rgb_image(static_cast<int>(width), static_cast<int>(height), RgbDomain::Quantized8);
    std::vector<unsigned char> bytes(image.data.size());
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw io_error(what + ": truncated pixel data");
    for (std::size_t i = 0; i < bytes.size(); ++i) image.data[i] = static_cast<float>(bytes[i]);
    return image;
}

// ---------------------------------------------------------------------------
// JSON forms of the configuration types

inline json to_json(const NoiseParams& p) { return json{{"a", p.a}, {"b", p.b}}; }

inline NoiseParams noise_from_json(const json& j) {
    detail::check_fields(j, "noise", {"a", "b"});
    NoiseParams p{detail::get_field<double>(j, "noise", "a"),
                  detail::get_field<double>(j, "noise", "b")};
    try {
        validate(p);
    } catch (const std::invalid_argument& e) {
        throw io_error(std::string("noise: ") + e.what());
    }
    return p;
}

inline json to_json(const CrfModel& crf) {
    switch (crf.kind) {
        case CrfKind::Identity: return json{{"kind", "identity"}};
        case CrfKind::Power: return json{{"kind", "power"}, {"gamma", crf.gamma}};
        case CrfKind::Srgb: return json{{"kind", "srgb"}};
    }
    throw io_error("crf: unsupported kind");
}

inline CrfModel crf_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw io_error("crf: missing 'kind'");
    const auto kind = detail::get_field<std::string>(j, "crf", "kind");
    if (kind == "identity") {
        detail::check_fields(j, "crf", {"kind"});
        return CrfModel::identity();
    }
    if (kind == "srgb") {
        detail::check_fields(j, "crf", {"kind"});
        return CrfModel::srgb();
    }
    if (kind == "power") {
        detail::check_fields(j, "crf", {"kind", "gamma"});
        const double gamma = detail::get_field<double>(j, "crf", "gamma");
        if (!(gamma > 0)) throw io_error("crf: gamma must be > 0");
        return CrfModel::power(gamma);
    }
    throw io_error("crf: unknown kind '" + kind + "'");
}

inline json to_json(const IspConfig& c) {
    json j;
    j["black_level"] = c.black_level ? json(*c.black_level) : json(nullptr);
    j["wb_gains"] = c.wb_gains;
    j["demosaic"] = "bilinear";
    j["ccm"] = c.ccm;
    j["crf"] = to_json(c.crf);
    j["output_bit_depth"] = c.output_bit_depth;
    return j;
}

inline IspConfig isp_from_json(const json& j) {
    detail::check_fields(j, "isp",
                         {"black_level", "wb_gains", "demosaic", "ccm", "crf", "output_bit_depth"});
    IspConfig c;
    if (!j.at("black_level").is_null())
        c.black_level = detail::get_field<double>(j, "isp", "black_level");
    c.wb_gains = detail::get_field<std::array<double, 3>>(j, "isp", "wb_gains");
    if (detail::get_field<std::string>(j, "isp", "demosaic") != "bilinear")
        throw io_error("isp: unsupported demosaic method");
    c.ccm = detail::get_field<ColorMatrix>(j, "isp", "ccm");
    c.crf = crf_from_json(j.at("crf"));
    c.output_bit_depth = detail::get_field<int>(j, "isp", "output_bit_depth");
    try {
        validate(c);
    } catch (const std::invalid_argument& e) {
        throw io_error(std::string("isp: ") + e.what());
    }
    return c;
}

inline IspConfig read_isp_file(const fs::path& path) {
    json j = detail::load_json_file(path, "isp config");
    if (!j.is_object() || !j.contains("schema_version"))
        throw io_error("isp config: missing schema_version in " + path.string());
    if (detail::get_field<int>(j, "isp config", "schema_version") != kConfigSchemaVersion)
        throw io_error("isp config: unsupported schema_version in " + path.string());
    j.erase("schema_version");
    return isp_from_json(j);
}

inline json to_json(const Sprite& s) {
    return json{{"shape", s.shape == SpriteShape::Rectangle ? "rectangle" : "disk"},
                {"color", s.color},
                {"size", s.size},
                {"x0", s.x0},
                {"y0", s.y0},
                {"vx", s.vx},
                {"vy", s.vy}};
}

inline Sprite sprite_from_json(const json& j) {
    detail::check_fields(j, "sprite", {"shape", "color", "size", "x0", "y0", "vx", "vy"});
    Sprite s;
    const auto shape = detail::get_field<std::string>(j, "sprite", "shape");
    if (shape == "rectangle")
        s.shape = SpriteShape::Rectangle;
    else if (shape == "disk")
        s.shape = SpriteShape::Disk;
    else
        throw io_error("sprite: unknown shape '" + shape + "'");
    s.color = detail::get_field<std::array<double, 3>>(j, "sprite", "color");
    s.size = detail::get_field<double>(j, "sprite", "size");
    s.x0 = detail::get_field<double>(j, "sprite", "x0");
    s.y0 = detail::get_field<double>(j, "sprite", "y0");
    s.vx = detail::get_field<double>(j, "sprite", "vx");
    s.vy = detail::get_field<double>(j, "sprite", "vy");
    return s;
}

inline json to_json(const SceneConfig& s) {
    json sprites = json::array();
    for (const auto& sp : s.sprites) sprites.push_back(to_json(sp));
    return json{{"width", s.width},
                {"height", s.height},
                {"background", s.background},
                {"texture", to_string(s.texture)},
                {"sprites", sprites}};
}

inline SceneConfig scene_from_json(const json& j) {
    detail::check_fields(j, "scene", {"width", "height", "background", "sprites"}, {"texture"});
    SceneConfig s;
    s.width = detail::get_field<int>(j, "scene", "width");
    s.height = detail::get_field<int>(j, "scene", "height");
    s.background = detail::get_field<std::array<double, 3>>(j, "scene", "background");
    if (j.contains("texture")) {
        const auto name = detail::get_field<std::string>(j, "scene", "texture");
        const auto t = texture_from_string(name);
        if (!t) throw io_error("scene: unknown texture '" + name + "'");
        s.texture = *t;
    }
    for (const auto& sp : j.at("sprites")) s.sprites.push_back(sprite_from_json(sp));
    try {
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw io_error(std::string("scene: ") + e.what());
    }
    return s;
}

inline json to_json(const SensorModel& s) {
    return json{{"gain", s.gain},
                {"noise", to_json(s.noise)},
                {"cfa_pattern", to_string(s.cfa)},
                {"black_level", s.black_level},
                {"white_level", s.white_level},
                {"bit_depth", s.bit_depth}};
}

inline SensorModel sensor_from_json(const json& j) {
    detail::check_fields(
        j, "sensor", {"gain", "cfa_pattern", "black_level", "white_level", "bit_depth"}, {"noise"});
    SensorModel s;
    s.gain = detail::get_field<double>(j, "sensor", "gain");
    if (j.contains("noise") && !j.at("noise").is_null()) s.noise = noise_from_json(j.at("noise"));
    const auto cfa_name = detail::get_field<std::string>(j, "sensor", "cfa_pattern");
    const auto cfa = cfa_from_string(cfa_name);
    if (!cfa) throw io_error("sensor: unknown cfa_pattern '" + cfa_name + "'");
    s.cfa = *cfa;
    s.black_level = detail::get_field<double>(j, "sensor", "black_level");
    s.white_level = detail::get_field<double>(j, "sensor", "white_level");
    s.bit_depth = detail::get_field<int>(j, "sensor", "bit_depth");
    try {
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw io_error(std::string("sensor: ") + e.what());
    }
    return s;
}

// A gen-scene configuration file: the scene plus the sensor that captures it.
struct SceneFile {
    SceneConfig scene;
    SensorModel sensor;
};

inline json to_json(const SceneFile& f) {
    return json{{"schema_version", kConfigSchemaVersion},
                {"scene", to_json(f.scene)},
                {"sensor", to_json(f.sensor)}};
}

inline SceneFile scene_file_from_json(const json& j) {
    detail::check_fields(j, "scene config", {"schema_version", "scene", "sensor"});
    if (detail::get_field<int>(j, "scene config", "schema_version") != kConfigSchemaVersion)
        throw io_error("scene config: unsupported schema_version");
    return {scene_from_json(j.at("scene")), sensor_from_json(j.at("sensor"))};
}

inline SceneFile read_scene_file(const fs::path& path) {
    return scene_file_from_json(detail::load_json_file(path, "scene config"));
}

// ---------------------------------------------------------------------------
// Sequence manifests

struct SequenceManifest {
    int schema_version = kSequenceSchemaVersion;
    int width = 0, height = 0;
    CfaPattern cfa = CfaPattern::RGGB;
    double black_level = 0.0, white_level = 65535.0;
    int bit_depth = 16;
    double sharp_fps = 0.0;
    double per_frame_exposure_ms = 0.0;
    std::vector<std::string> frame_files;
    std::optional<NoiseParams> noise;
    json scene;  // provenance; null when the sequence was not generated here
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> meta;
};

// Provenance recorded alongside generated sequences so a dataset can be
// re-synthesized from manifests alone.
struct SequenceProvenance {
    std::optional<NoiseParams> noise;
    json scene;
    std::optional<std::uint64_t> seed;
};

inline json to_json(const SequenceManifest& m) {
    json j;
    j["schema_version"] = m.schema_version;
    j["width"] = m.width;
    j["height"] = m.height;
    j["cfa_pattern"] = to_string(m.cfa);
    j["black_level"] = m.black_level;
    j["white_level"] = m.white_level;
    j["bit_depth"] = m.bit_depth;
    j["sharp_fps"] = m.sharp_fps;
    j["per_frame_exposure_ms"] = m.per_frame_exposure_ms;
    j["frames"] = m.frame_files;
    j["noise"] = m.noise ? to_json(*m.noise) : json(nullptr);
    j["scene"] = m.scene.is_null() ? json(nullptr) : m.scene;
    j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
    j["meta"] = m.meta;
    return j;
}

inline SequenceManifest sequence_manifest_from_json(const json& j) {
    detail::check_fields(j, "sequence manifest",
                         {"schema_version", "width", "height", "cfa_pattern", "black_level",
                          "white_level", "bit_depth", "sharp_fps", "per_frame_exposure_ms",
                          "frames", "noise", "scene", "seed"},
                         {"meta"});
    SequenceManifest m;
    m.schema_version = detail::get_field<int>(j, "sequence manifest", "schema_version");
    if (m.schema_version != kSequenceSchemaVersion)
        throw io_error("sequence manifest: unsupported schema_version " +
                       std::to_string(m.schema_version));
    m.width = detail::get_field<int>(j, "sequence manifest", "width");
    m.height = detail::get_field<int>(j, "sequence manifest", "height");
    const auto cfa_name = detail::get_field<std::string>(j, "sequence manifest", "cfa_pattern");
    const auto cfa = cfa_from_string(cfa_name);
    if (!cfa) throw io_error("sequence manifest: unknown cfa_pattern '" + cfa_name + "'");
    m.cfa = *cfa;
    m.black_level = detail::get_field<double>(j, "sequence manifest", "black_level");
    m.white_level = detail::get_field<double>(j, "sequence manifest", "white_level");
    m.bit_depth = detail::get_field<int>(j, "sequence manifest", "bit_depth");
    m.sharp_fps = detail::get_field<double>(j, "sequence manifest", "sharp_fps");
    m.per_frame_exposure_ms =
        detail::get_field<double>(j, "sequence manifest", "per_frame_exposure_ms");
    m.frame_files = detail::get_field<std::vector<std::string>>(j, "sequence manifest", "frames");
    if (m.frame_files.empty()) throw io_error("sequence manifest: empty frame list");
    if (!j.at("noise").is_null()) m.noise = noise_from_json(j.at("noise"));
    m.scene = j.at("scene");
    if (!j.at("seed").is_null())
        m.seed = detail::get_field<std::uint64_t>(j, "sequence manifest", "seed");
    if (j.contains("meta"))
        m.meta = detail::get_field<std::map<std::string, std::string>>(j, "sequence manifest",
                                                                       "meta");
    return m;
}

// Writes frames (clamped + quantized) and meta.json into `dir`. The on-disk
// form is the quantized form; in-memory working values survive only through
// an explicit clamp_quantize here.
inline SequenceManifest write_sequence(const SharpRawSequence& seq, const fs::path& dir,
                                       const SequenceProvenance& provenance = {}) {
    validate(seq);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("write_sequence: cannot create " + dir.string());
    SequenceManifest m;
    const RawFrame& first = seq.frames.front();
    m.width = first.width;
    m.height = first.height;
    m.cfa = first.cfa;
    m.black_level = first.black_level;
    m.white_level = first.white_level;
    m.bit_depth = first.bit_depth;
    m.sharp_fps = seq.sharp_fps;
    m.per_frame_exposure_ms = seq.per_frame_exposure_ms;
    m.noise = provenance.noise;
    m.scene = provenance.scene;
    m.seed = provenance.seed;
    m.meta = seq.meta;
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        const std::string name = detail::frame_name(static_cast<int>(i));
        write_pgm(dir / name, clamp_quantize(seq.frames[i]));
        m.frame_files.push_back(name);
    }
    detail::save_json_file(dir / "meta.json", to_json(m), "write_sequence");
    return m;
}

struct LoadedSequence {
    SharpRawSequence sequence;
    SequenceManifest manifest;
};

inline LoadedSequence read_sequence(const fs::path& dir) {
    const fs::path meta_path = dir / "meta.json";
    if (!fs::exists(meta_path))
        throw io_error("read_sequence: no meta.json in " + dir.string());
    SequenceManifest m =
        sequence_manifest_from_json(detail::load_json_file(meta_path, "sequence manifest"));
    LoadedSequence loaded;
    loaded.sequence.sharp_fps = m.sharp_fps;
    loaded.sequence.per_frame_exposure_ms = m.per_frame_exposure_ms;
    loaded.sequence.meta = m.meta;
    loaded.sequence.frames.reserve(m.frame_files.size());
    for (const auto& name : m.frame_files) {
        const fs::path frame_path = dir / name;
        if (!fs::exists(frame_path))
            throw io_error("read_sequence: missing frame file " + frame_path.string());
        RawFrame f = read_pgm(frame_path, m.cfa, m.black_level, m.white_level, m.bit_depth);
        if (f.width != m.width || f.height != m.height)
            throw io_error("read_sequence: geometry mismatch in " + frame_path.string());
        loaded.sequence.frames.push_back(std::move(f));
    }
    validate(loaded.sequence);
    loaded.manifest = std::move(m);
    return loaded;
}

// ---------------------------------------------------------------------------
// Dataset manifests

struct DatasetPairEntry {
    std::string blurry_file;
    std::string sharp_file;
    int window_start = 0;
};

struct DatasetManifest {
    int schema_version = kDatasetSchemaVersion;
    std::string source_sequence;
    BlurVideoParams params;
    FormationSpace space = FormationSpace::Raw;
    IspConfig isp;
    std::optional<std::string> isp_preset;
    std::optional<NoiseParams> noise;
    NoiseInjection injection = NoiseInjection::Residual;
    std::uint64_t seed = 0;
    int window_offset = 0;
    std::vector<DatasetPairEntry> pairs;
};

inline json to_json(const DatasetManifest& m) {
    json pairs = json::array();
    for (const auto& p : m.pairs)
        pairs.push_back(json{{"blurry", p.blurry_file},
                             {"sharp", p.sharp_file},
                             {"window_start", p.window_start}});
    json j;
    j["schema_version"] = m.schema_version;
    j["source_sequence"] = m.source_sequence;
    j["T"] = m.params.period;
    j["tau"] = m.params.exposure;
    j["space"] = to_string(m.space);
    j["isp"] = to_json(m.isp);
    j["isp_preset"] = m.isp_preset ? json(*m.isp_preset) : json(nullptr);
    j["noise"] = m.noise ? to_json(*m.noise) : json(nullptr);
    j["noise_injection"] = to_string(m.injection);
    j["seed"] = m.seed;
    j["window_offset"] = m.window_offset;
    j["pairs"] = pairs;
    return j;
}

inline DatasetManifest dataset_manifest_from_json(const json& j) {
    detail::check_fields(j, "dataset manifest",
                         {"schema_version", "source_sequence", "T", "tau", "space", "isp",
                          "isp_preset", "noise", "noise_injection", "seed", "window_offset",
                          "pairs"});
    DatasetManifest m;
    m.schema_version = detail::get_field<int>(j, "dataset manifest", "schema_version");
    if (m.schema_version != kDatasetSchemaVersion)
        throw io_error("dataset manifest: unsupported schema_version");
    m.source_sequence = detail::get_field<std::string>(j, "dataset manifest", "source_sequence");
    m.params.period = detail::get_field<int>(j, "dataset manifest", "T");
    m.params.exposure = detail::get_field<int>(j, "dataset manifest", "tau");
    const auto space_name = detail::get_field<std::string>(j, "dataset manifest", "space");
    const auto space = formation_space_from_string(space_name);
    if (!space) throw io_error("dataset manifest: unknown space '" + space_name + "'");
    m.space = *space;
    m.isp = isp_from_json(j.at("isp"));
    if (!j.at("isp_preset").is_null())
        m.isp_preset = detail::get_field<std::string>(j, "dataset manifest", "isp_preset");
    if (!j.at("noise").is_null()) m.noise = noise_from_json(j.at("noise"));
    const auto injection = detail::get_field<std::string>(j, "dataset manifest", "noise_injection");
    if (injection == "residual")
        m.injection = NoiseInjection::Residual;
    else if (injection == "full")
        m.injection = NoiseInjection::Full;
    else
        throw io_error("dataset manifest: unknown noise_injection '" + injection + "'");
    m.seed = detail::get_field<std::uint64_t>(j, "dataset manifest", "seed");
    m.window_offset = detail::get_field<int>(j, "dataset manifest", "window_offset");
    for (const auto& p : j.at("pairs")) {
        detail::check_fields(p, "dataset pair", {"blurry", "sharp", "window_start"});
        m.pairs.push_back({detail::get_field<std::string>(p, "dataset pair", "blurry"),
                           detail::get_field<std::string>(p, "dataset pair", "sharp"),
                           detail::get_field<int>(p, "dataset pair", "window_start")});
    }
    try {
        validate(m.params);
    } catch (const std::invalid_argument& e) {
        throw io_error(std::string("dataset manifest: ") + e.what());
    }
    return m;
}

inline void write_dataset_manifest(const fs::path& dir, const DatasetManifest& m) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("write_dataset_manifest: cannot create " + dir.string());
    detail::save_json_file(dir / "dataset.json", to_json(m), "write_dataset_manifest");
}

inline DatasetManifest read_dataset_manifest(const fs::path& dir) {
    const fs::path path = dir / "dataset.json";
    if (!fs::exists(path))
        throw io_error("read_dataset_manifest: no dataset.json in " + dir.string());
    return dataset_manifest_from_json(detail::load_json_file(path, "dataset manifest"));
}

// Writes one pair's images (blur_%06d.ppm / sharp_%06d.ppm, index = current
// pair count) and appends its manifest row. dataset.json must already exist.
inline std::pair<fs::path, fs::path> write_pair(const BlurPair& pair, const fs::path& dir) {
    DatasetManifest m = read_dataset_manifest(dir);
    const int index = static_cast<int>(m.pairs.size());
    const std::string blur_name = detail::pair_name("blur", index);
    const std::string sharp_name = detail::pair_name("sharp", index);
    write_ppm(dir / blur_name, pair.blurry);
    write_ppm(dir / sharp_name, pair.sharp);
    m.pairs.push_back({blur_name, sharp_name, pair.window.start});
    write_dataset_manifest(dir, m);
    return {dir / blur_name, dir / sharp_name};
}

// ---------------------------------------------------------------------------
// Noise fit and metric reports

inline json to_json(const NoiseFit& fit) {
    json levels = json::array();
    for (const auto& l : fit.levels)
        levels.push_back(json{{"mean", l.mean}, {"variance", l.variance}});
    return json{{"schema_version", kConfigSchemaVersion},
                {"a", fit.params.a},
                {"b", fit.params.b},
                {"levels", levels},
                {"rms_residual", fit.rms_residual}};
}

inline json to_json(const MetricReport& report) {
    auto number_or_inf = [](double v) {
        return std::isinf(v) ? json("inf") : json(v);
    };
    json pairs = json::array();
    for (const auto& p : report.pairs)
        pairs.push_back(
            json{{"name", p.name}, {"psnr", number_or_inf(p.psnr)}, {"ssim", p.ssim}});
    return json{{"schema_version", kConfigSchemaVersion},
                {"pairs", pairs},
                {"mean_psnr", number_or_inf(report.mean_psnr)},
                {"mean_ssim", report.mean_ssim}};
}

// Sorted .ppm names in a directory; the unit metrics compare over.
inline std::vector<std::string> list_ppm_files(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw io_error("list_ppm_files: not a directory: " + dir.string());
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ppm")
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace blursynth

#endif
