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

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blursynth/blursynth.hpp"

namespace fs = std::filesystem;
using namespace blursynth;

namespace {

// Exit codes: 0 success, 1 usage error, 2 data/format error.
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct command_error {
    int code;
    std::string message;
};

struct GlobalFlags {
    std::uint64_t seed = 0;
    int threads = 1;
    bool quiet = false;
};

void echo_config(const GlobalFlags& g, const std::string& line) {
    if (!g.quiet) std::cout << "config: " << line << " seed=" << g.seed
                            << " threads=" << g.threads << '\n';
}

NoiseParams parse_noise_literal(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw command_error{kExitUsage, "--noise expects 'a,b' or 'from-meta', got '" + text + "'"};
    try {
        NoiseParams p{std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
        validate(p);
        return p;
    } catch (const command_error&) {
        throw;
    } catch (const std::exception& e) {
        throw command_error{kExitUsage, std::string("--noise: ") + e.what()};
    }
}

// --- gen-scene -------------------------------------------------------------

struct GenSceneArgs {
    std::string config_path;
    int frames = 0;
    double fps = 0.0;
    std::string out_dir;
};

int run_gen_scene(const GenSceneArgs& args, const GlobalFlags& g) {
    SceneFile config = read_scene_file(args.config_path);
    echo_config(g, "gen-scene config=" + args.config_path + " frames=" +
                       std::to_string(args.frames) + " fps=" + std::to_string(args.fps) +
                       " out=" + args.out_dir);
    SharpRawSequence seq =
        gen_sequence(config.scene, config.sensor, args.fps, args.frames, g.seed, g.threads);
    SequenceProvenance provenance;
    if (!config.sensor.noise.is_zero()) provenance.noise = config.sensor.noise;
    provenance.scene = to_json(config);
    provenance.seed = g.seed;
    write_sequence(seq, args.out_dir, provenance);
    if (!g.quiet)
        std::cout << "wrote " << seq.frames.size() << " frames ("
                  << seq.frames.front().width << "x" << seq.frames.front().height << " @ "
                  << args.fps << " fps) to " << args.out_dir << '\n';
    return 0;
}

// --- synthesize ------------------------------------------------------------

struct SynthesizeArgs {
    std::string in_dir;
    std::string space_name = "raw";
    int period = 0;
    int exposure = 0;
    std::string isp_name = "preset-a";
    std::string noise_spec;  // "a,b" | "from-meta" | empty
    std::string crf_model;   // "identity" | "srgb" | "power:<gamma>" | empty
    std::string injection = "residual";
    int offset = 0;
    std::string out_dir;
};

int run_synthesize(const SynthesizeArgs& args, const GlobalFlags& g) {
    const auto space = formation_space_from_string(args.space_name);
    if (!space) throw command_error{kExitUsage, "unknown --space '" + args.space_name + "'"};
    if (args.exposure > args.period)
        throw command_error{kExitUsage, "--tau must not exceed --T"};
    if (args.exposure < 1 || args.period < 1)
        throw command_error{kExitUsage, "--T and --tau must be >= 1"};
    if (args.offset < 0) throw command_error{kExitUsage, "--offset must be >= 0"};

    IspConfig isp;
    std::optional<std::string> preset_name;
    if (auto preset = isp_preset_by_name(args.isp_name)) {
        isp = *preset;
        preset_name = args.isp_name;
    } else {
        isp = read_isp_file(args.isp_name);
    }

    SynthesisOptions opts;
    opts.threads = g.threads;
    opts.window_offset = args.offset;
    if (args.injection == "full")
        opts.injection = NoiseInjection::Full;
    else if (args.injection != "residual")
        throw command_error{kExitUsage, "--noise-injection must be residual or full"};
    if (!args.crf_model.empty()) {
        const auto crf = crf_from_string(args.crf_model);
        if (!crf) throw command_error{kExitUsage, "bad --crf-model '" + args.crf_model + "'"};
        opts.linearization_crf = crf;
    }

    LoadedSequence loaded = read_sequence(args.in_dir);
    std::optional<NoiseParams> noise;
    if (args.noise_spec == "from-meta") {
        if (!loaded.manifest.noise)
            throw command_error{kExitData,
                                "--noise from-meta: sequence manifest carries no noise params"};
        noise = loaded.manifest.noise;
    } else if (!args.noise_spec.empty()) {
        noise = parse_noise_literal(args.noise_spec);
    }
    if (*space == FormationSpace::RawNoise && (!noise || noise->is_zero()))
        throw command_error{kExitUsage, "--space raw-noise requires --noise a,b or from-meta"};

    echo_config(g, "synthesize in=" + args.in_dir + " out=" + args.out_dir + " space=" +
                       args.space_name + " T=" + std::to_string(args.period) + " tau=" +
                       std::to_string(args.exposure) + " isp=" + args.isp_name + " noise=" +
                       (args.noise_spec.empty() ? "none" : args.noise_spec) + " injection=" +
                       args.injection + " crf-model=" +
                       (args.crf_model.empty() ? std::string("isp") : args.crf_model) +
                       " offset=" + std::to_string(args.offset));

    const BlurVideoParams params{args.period, args.exposure};
    const auto pairs = synthesize_dataset(loaded.sequence, params, *space, isp, noise, g.seed, opts);

    DatasetManifest manifest;
    manifest.source_sequence = args.in_dir;
    manifest.params = params;
    manifest.space = *space;
    manifest.isp = isp;
    manifest.isp_preset = preset_name;
    manifest.noise = *space == FormationSpace::RawNoise ? noise : std::nullopt;
    manifest.injection = opts.injection;
    manifest.seed = g.seed;
    manifest.window_offset = args.offset;
    write_dataset_manifest(args.out_dir, manifest);
    for (const auto& pair : pairs) write_pair(pair, args.out_dir);

    const VideoSummary summary = video_params_summary(params, loaded.sequence.sharp_fps);
    if (!g.quiet) {
        char line[160];
        std::snprintf(line, sizeof(line),
                      "synthesized %zu pairs: %.2f fps, %.2f ms exposure, duty cycle %.3f",
                      pairs.size(), summary.blurry_fps, summary.exposure_ms, summary.duty_cycle);
        std::cout << line << '\n';
    }
    return 0;
}

// --- estimate-noise ----------------------------------------------------------

struct EstimateNoiseArgs {
    std::vector<std::string> in_dirs;
    std::string out_path;
};

int run_estimate_noise(const EstimateNoiseArgs& args, const GlobalFlags& g) {
    if (args.in_dirs.size() < 3)
        throw command_error{kExitUsage, "estimate-noise needs >= 3 flat sequence directories"};
    std::string joined;
    for (const auto& d : args.in_dirs) joined += (joined.empty() ? "" : ",") + d;
    echo_config(g, "estimate-noise in=" + joined + " out=" + args.out_path);
    std::vector<std::vector<RawFrame>> flat_sets;
    for (const auto& dir : args.in_dirs)
        flat_sets.push_back(read_sequence(dir).sequence.frames);
    NoiseFit fit;
    try {
        fit = estimate_noise_fit(flat_sets);
    } catch (const std::invalid_argument& e) {
        throw command_error{kExitData, e.what()};
    }
    if (!args.out_path.empty())
        detail::save_json_file(args.out_path, to_json(fit), "estimate-noise");
    if (!g.quiet) {
        std::printf("%12s %14s\n", "mean", "variance");
        for (const auto& l : fit.levels) std::printf("%12.3f %14.5f\n", l.mean, l.variance);
    }
    std::printf("a=%.8g b=%.8g rms_residual=%.4g\n", fit.params.a, fit.params.b,
                fit.rms_residual);
    return 0;
}

// --- metrics -----------------------------------------------------------------

struct MetricsArgs {
    std::string ref_dir;
    std::string test_dir;
    std::string out_path;
};

int run_metrics(const MetricsArgs& args, const GlobalFlags& g) {
    echo_config(g, "metrics ref=" + args.ref_dir + " test=" + args.test_dir +
                       " out=" + (args.out_path.empty() ? "-" : args.out_path));
    const auto ref_names = list_ppm_files(args.ref_dir);
    const auto test_names = list_ppm_files(args.test_dir);
    if (ref_names.empty()) throw command_error{kExitData, "no .ppm files in " + args.ref_dir};
    if (ref_names != test_names)
        throw command_error{kExitData, "mismatched file lists between " + args.ref_dir + " and " +
                                           args.test_dir};
    std::vector<PairMetrics> pairs(ref_names.size());
    parallel_for(ref_names.size(), g.threads, [&](std::size_t i) {
        const RgbImage ref = read_ppm(fs::path(args.ref_dir) / ref_names[i]);
        const RgbImage test = read_ppm(fs::path(args.test_dir) / ref_names[i]);
        pairs[i] = {ref_names[i], psnr(ref, test), ssim(ref, test)};
    });
    const MetricReport report = make_report(std::move(pairs));
    auto print_row = [](const std::string& name, double p, double s) {
        if (std::isinf(p))
            std::printf("%-24s %10s %10.6f\n", name.c_str(), "inf", s);
        else
            std::printf("%-24s %10.4f %10.6f\n", name.c_str(), p, s);
    };
    std::printf("%-24s %10s %10s\n", "pair", "psnr(dB)", "ssim");
    for (const auto& p : report.pairs) print_row(p.name, p.psnr, p.ssim);
    print_row("mean", report.mean_psnr, report.mean_ssim);
    if (!args.out_path.empty())
        detail::save_json_file(args.out_path, to_json(report), "metrics");
    return 0;
}

// --- inspect -----------------------------------------------------------------

int run_inspect(const std::string& dir, const GlobalFlags& g) {
    echo_config(g, "inspect dir=" + dir);
    if (fs::exists(fs::path(dir) / "meta.json")) {
        const LoadedSequence loaded = read_sequence(dir);
        const auto& m = loaded.manifest;
        std::printf("sequence: %d frames, %dx%d %s, %d-bit, levels [%g, %g]\n",
                    static_cast<int>(m.frame_files.size()), m.width, m.height, to_string(m.cfa),
                    m.bit_depth, m.black_level, m.white_level);
        std::printf("timing: %.4g fps sharp, %.4g ms per-frame exposure\n", m.sharp_fps,
                    m.per_frame_exposure_ms);
        if (m.noise) std::printf("noise: a=%g b=%g\n", m.noise->a, m.noise->b);
        if (m.seed) std::printf("seed: %" PRIu64 "\n", *m.seed);
        return 0;
    }
    if (fs::exists(fs::path(dir) / "dataset.json")) {
        const DatasetManifest m = read_dataset_manifest(dir);
        std::printf("dataset: %d pairs, space=%s, T=%d tau=%d (duty %.3f), offset=%d\n",
                    static_cast<int>(m.pairs.size()), to_string(m.space), m.params.period,
                    m.params.exposure, m.params.duty_cycle(), m.window_offset);
        std::printf("source: %s\n", m.source_sequence.c_str());
        std::printf("isp: %s, crf=%s\n", m.isp_preset ? m.isp_preset->c_str() : "custom",
                    to_string(m.isp.crf).c_str());
        if (m.noise)
            std::printf("noise: a=%g b=%g (%s injection)\n", m.noise->a, m.noise->b,
                        to_string(m.injection));
        std::printf("seed: %" PRIu64 "\n", m.seed);
        return 0;
    }
    throw command_error{kExitData, "no meta.json or dataset.json in " + dir};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthesizes motion-blurred/sharp video pairs from high-frame-rate RAW sequences"};
    app.require_subcommand(1);
    GlobalFlags global;
    app.add_option("--seed", global.seed, "RNG seed (default 0)");
    app.add_option("--threads", global.threads, "worker threads; never affects output bytes")
        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", global.quiet, "suppress configuration echo and progress output");

    GenSceneArgs gen_args;
    auto* gen = app.add_subcommand("gen-scene", "render a procedural RAW sequence");
    gen->fallthrough();
    gen->add_option("--config", gen_args.config_path, "scene+sensor JSON config")->required();
    gen->add_option("--frames", gen_args.frames, "number of sharp frames")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--fps", gen_args.fps, "sharp-capture frame rate")
        ->required()
        ->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_args.out_dir, "output sequence directory")->required();

    SynthesizeArgs syn_args;
    auto* syn = app.add_subcommand("synthesize", "synthesize a blurry/sharp dataset");
    syn->fallthrough();
    syn->add_option("--in", syn_args.in_dir, "input sequence directory")->required();
    syn->add_option("--space", syn_args.space_name, "raw | raw-noise | rgb | rgb-crf")->required();
    syn->add_option("--T", syn_args.period, "frame period in sharp frames")->required();
    syn->add_option("--tau", syn_args.exposure, "exposure in sharp frames")->required();
    syn->add_option("--isp", syn_args.isp_name, "preset-a | preset-b | path to ISP JSON");
    syn->add_option("--noise", syn_args.noise_spec, "a,b | from-meta");
    syn->add_option("--crf-model", syn_args.crf_model,
                    "CRF for rgb-crf linearization: identity | srgb | power:<gamma> "
                    "(default: the ISP's own)");
    syn->add_option("--noise-injection", syn_args.injection, "residual | full");
    syn->add_option("--offset", syn_args.offset, "shift window starts by this many sharp frames");
    syn->add_option("--out", syn_args.out_dir, "output dataset directory")->required();

    EstimateNoiseArgs est_args;
    auto* est = app.add_subcommand("estimate-noise", "fit affine noise model from flat sequences");
    est->fallthrough();
    est->add_option("--in", est_args.in_dirs, "flat sequence directories (one per level)")
        ->required()
        ->expected(-1);
    est->add_option("--out", est_args.out_path, "output JSON path");

    MetricsArgs met_args;
    auto* met = app.add_subcommand("metrics", "PSNR/SSIM between matching image directories");
    met->fallthrough();
    met->add_option("--ref", met_args.ref_dir, "reference directory")->required();
    met->add_option("--test", met_args.test_dir, "test directory")->required();
    met->add_option("--out", met_args.out_path, "output JSON path");

    std::string inspect_dir;
    auto* ins = app.add_subcommand("inspect", "describe a sequence or dataset directory");
    ins->fallthrough();
    ins->add_option("dir", inspect_dir, "directory to inspect")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) return run_gen_scene(gen_args, global);
        if (syn->parsed()) return run_synthesize(syn_args, global);
        if (est->parsed()) return run_estimate_noise(est_args, global);
        if (met->parsed()) return run_metrics(met_args, global);
        if (ins->parsed()) return run_inspect(inspect_dir, global);
    } catch (const command_error& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.code;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
