/*
 * Copyright (C) 2026 The gigi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gigi/cubemap.hpp"
#include "gigi/error.hpp"
#include "gigi/metrics.hpp"
#include "gigi/optimize.hpp"
#include "gigi/oracle.hpp"
#include "gigi/parallel.hpp"
#include "gigi/pipeline.hpp"
#include "gigi/scene.hpp"
#include "gigi/tensor_io.hpp"
#include "gigi/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitInternal = 4;

// Records every file read by a command, keyed by path.
class Provenance {
public:
    void add(const fs::path& path) {
        if (fs::is_directory(path)) {
            std::vector<fs::path> files;
            for (const auto& entry : fs::recursive_directory_iterator(path)) {
                if (entry.is_regular_file()) files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) inputs_[f.generic_string()] = gigi::io::sha256_file(f);
        } else if (fs::is_regular_file(path)) {
            inputs_[path.generic_string()] = gigi::io::sha256_file(path);
        }
    }

    json record(const json& config) const {
        return {{"inputs", inputs_}, {"config", config}, {"version", gigi::kVersion}};
    }

private:
    std::map<std::string, std::string> inputs_;
};

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw gigi::IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void require_exists(const fs::path& path) {
    if (!fs::exists(path)) throw gigi::IoError("no such file or directory: " + path.string());
}

gigi::Image load_image(const fs::path& path) {
    require_exists(path);
    if (path.extension() == ".pfm") return gigi::io::load_pfm(path);
    return gigi::io::load_tensor(path);
}

// A scene file, or the name of a shipped preset.
gigi::scene::Scene resolve_scene(const std::string& arg, Provenance& prov) {
    if (fs::exists(arg)) {
        prov.add(arg);
        return gigi::scene::load_scene(arg);
    }
    const auto names = gigi::scene::preset_names();
    if (std::find(names.begin(), names.end(), arg) != names.end()) return gigi::scene::preset(arg);
    throw gigi::IoError("no such scene file or preset: " + arg);
}

std::pair<int, int> parse_size(const std::string& s) {
    int w = 0;
    int h = 0;
    char x = 0;
    std::istringstream in(s);
    if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || !in.eof() || w <= 0 || h <= 0) {
        throw gigi::ConfigError("size must look like WxH, got '" + s + "'");
    }
    return {w, h};
}

// Radiance map from a file or "preset:<name>[:height]".
gigi::Image resolve_radiance(const std::string& arg, Provenance& prov) {
    const std::string prefix = "preset:";
    if (arg.rfind(prefix, 0) == 0) {
        std::string name = arg.substr(prefix.size());
        int height = 64;
        if (const auto colon = name.find(':'); colon != std::string::npos) {
            height = std::stoi(name.substr(colon + 1));
            name = name.substr(0, colon);
        }
        return gigi::oracle::environment_preset(name, height);
    }
    prov.add(arg);
    return gigi::io::load_environment(arg);
}

std::string radiance_hash(const gigi::Image& env) {
    return gigi::io::sha256_bytes(gigi::io::encode_tensor(env));
}

struct PrefilterOutcome {
    gigi::ibl::EnvironmentSet set;
    bool cached = false;
};

// Prefilters `env`, reusing $GIGI_CACHE/<hash> when it holds a matching set.
PrefilterOutcome prefilter_cached(const gigi::Image& env, const gigi::ibl::PrefilterSettings& settings) {
    const std::string hash = radiance_hash(env);
    std::optional<fs::path> cache_dir;
    if (const char* root = std::getenv("GIGI_CACHE"); root && *root) cache_dir = fs::path(root) / hash.substr(0, 16);
    if (cache_dir && gigi::ibl::environment_cache_matches(*cache_dir, hash, settings)) {
        return {gigi::ibl::load_environment_set(*cache_dir), true};
    }
    PrefilterOutcome out{gigi::ibl::prefilter_environment(env, settings), false};
    if (cache_dir) gigi::ibl::store_environment_set(out.set, *cache_dir, hash, settings);
    return out;
}

// A prefiltered directory, or a raw map prefiltered on the fly.
gigi::ibl::EnvironmentSet resolve_environment(const std::string& arg, Provenance& prov) {
    if (fs::is_directory(arg)) {
        prov.add(arg);
        return gigi::ibl::load_environment_set(arg);
    }
    if (arg.rfind("preset:", 0) != 0) require_exists(arg);
    return prefilter_cached(resolve_radiance(arg, prov), {}).set;
}

void scale_environment(gigi::ibl::EnvironmentSet& env, float s) {
    if (s == 1.0f) return;
    env.radiance *= s;
    env.irradiance *= s;
    for (auto& mip : env.specular) mip *= s;
}

struct TracingFlags {
    int ns = 64;
    std::optional<double> t0;
    int steps = 32;
    std::optional<double> delta;
    std::string sampler = "fibonacci";

    void attach(CLI::App* cmd) {
        cmd->add_option("--ns", ns, "Hemisphere samples per pixel")->check(CLI::PositiveNumber);
        cmd->add_option("--t0", t0, "Base march step (default 0.01 of the depth range)");
        cmd->add_option("--steps", steps, "March steps per ray")->check(CLI::PositiveNumber);
        cmd->add_option("--delta", delta, "Depth thickness (default 8 t0)");
        cmd->add_option("--sampler", sampler, "fibonacci or stratified")
            ->check(CLI::IsMember({"fibonacci", "stratified"}));
    }

    gigi::TracingConfig build(const gigi::CameraIntrinsics& intr) const {
        gigi::TracingConfig cfg = gigi::TracingConfig::defaults(intr);
        if (t0) {
            cfg.t0 = *t0;
            cfg.thickness = 8.0 * *t0;
        }
        if (delta) cfg.thickness = *delta;
        cfg.max_steps = steps;
        if (sampler == "fibonacci") {
            cfg.sampler = gigi::FibonacciLattice{ns};
        } else {
            // Closest factorisation with n_phi >= n_theta.
            int n_theta = static_cast<int>(std::sqrt(static_cast<double>(ns)));
            while (ns % n_theta != 0) --n_theta;
            cfg.sampler = gigi::StratifiedSpherical{ns / n_theta, n_theta};
        }
        cfg.validate();
        return cfg;
    }

    json to_json(const gigi::TracingConfig& cfg) const {
        return {{"ns", cfg.sample_count()},
                {"sampler", sampler},
                {"t0", cfg.t0},
                {"steps", cfg.max_steps},
                {"delta", cfg.thickness}};
    }
};

std::optional<gigi::CubemapBundle> resolve_cubemap(const std::string& arg, Provenance& prov) {
    if (arg.empty() || arg == "none") return std::nullopt;
    require_exists(arg);
    prov.add(arg);
    return gigi::load_cubemap(arg);
}

gigi::GBuffer resolve_gbuffer(const std::string& dir, Provenance& prov) {
    require_exists(dir);
    prov.add(dir);
    return gigi::io::load_gbuffer(dir);
}

// Per-channel median of reference/estimate over masked pixels.
void rescale_albedo(gigi::MaterialMaps& mats, const gigi::Image& reference, const gigi::Image& mask) {
    gigi::require_same_extent(mats.albedo, reference, "albedo rescale reference");
    for (int c = 0; c < 3; ++c) {
        std::vector<double> ratios;
        for (int y = 0; y < mask.height(); ++y) {
            for (int x = 0; x < mask.width(); ++x) {
                const double est = mats.albedo.at(y, x, c);
                if (mask.at(y, x) > 0.5f && est > 1e-4) ratios.push_back(reference.at(y, x, c) / est);
            }
        }
        if (ratios.empty()) continue;
        std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2, ratios.end());
        const double s = ratios[ratios.size() / 2];
        for (int y = 0; y < mask.height(); ++y) {
            for (int x = 0; x < mask.width(); ++x) {
                float& v = mats.albedo.at(y, x, c);
                v = static_cast<float>(std::clamp(v * s, 0.0, 1.0));
            }
        }
    }
}

// Commands

struct SynthArgs {
    std::string scene;
    std::string pose;
    std::string size = "256x256";
    std::string out;
};

int run_synth(const SynthArgs& a) {
    Provenance prov;
    const auto sc = resolve_scene(a.scene, prov);
    gigi::scene::ViewSpec view;
    if (!a.pose.empty()) {
        require_exists(a.pose);
        prov.add(a.pose);
        view = gigi::scene::view_from_json(gigi::scene::parse_json_file(a.pose));
    } else if (sc.view) {
        view = *sc.view;
    } else {
        throw gigi::ConfigError("scene has no view; pass --pose");
    }
    const auto [w, h] = parse_size(a.size);
    const gigi::GBuffer gb = gigi::scene::synth_gbuffer(sc, view.pose(), view.intrinsics(w, h));
    gigi::io::store_gbuffer(gb, a.out);
    write_json(prov.record({{"command", "synth"},
                            {"scene", sc.name},
                            {"view", gigi::scene::to_json(view)},
                            {"width", w},
                            {"height", h}}),
               fs::path(a.out) / "provenance.json");
    std::cout << "wrote " << a.out << " (" << w << "x" << h << ")\n";
    return 0;
}

struct PrefilterArgs {
    std::string env;
    int mips = 5;
    int lut = 64;
    int irradiance = 32;
    int samples = gigi::ibl::kDefaultSpecularSamples;
    std::string out;
};

int run_prefilter(const PrefilterArgs& a) {
    Provenance prov;
    if (a.env.rfind("preset:", 0) != 0) require_exists(a.env);
    const gigi::Image env = resolve_radiance(a.env, prov);
    const gigi::ibl::PrefilterSettings settings{a.irradiance, a.mips, a.lut, a.samples};
    const std::string hash = radiance_hash(env);
    bool cached = gigi::ibl::environment_cache_matches(a.out, hash, settings);
    if (!cached) {
        const PrefilterOutcome pre = prefilter_cached(env, settings);
        gigi::ibl::store_environment_set(pre.set, a.out, hash, settings);
        cached = pre.cached;
    }
    write_json(prov.record({{"command", "prefilter"},
                            {"mips", a.mips},
                            {"lut", a.lut},
                            {"irradiance_height", a.irradiance},
                            {"samples", a.samples}}),
               fs::path(a.out) / "provenance.json");
    std::cout << (cached ? "cached " : "computed ") << a.out << " source_hash " << hash << "\n";
    return 0;
}

struct RenderArgs {
    std::string gbuffer;
    std::string env;
    float env_scale = 1.0f;
    std::string cubemap = "none";
    std::string out;
    TracingFlags tracing;
};

int run_render(const RenderArgs& a) {
    Provenance prov;
    const gigi::GBuffer gb = resolve_gbuffer(a.gbuffer, prov);
    auto env = resolve_environment(a.env, prov);
    scale_environment(env, a.env_scale);
    const auto cube = resolve_cubemap(a.cubemap, prov);
    const auto cfg = a.tracing.build(gb.intrinsics);
    gigi::RenderBundle bundle = gigi::render_view(gb, env, cfg, cube ? &*cube : nullptr);
    bundle.provenance = prov.record({{"command", "render"},
                                     {"tracing", a.tracing.to_json(cfg)},
                                     {"env_scale", a.env_scale},
                                     {"mode", cube ? "cubemap" : "screen"}});
    gigi::store_bundle(bundle, gb, a.out);
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

struct RelightArgs {
    std::string gbuffer;
    std::string materials;
    std::string env;
    float env_scale = 1.0f;
    std::string cubemap = "none";
    std::string rescale_albedo;
    std::string out;
    TracingFlags tracing;
};

int run_relight(const RelightArgs& a) {
    Provenance prov;
    const gigi::GBuffer gb = resolve_gbuffer(a.gbuffer, prov);
    require_exists(a.materials);
    prov.add(a.materials);
    gigi::MaterialMaps mats = gigi::io::load_materials(a.materials);
    if (!a.rescale_albedo.empty()) {
        require_exists(a.rescale_albedo);
        prov.add(a.rescale_albedo);
        rescale_albedo(mats, gigi::io::load_materials(a.rescale_albedo).albedo, gb.mask);
    }
    auto env = resolve_environment(a.env, prov);
    scale_environment(env, a.env_scale);
    const auto cube = resolve_cubemap(a.cubemap, prov);
    const auto cfg = a.tracing.build(gb.intrinsics);
    gigi::RenderBundle bundle = gigi::relight(gb, mats, env, cfg, cube ? &*cube : nullptr);
    bundle.provenance = prov.record({{"command", "relight"},
                                     {"tracing", a.tracing.to_json(cfg)},
                                     {"env_scale", a.env_scale},
                                     {"rescale_albedo", !a.rescale_albedo.empty()},
                                     {"mode", cube ? "cubemap" : "screen"}});
    gigi::store_bundle(bundle, gb, a.out);
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

struct OptimizeArgs {
    std::vector<std::string> gbuffers;
    std::vector<std::string> targets;
    std::string env_init;
    std::string init;
    int iters = 2000;
    std::string optimize_env = "off";
    bool fix_roughness = false;
    bool fix_metallic = false;
    int indirect_every = 50;
    std::string out;
    TracingFlags tracing;
};

int run_optimize(const OptimizeArgs& a) {
    if (a.gbuffers.size() != a.targets.size()) {
        throw gigi::ConfigError("optimize: need one --gt image per --gbuffer");
    }
    Provenance prov;
    std::vector<gigi::OptimizeView> views;
    std::vector<gigi::MaterialMaps> init;
    for (std::size_t i = 0; i < a.gbuffers.size(); ++i) {
        gigi::GBuffer gb = resolve_gbuffer(a.gbuffers[i], prov);
        prov.add(a.targets[i]);
        gigi::Image target = load_image(a.targets[i]);
        if (auto sc = gigi::io::load_sidecar(a.targets[i]); sc && sc->pose) {
            const double drift = (sc->pose->rotation - gb.pose.rotation).norm() +
                                 (sc->pose->translation - gb.pose.translation).norm();
            if (drift > 1e-6) throw gigi::ConfigError("optimize: pose of " + a.targets[i] + " differs from its G-buffer");
        }
        if (!a.init.empty()) {
            const fs::path dir = a.gbuffers.size() == 1 ? fs::path(a.init) : fs::path(a.init) / ("view_" + std::to_string(i));
            require_exists(dir);
            prov.add(dir);
            init.push_back(gigi::io::load_materials(dir));
        } else {
            init.push_back(gigi::MaterialMaps::uniform(gb.height(), gb.width(), 0.5f));
        }
        views.push_back({std::move(gb), std::move(target)});
    }
    const gigi::Image env_init = fs::is_directory(a.env_init)
                                     ? (prov.add(a.env_init), gigi::ibl::load_environment_set(a.env_init).radiance)
                                     : (a.env_init.rfind("preset:", 0) == 0 ? resolve_radiance(a.env_init, prov)
                                                                            : (require_exists(a.env_init),
                                                                               resolve_radiance(a.env_init, prov)));
    gigi::OptimizeConfig cfg;
    cfg.iterations = a.iters;
    cfg.optimize_env = a.optimize_env == "on";
    cfg.optimize_roughness = !a.fix_roughness;
    cfg.optimize_metallic = !a.fix_metallic;
    cfg.indirect_every = a.indirect_every;
    cfg.validate();
    const auto tracing = a.tracing.build(views.front().geometry.intrinsics);

    const gigi::OptimizeResult result = gigi::optimize_materials(views, env_init, tracing, cfg, &init);

    const fs::path out(a.out);
    fs::create_directories(out);
    for (std::size_t i = 0; i < result.materials.size(); ++i) {
        const fs::path dir = views.size() == 1 ? out / "materials" : out / ("view_" + std::to_string(i)) / "materials";
        gigi::io::store_materials(result.materials[i], dir);
    }
    gigi::io::store_map(result.env, out / "env.gigt", "environment");
    gigi::write_loss_csv(result, out / "loss.csv");
    write_json(prov.record({{"command", "optimize"},
                            {"iterations", cfg.iterations},
                            {"optimize_env", cfg.optimize_env},
                            {"optimize_roughness", cfg.optimize_roughness},
                            {"optimize_metallic", cfg.optimize_metallic},
                            {"indirect_every", cfg.indirect_every},
                            {"lr", {cfg.lr_initial, cfg.lr_final}},
                            {"weights",
                             {{"material_tv", cfg.weights.material_tv},
                              {"light_tv", cfg.weights.light_tv},
                              {"normal_tv", cfg.weights.normal_tv}}},
                            {"tracing", a.tracing.to_json(tracing)}}),
               out / "provenance.json");
    const auto& last = result.trace.back();
    std::cout << "iterations " << cfg.iterations << " final_loss " << last.total << "\n";
    return 0;
}

struct DiffArgs {
    std::string a;
    std::string b;
    std::string metrics = "psnr,ssim,mae";
    std::string mask;
    bool linear = false;
};

int run_diff(const DiffArgs& d) {
    const gigi::Image a = load_image(d.a);
    const gigi::Image b = load_image(d.b);
    if (!a.same_shape(b)) throw gigi::DimensionError("diff: images differ in shape");
    std::optional<gigi::Image> mask;
    if (!d.mask.empty()) mask = load_image(d.mask);
    const gigi::Image* m = mask ? &*mask : nullptr;
    std::istringstream names(d.metrics);
    std::string name;
    while (std::getline(names, name, ',')) {
        double v = 0.0;
        if (name == "psnr") {
            v = gigi::psnr(a, b, d.linear, m);
        } else if (name == "ssim") {
            if (m) throw gigi::ConfigError("diff: ssim does not take a mask");
            v = gigi::ssim(a, b, d.linear);
        } else if (name == "mae") {
            v = d.linear ? gigi::mae(a, b, m)
                         : gigi::mae(gigi::tonemap(a, gigi::Tonemap::Gamma22), gigi::tonemap(b, gigi::Tonemap::Gamma22), m);
        } else if (name == "mse") {
            v = d.linear ? gigi::mse(a, b, m)
                         : gigi::mse(gigi::tonemap(a, gigi::Tonemap::Gamma22), gigi::tonemap(b, gigi::Tonemap::Gamma22), m);
        } else {
            throw gigi::ConfigError("diff: unknown metric '" + name + "'");
        }
        std::cout << name << " " << gigi::format_metric(v) << "\n";
    }
    return 0;
}

struct ExportArgs {
    std::string in;
    std::string out;
    std::string tonemap = "gamma22";
};

int run_export(const ExportArgs& e) {
    gigi::export_png(load_image(e.in), e.out, gigi::parse_tonemap(e.tonemap));
    std::cout << "wrote " << e.out << "\n";
    return 0;
}

struct CubemapArgs {
    std::string scene;
    std::string pose;
    int size = 128;
    std::string env;
    std::string out;
};

int run_cubemap(const CubemapArgs& a) {
    Provenance prov;
    const auto sc = resolve_scene(a.scene, prov);
    gigi::scene::ViewSpec view;
    if (!a.pose.empty()) {
        require_exists(a.pose);
        prov.add(a.pose);
        view = gigi::scene::view_from_json(gigi::scene::parse_json_file(a.pose));
    } else if (sc.view) {
        view = *sc.view;
    } else {
        throw gigi::ConfigError("scene has no view; pass --pose");
    }
    const auto env = resolve_environment(a.env, prov);
    const auto cube = gigi::build_cubemap(sc, view.pose(), a.size, view.z_near, view.z_far, env);
    gigi::store_cubemap(cube, a.out);
    write_json(prov.record({{"command", "cubemap"}, {"scene", sc.name}, {"view", gigi::scene::to_json(view)}, {"size", a.size}}),
               fs::path(a.out) / "provenance.json");
    std::cout << "wrote " << a.out << "\n";
    return 0;
}

int exit_code(const gigi::Error& e) {
    return e.kind() == gigi::ErrorKind::Divergence ? kExitDivergence : kExitInput;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Screen-space inverse rendering toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", gigi::kVersion);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);

    SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth", "Ray-cast a G-buffer from an analytic scene");
    c_synth->add_option("--scene", synth.scene, "Scene JSON or preset name")->required();
    c_synth->add_option("--pose", synth.pose, "View JSON (defaults to the scene view)");
    c_synth->add_option("--size", synth.size, "WxH");
    c_synth->add_option("--out", synth.out)->required();

    PrefilterArgs pre;
    auto* c_pre = app.add_subcommand("prefilter", "Prefilter an environment map");
    c_pre->add_option("--env", pre.env, "PFM or GIGT map, or preset:<name>[:height]")->required();
    c_pre->add_option("--mips", pre.mips)->check(CLI::Range(2, 16));
    c_pre->add_option("--lut", pre.lut)->check(CLI::Range(2, 4096));
    c_pre->add_option("--irradiance", pre.irradiance, "Irradiance map height")->check(CLI::Range(1, 4096));
    c_pre->add_option("--samples", pre.samples, "Specular samples per texel")->check(CLI::PositiveNumber);
    c_pre->add_option("--out", pre.out)->required();

    RenderArgs render;
    auto* c_render = app.add_subcommand("render", "Render direct, occlusion and indirect maps");
    c_render->add_option("--gbuffer", render.gbuffer)->required();
    c_render->add_option("--env", render.env, "Prefiltered directory or raw map")->required();
    c_render->add_option("--env-scale", render.env_scale);
    c_render->add_option("--cubemap", render.cubemap, "Cubemap directory or none");
    c_render->add_option("--out", render.out)->required();
    render.tracing.attach(c_render);

    RelightArgs rel;
    auto* c_rel = app.add_subcommand("relight", "Render recovered materials under new lighting");
    c_rel->add_option("--gbuffer", rel.gbuffer)->required();
    c_rel->add_option("--materials", rel.materials)->required();
    c_rel->add_option("--env", rel.env)->required();
    c_rel->add_option("--env-scale", rel.env_scale);
    c_rel->add_option("--cubemap", rel.cubemap);
    c_rel->add_option("--rescale-albedo", rel.rescale_albedo, "Materials directory whose albedo sets the per-channel scale");
    c_rel->add_option("--out", rel.out)->required();
    rel.tracing.attach(c_rel);

    OptimizeArgs opt;
    auto* c_opt = app.add_subcommand("optimize", "Recover materials (and optionally lighting) from images");
    c_opt->add_option("--gbuffer", opt.gbuffers, "G-buffer directory, one per view")->required();
    c_opt->add_option("--gt", opt.targets, "Target image per view; its sidecar pose must match")->required();
    c_opt->add_option("--env-init", opt.env_init)->required();
    c_opt->add_option("--init", opt.init, "Initial materials (default 0.5 everywhere)");
    c_opt->add_option("--iters", opt.iters)->check(CLI::NonNegativeNumber);
    c_opt->add_option("--optimize-env", opt.optimize_env)->check(CLI::IsMember({"on", "off"}));
    c_opt->add_flag("--fix-roughness", opt.fix_roughness);
    c_opt->add_flag("--fix-metallic", opt.fix_metallic);
    c_opt->add_option("--indirect-every", opt.indirect_every)->check(CLI::PositiveNumber);
    c_opt->add_option("--out", opt.out)->required();
    opt.tracing.attach(c_opt);

    DiffArgs diff;
    auto* c_diff = app.add_subcommand("diff", "Compare two images");
    c_diff->add_option("--a", diff.a)->required();
    c_diff->add_option("--b", diff.b)->required();
    c_diff->add_option("--metrics", diff.metrics, "Comma list of psnr, ssim, mae, mse");
    c_diff->add_option("--mask", diff.mask);
    c_diff->add_flag("--linear", diff.linear, "Skip the gamma 2.2 tonemap");

    ExportArgs exp;
    auto* c_exp = app.add_subcommand("export", "Write a map as an 8-bit PNG");
    c_exp->add_option("--in", exp.in)->required();
    c_exp->add_option("--out", exp.out)->required();
    c_exp->add_option("--tonemap", exp.tonemap)->check(CLI::IsMember({"gamma22", "reinhard", "none"}));

    CubemapArgs cube;
    auto* c_cube = app.add_subcommand("cubemap", "Render six G-buffer faces around the scene view");
    c_cube->add_option("--scene", cube.scene)->required();
    c_cube->add_option("--pose", cube.pose);
    c_cube->add_option("--size", cube.size)->check(CLI::Range(64, 4096));
    c_cube->add_option("--env", cube.env)->required();
    c_cube->add_option("--out", cube.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (threads > 0) gigi::set_thread_count(threads);
        if (*c_synth) return run_synth(synth);
        if (*c_pre) return run_prefilter(pre);
        if (*c_render) return run_render(render);
        if (*c_rel) return run_relight(rel);
        if (*c_opt) return run_optimize(opt);
        if (*c_diff) return run_diff(diff);
        if (*c_exp) return run_export(exp);
        if (*c_cube) return run_cubemap(cube);
    } catch (const gigi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
