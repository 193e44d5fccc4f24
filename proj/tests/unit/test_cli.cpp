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

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gigi/tensor_io.hpp"
#include "support.hpp"

using namespace gigi;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run gigi_cli(const std::string& args) {
    const std::string cmd = std::string(GIGI_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 512> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

Image load(const fs::path& p) { return io::load_tensor(p); }

// Value printed for `name` by the diff command.
double metric(const std::string& out, const std::string& name) {
    std::istringstream in(out);
    std::string key, value;
    while (in >> key >> value) {
        if (key == name) return value == "inf" ? std::numeric_limits<double>::infinity() : std::stod(value);
    }
    FAIL("metric " << name << " missing from: " << out);
    return 0.0;
}

int count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) ++n;
    return n;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("synth writes a G-buffer set with provenance") {
    testing::TempDir dir("cli_synth");
    const Run r = gigi_cli("synth --scene plane --size 32x24 --out " + q(dir / "gb"));
    REQUIRE(r.code == 0);
    for (const char* name : {"depth", "normal", "albedo", "roughness", "metallic"}) {
        CHECK(fs::exists(dir / "gb" / (std::string(name) + ".gigt")));
        CHECK(fs::exists(dir / "gb" / (std::string(name) + ".json")));
    }
    const auto prov = nlohmann::json::parse(std::ifstream(dir / "gb" / "provenance.json"));
    CHECK(prov.contains("inputs"));
    CHECK(prov.contains("config"));
    CHECK(prov.contains("version"));
    const GBuffer gb = io::load_gbuffer(dir / "gb");
    CHECK(gb.width() == 32);
    CHECK(gb.height() == 24);

    const auto t0 = std::chrono::steady_clock::now();
    CHECK(gigi_cli("synth --scene corner90 --size 256x256 --out " + q(dir / "corner")).code == 0);
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 5.0);

    std::ofstream(dir / "bad.json") << "{\"primitives\": [\n  {\"type\": ,}\n]}";
    const Run bad = gigi_cli("synth --scene " + q(dir / "bad.json") + " --out " + q(dir / "x"));
    CHECK(bad.code == 2);
    CHECK(bad.out.find("bad.json:2:") != std::string::npos);
    CHECK(gigi_cli("synth --scene " + q(dir / "none.json") + " --out " + q(dir / "x")).code == 2);
    CHECK(gigi_cli("synth --scene plane --size 0x3 --out " + q(dir / "x")).code == 2);
    CHECK(gigi_cli("synth --scene plane --bogus --out " + q(dir / "x")).code == 2);
}

TEST_CASE("prefilter checks, caches and rejects missing input") {
    testing::TempDir dir("cli_pre");
    Run r = gigi_cli("prefilter --env preset:constant:16 --samples 64 --out " + q(dir / "env"));
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("computed", 0) == 0);
    const Image irr = load(dir / "env" / "irradiance.gigt");
    for (float v : irr.data()) CHECK(v == doctest::Approx(kPi).epsilon(1e-3));
    const auto stamp = fs::last_write_time(dir / "env" / "irradiance.gigt");
    r = gigi_cli("prefilter --env preset:constant:16 --samples 64 --out " + q(dir / "env"));
    CHECK(r.code == 0);
    CHECK(r.out.rfind("cached", 0) == 0);
    CHECK(fs::last_write_time(dir / "env" / "irradiance.gigt") == stamp);
    CHECK(gigi_cli("prefilter --env " + q(dir / "missing.pfm") + " --out " + q(dir / "e2")).code == 2);
}

TEST_CASE("render, relight, diff and export") {
    testing::TempDir dir("cli_render");
    REQUIRE(gigi_cli("synth --scene plane --size 48x48 --out " + q(dir / "gb")).code == 0);
    REQUIRE(gigi_cli("prefilter --env preset:constant:16 --out " + q(dir / "env")).code == 0);
    REQUIRE(gigi_cli("render --gbuffer " + q(dir / "gb") + " --env " + q(dir / "env") + " --out " + q(dir / "r")).code == 0);

    // White diffuse-rough plane under unit light against the brute-force shader.
    const GBuffer gb = io::load_gbuffer(dir / "gb");
    const Image comp = load(dir / "r" / "composite.gigt");
    const Image occ = load(dir / "r" / "occlusion.gigt");
    const Image unit = oracle::constant_environment(16, Vec3::Ones());
    double worst = 0.0;
    for (int y = 4; y < 44; y += 8) {
        for (int x = 4; x < 44; x += 8) {
            const auto f = ibl::pixel_frame(gb, y, x);
            const Vec3 ref = oracle::mc_direct(unit, f.normal, f.to_camera, ibl::material_at(gb, y, x), 40000);
            worst = std::max(worst, std::abs(comp.at(y, x, 0) / ref.x() - 1.0));
            CHECK(occ.at(y, x) == 1.0f);
        }
    }
    CHECK(worst < 0.03);

    REQUIRE(gigi_cli("relight --gbuffer " + q(dir / "gb") + " --materials " + q(dir / "gb") + " --env " + q(dir / "env") +
                     " --out " + q(dir / "same")).code == 0);
    CHECK(bitwise_equal(load(dir / "same" / "composite.gigt"), comp));
    REQUIRE(gigi_cli("relight --gbuffer " + q(dir / "gb") + " --materials " + q(dir / "gb") + " --env " + q(dir / "env") +
                     " --env-scale 2 --out " + q(dir / "double")).code == 0);
    Image twice = comp;
    twice *= 2.0f;
    CHECK(bitwise_equal(load(dir / "double" / "composite.gigt"), twice));
    CHECK(bitwise_equal(load(dir / "double" / "occlusion.gigt"), occ));

    io::store_tensor(Image(16, 16, 3, 0.25f), dir / "a.gigt");
    io::store_tensor(Image(16, 16, 3, 0.35f), dir / "b.gigt");
    Run r = gigi_cli("diff --a " + q(dir / "a.gigt") + " --b " + q(dir / "a.gigt") + " --metrics psnr,ssim");
    CHECK(r.code == 0);
    CHECK(r.out.find("psnr inf") != std::string::npos);
    CHECK(metric(r.out, "ssim") == doctest::Approx(1.0));
    r = gigi_cli("diff --linear --a " + q(dir / "a.gigt") + " --b " + q(dir / "b.gigt") + " --metrics psnr,mae");
    CHECK(metric(r.out, "psnr") == doctest::Approx(20.0).epsilon(1e-5));
    CHECK(metric(r.out, "mae") == doctest::Approx(0.1).epsilon(1e-5));
    CHECK(gigi_cli("diff --a " + q(dir / "a.gigt") + " --b " + q(dir / "gb" / "depth.gigt")).code == 2);

    CHECK(gigi_cli("export --in " + q(dir / "r" / "composite.gigt") + " --tonemap reinhard --out " + q(dir / "c.png")).code == 0);
    CHECK(fs::file_size(dir / "c.png") > 0);
}

TEST_CASE("sample count and cubemap flags") {
    testing::TempDir dir("cli_ns");
    REQUIRE(gigi_cli("synth --scene corner90 --size 64x64 --out " + q(dir / "gb")).code == 0);
    const std::string common = "render --gbuffer " + q(dir / "gb") + " --env preset:sky:16 ";
    REQUIRE(gigi_cli(common + "--ns 16 --out " + q(dir / "n16")).code == 0);
    REQUIRE(gigi_cli(common + "--ns 256 --out " + q(dir / "n256")).code == 0);
    const Image o16 = load(dir / "n16" / "occlusion.gigt");
    const Image o256 = load(dir / "n256" / "occlusion.gigt");
    CHECK_FALSE(bitwise_equal(o16, o256));

    const auto sc = scene::preset("corner90");
    const GBuffer gb = io::load_gbuffer(dir / "gb");
    const TracingConfig cfg = TracingConfig::defaults(gb.intrinsics);
    double e16 = 0.0, e256 = 0.0;
    for (int y = 2; y < 62; y += 4) {
        for (int x = 2; x < 62; x += 4) {
            if (!gb.masked(y, x)) continue;
            const auto s = oracle::pixel_surface(sc, gb.pose, gb.intrinsics, x, y);
            const double ref = oracle::mc_occlusion(sc, s->point, s->normal, 10000,
                                                    oracle::screen_horizon(gb.depth.at(y, x), cfg, gb.intrinsics));
            e16 += std::abs(o16.at(y, x) - ref);
            e256 += std::abs(o256.at(y, x) - ref);
        }
    }
    CHECK(e256 < e16);

    REQUIRE(gigi_cli("synth --scene box_with_offscreen_wall --size 48x48 --out " + q(dir / "wall")).code == 0);
    REQUIRE(gigi_cli("cubemap --scene box_with_offscreen_wall --size 64 --env preset:sky:16 --out " + q(dir / "cube")).code == 0);
    const std::string wall = "render --gbuffer " + q(dir / "wall") + " --env preset:sky:16 ";
    REQUIRE(gigi_cli(wall + "--out " + q(dir / "screen")).code == 0);
    REQUIRE(gigi_cli(wall + "--cubemap " + q(dir / "cube") + " --out " + q(dir / "world")).code == 0);
    const double mad = testing::mean_abs(load(dir / "screen" / "occlusion.gigt"), load(dir / "world" / "occlusion.gigt"));
    CHECK(mad > 0.01);
}

TEST_CASE("optimize echoes its initialisation and writes the loss trace") {
    testing::TempDir dir("cli_opt");
    REQUIRE(gigi_cli("synth --scene box_interior --size 32x32 --out " + q(dir / "gb")).code == 0);
    REQUIRE(gigi_cli("render --gbuffer " + q(dir / "gb") + " --env preset:sky:16 --out " + q(dir / "r")).code == 0);
    const std::string base = "optimize --gbuffer " + q(dir / "gb") + " --gt " + q(dir / "r" / "composite.gigt") +
                             " --env-init preset:sky:16 ";
    REQUIRE(gigi_cli(base + "--iters 0 --out " + q(dir / "o0")).code == 0);
    CHECK(bitwise_equal(load(dir / "o0" / "materials" / "albedo.gigt"), Image(32, 32, 3, 0.5f)));
    CHECK(count_lines(dir / "o0" / "loss.csv") == 2);
    REQUIRE(gigi_cli(base + "--iters 5 --out " + q(dir / "o5")).code == 0);
    CHECK(count_lines(dir / "o5" / "loss.csv") == 7);

    Image bad = load(dir / "r" / "composite.gigt");
    bad.at(16, 16, 1) = std::numeric_limits<float>::infinity();
    const auto side = io::load_sidecar(dir / "r" / "composite.gigt");
    io::store_map(bad, dir / "bad.gigt", "composite", side->intrinsics, side->pose);
    CHECK(gigi_cli("optimize --gbuffer " + q(dir / "gb") + " --gt " + q(dir / "bad.gigt") +
                   " --env-init preset:sky:16 --iters 2 --out " + q(dir / "ob")).code == 3);
}

TEST_CASE("thread count does not change outputs") {
    testing::TempDir dir("cli_threads");
    REQUIRE(gigi_cli("synth --scene sphere_on_plane --size 40x40 --out " + q(dir / "gb")).code == 0);
    std::vector<Image> outs;
    for (int t : {1, 4, 8}) {
        const fs::path out = dir / ("t" + std::to_string(t));
        REQUIRE(gigi_cli("--threads " + std::to_string(t) + " render --gbuffer " + q(dir / "gb") +
                         " --env preset:sky:16 --out " + q(out)).code == 0);
        outs.push_back(load(out / "composite.gigt"));
    }
    CHECK(bitwise_equal(outs[0], outs[1]));
    CHECK(bitwise_equal(outs[0], outs[2]));
}

}
