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

#include <cmath>
#include <fstream>
#include <random>

#include "gigi/optimize.hpp"
#include "gigi/pipeline.hpp"
#include "support.hpp"

using namespace gigi;

namespace {

Vec3 pixel_value(const ibl::EnvironmentSet& env, const ibl::PixelFrame& f, const brdf::Material& m, double occ) {
    return ibl::combine_direct(ibl::lookup_direct(env, f.normal, f.to_camera, m.roughness), m, occ);
}

double rel_err(double analytic, double fd) { return std::abs(analytic - fd) / std::max(std::abs(fd), 1e-4); }

struct Fixture {
    GBuffer gb;
    MaterialMaps truth;
    TracingConfig cfg;
    Image target;
};

Fixture inverse_fixture(int size) {
    Fixture f;
    f.gb = testing::preset_gbuffer("box_interior", size);
    f.truth = MaterialMaps::from_gbuffer(f.gb);
    f.cfg = TracingConfig::defaults(f.gb.intrinsics);
    // Same prefilter settings as the optimizer, so the truth reproduces the target.
    f.target = render_view(f.gb, ibl::prefilter_environment(testing::sky_env().radiance, OptimizeConfig{}.prefilter), f.cfg)
                   .composite;
    return f;
}

} // namespace

TEST_SUITE("optimize") {

TEST_CASE("learning rate schedule endpoints") {
    OptimizeConfig cfg;
    CHECK(cfg.iterations == 2000);
    CHECK(cfg.learning_rate(0) == 0.05);
    CHECK(cfg.learning_rate(cfg.iterations) == 0.005);
    CHECK(cfg.learning_rate(1000) == doctest::Approx(0.05 * std::sqrt(0.1)).epsilon(1e-12));
    for (int i = 1; i <= cfg.iterations; ++i) CHECK_LE(cfg.learning_rate(i), cfg.learning_rate(i - 1));
}

TEST_CASE("config validation") {
    OptimizeConfig cfg;
    cfg.lr_final = 0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.iterations = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.indirect_every = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.weights.light_tv = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("direct gradients match central differences") {
    const GBuffer gb = testing::preset_gbuffer("box_interior", 48);
    const auto& env = testing::sky_env();
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> px(0, 47);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const double h = 1e-3;
    int checked = 0;
    double worst_a = 0.0, worst_m = 0.0, worst_r = 0.0;
    while (checked < 100) {
        const int y = px(rng), x = px(rng);
        if (!gb.masked(y, x)) continue;
        const ibl::PixelFrame f = ibl::pixel_frame(gb, y, x);
        const brdf::Material m{Vec3(u(rng), u(rng), u(rng)), u(rng), u(rng)};
        const double occ = u(rng);
        const DirectGradient g = grad_direct(ibl::lookup_direct(env, f.normal, f.to_camera, m.roughness), m, occ);
        for (int c = 0; c < 3; ++c) {
            brdf::Material p = m, q = m;
            p.albedo[c] += h;
            q.albedo[c] -= h;
            const double fd = (pixel_value(env, f, p, occ)[c] - pixel_value(env, f, q, occ)[c]) / (2 * h);
            worst_a = std::max(worst_a, rel_err(g.albedo[c], fd));
        }
        {
            brdf::Material p = m, q = m;
            p.metallic += h;
            q.metallic -= h;
            const Vec3 fd = (pixel_value(env, f, p, occ) - pixel_value(env, f, q, occ)) / (2 * h);
            for (int c = 0; c < 3; ++c) worst_m = std::max(worst_m, rel_err(g.metallic[c], fd[c]));
        }
        {
            auto at = [&](double dr) {
                brdf::Material p = m;
                p.roughness += dr;
                return pixel_value(env, f, p, occ);
            };
            const Vec3 v0 = at(0.0), vp = at(h), vq = at(-h), vpp = at(2 * h), vqq = at(-2 * h);
            for (int c = 0; c < 3; ++c) {
                // Piecewise lookups: next to a cell boundary the derivative is one-sided,
                // estimated with second-order one-sided differences.
                const double central = (vp[c] - vq[c]) / (2 * h);
                const double fwd = (-3 * v0[c] + 4 * vp[c] - vpp[c]) / (2 * h);
                const double bwd = (3 * v0[c] - 4 * vq[c] + vqq[c]) / (2 * h);
                worst_r = std::max(worst_r, std::min({rel_err(g.roughness[c], central), rel_err(g.roughness[c], fwd),
                                                      rel_err(g.roughness[c], bwd)}));
            }
        }
        ++checked;
    }
    CHECK(worst_a < 1e-3);
    CHECK(worst_m < 1e-3);
    CHECK(worst_r < 5e-3);
}

TEST_CASE("dielectric albedo gradient is the diffuse light") {
    const GBuffer gb = testing::preset_gbuffer("box_interior", 32);
    Image occ(32, 32, 1, 0.75f);
    GBuffer g0 = gb;
    g0.metallic.fill(0.0f);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            if (!g0.masked(y, x)) continue;
            const ibl::PixelFrame f = ibl::pixel_frame(g0, y, x);
            const auto lk = ibl::lookup_direct(testing::sky_env(), f.normal, f.to_camera, g0.roughness.at(y, x));
            const DirectGradient g = grad_direct(g0, testing::sky_env(), occ, y, x);
            CHECK((g.albedo - 0.75 * kInvPi * lk.irradiance).norm() < 1e-12);
        }
    }
    CHECK_THROWS_AS(grad_direct(g0, testing::sky_env(), occ, 0, 0), PreconditionError);
}

TEST_CASE("zero environment gives zero gradients") {
    const GBuffer gb = testing::preset_gbuffer("box_interior", 32);
    const auto env = testing::env_set(Image(16, 32, 3, 0.0f));
    const Image occ(32, 32, 1, 1.0f);
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            if (!gb.masked(y, x)) continue;
            const DirectGradient g = grad_direct(gb, env, occ, y, x);
            CHECK(g.albedo.norm() == 0.0);
            CHECK(g.metallic.norm() == 0.0);
            CHECK(g.roughness.norm() == 0.0);
        }
    }
}

TEST_CASE("zero iterations echo the initialisation") {
    const Fixture f = inverse_fixture(32);
    OptimizeConfig cfg;
    cfg.iterations = 0;
    std::vector<MaterialMaps> init{MaterialMaps::uniform(32, 32, 0.3f)};
    const auto r = optimize_materials({{f.gb, f.target}}, testing::sky_env().radiance, f.cfg, cfg, &init);
    REQUIRE(r.materials.size() == 1);
    CHECK(bitwise_equal(r.materials[0].albedo, init[0].albedo));
    CHECK(bitwise_equal(r.materials[0].roughness, init[0].roughness));
    CHECK(bitwise_equal(r.materials[0].metallic, init[0].metallic));
    CHECK(bitwise_equal(r.env, testing::sky_env().radiance));
    CHECK(r.trace.size() == 1);
    CHECK(r.trace[0].total > 0.0);

    testing::TempDir dir("loss");
    write_loss_csv(r, dir / "loss.csv");
    std::ifstream in(dir / "loss.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 2);
}

TEST_CASE("ground-truth initialisation has near-zero color loss") {
    const Fixture f = inverse_fixture(32);
    OptimizeConfig cfg;
    cfg.iterations = 0;
    std::vector<MaterialMaps> init{f.truth};
    const auto r = optimize_materials({{f.gb, f.target}}, testing::sky_env().radiance, f.cfg, cfg, &init);
    CHECK(r.trace[0].color < 1e-6);
}

TEST_CASE("short run decreases the loss and keeps materials in range") {
    const Fixture f = inverse_fixture(32);
    OptimizeConfig cfg;
    cfg.iterations = 300;
    const auto r = optimize_materials({{f.gb, f.target}}, testing::sky_env().radiance, f.cfg, cfg);
    REQUIRE(r.trace.size() == 301);
    CHECK(r.learning_rates.front() == 0.05);
    CHECK(r.learning_rates.back() == 0.005);
    double first = 0.0, last = 0.0;
    for (int i = 0; i < 50; ++i) {
        first += r.trace[static_cast<std::size_t>(i)].total;
        last += r.trace[static_cast<std::size_t>(251 + i)].total;
    }
    CHECK(last < 0.5 * first);
    for (const Image* m : {&r.materials[0].albedo, &r.materials[0].roughness, &r.materials[0].metallic}) {
        for (float v : m->data()) {
            CHECK(v >= 0.0f);
            CHECK(v <= 1.0f);
        }
    }
    for (const auto& l : r.trace) {
        CHECK(l.total == doctest::Approx(l.color + l.material_tv + 0.01 * l.light_tv).epsilon(1e-12));
    }
}

TEST_CASE("fixed channels are not updated") {
    const Fixture f = inverse_fixture(32);
    OptimizeConfig cfg;
    cfg.iterations = 20;
    cfg.optimize_roughness = false;
    cfg.optimize_metallic = false;
    std::vector<MaterialMaps> init{MaterialMaps::uniform(32, 32, 0.5f)};
    const auto r = optimize_materials({{f.gb, f.target}}, testing::sky_env().radiance, f.cfg, cfg, &init);
    CHECK(bitwise_equal(r.materials[0].roughness, init[0].roughness));
    CHECK(bitwise_equal(r.materials[0].metallic, init[0].metallic));
    CHECK_FALSE(bitwise_equal(r.materials[0].albedo, init[0].albedo));
}

TEST_CASE("environment refinement lowers the loss from a dim start") {
    const Fixture f = inverse_fixture(24);
    OptimizeConfig cfg;
    cfg.iterations = 40;
    cfg.optimize_env = true;
    cfg.prefilter.specular_samples = 64;
    std::vector<MaterialMaps> init{f.truth};
    Image dim = testing::sky_env().radiance;
    dim *= 0.5f;
    const auto r = optimize_materials({{f.gb, f.target}}, dim, f.cfg, cfg, &init);
    CHECK(r.trace.back().color < 0.8 * r.trace.front().color);
    CHECK_FALSE(bitwise_equal(r.env, dim));
    for (float v : r.env.data()) CHECK(v >= 0.0f);
}

TEST_CASE("divergence and input errors") {
    const Fixture f = inverse_fixture(24);
    OptimizeConfig cfg;
    cfg.iterations = 5;
    Image bad = f.target;
    bad.at(12, 12, 0) = std::numeric_limits<float>::infinity();
    CHECK_THROWS_AS(optimize_materials({{f.gb, bad}}, testing::sky_env().radiance, f.cfg, cfg), DivergenceError);
    CHECK_THROWS_AS(optimize_materials({}, testing::sky_env().radiance, f.cfg, cfg), ConfigError);
    CHECK_THROWS_AS(optimize_materials({{f.gb, Image(24, 24, 1)}}, testing::sky_env().radiance, f.cfg, cfg),
                    DimensionError);
    std::vector<MaterialMaps> two(2, f.truth);
    CHECK_THROWS_AS(optimize_materials({{f.gb, f.target}}, testing::sky_env().radiance, f.cfg, cfg, &two), ConfigError);
}

TEST_CASE("two views sum their color terms") {
    const Fixture f = inverse_fixture(24);
    OptimizeConfig cfg;
    cfg.iterations = 0;
    std::vector<MaterialMaps> init(1, MaterialMaps::uniform(24, 24, 0.4f));
    const auto one = optimize_materials({{f.gb, f.target}}, testing::sky_env().radiance, f.cfg, cfg, &init);
    init.push_back(init[0]);
    const auto two =
        optimize_materials({{f.gb, f.target}, {f.gb, f.target}}, testing::sky_env().radiance, f.cfg, cfg, &init);
    CHECK(two.materials.size() == 2);
    CHECK(two.trace[0].color == doctest::Approx(2.0 * one.trace[0].color).epsilon(1e-12));
}

}
