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
#include <random>

#include "gigi/losses.hpp"

using namespace gigi;

namespace {

Image random_image(int h, int w, int c, unsigned seed, float lo = 0.0f, float hi = 1.0f) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> u(lo, hi);
    Image img(h, w, c);
    for (float& v : img.data()) v = u(rng);
    return img;
}

// Straight summation over every neighbour pair, written out per axis.
double tv_reference(const Image& m, const Image* guide, const Image* mask) {
    double s = 0.0;
    auto pair = [&](int y0, int x0, int y1, int x1) {
        if (mask && (mask->at(y0, x0) < 0.5f || mask->at(y1, x1) < 0.5f)) return;
        double w = 1.0;
        if (guide) {
            double d = 0.0;
            for (int c = 0; c < guide->channels(); ++c) d += std::fabs(double(guide->at(y0, x0, c)) - guide->at(y1, x1, c));
            w = std::exp(-d / guide->channels());
        }
        for (int c = 0; c < m.channels(); ++c) {
            const double d = double(m.at(y0, x0, c)) - m.at(y1, x1, c);
            s += w * d * d;
        }
    };
    for (int y = 1; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) pair(y, x, y - 1, x);
    for (int y = 0; y < m.height(); ++y)
        for (int x = 1; x < m.width(); ++x) pair(y, x, y, x - 1);
    return s / (double(m.height()) * m.width());
}

} // namespace

TEST_SUITE("losses") {

TEST_CASE("default weights") {
    const LossWeights w;
    CHECK(w.normal_tv == 5.0);
    CHECK(w.material_tv == 1.0);
    CHECK(w.light_tv == 0.01);
}

TEST_CASE("constant maps have zero TV") {
    const Image m(9, 7, 3, 0.37f);
    CHECK(tv_edge_aware(m, random_image(9, 7, 3, 1), nullptr) == 0.0);
    CHECK(tv_plain(m) == 0.0);
}

TEST_CASE("unit step and guide damping") {
    Image m(4, 6, 1, 0.0f);
    for (int y = 0; y < 4; ++y)
        for (int x = 3; x < 6; ++x) m.at(y, x) = 1.0f;
    const Image flat(4, 6, 3, 0.2f);
    // One crossing pair per row.
    CHECK(tv_edge_aware(m, flat) == doctest::Approx(4.0 / 24.0).epsilon(1e-12));

    Image scaled = m;
    scaled *= 3.0f;
    CHECK(tv_edge_aware(scaled, flat) == doctest::Approx(9.0 * tv_edge_aware(m, flat)).epsilon(1e-12));

    Image edge(4, 6, 3, 0.0f);
    for (int y = 0; y < 4; ++y)
        for (int x = 3; x < 6; ++x) edge.set_rgb(y, x, Vec3::Constant(3.0));
    CHECK(tv_edge_aware(m, edge) == doctest::Approx(std::exp(-3.0) * tv_edge_aware(m, flat)).epsilon(1e-9));
}

TEST_CASE("checkerboard env") {
    for (int h : {4, 5, 8}) {
        const int w = 2 * h;
        Image env(h, w, 3);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) env.set_rgb(y, x, Vec3::Constant((x + y) % 2));
        const double pairs = double(h - 1) * w + double(w - 1) * h;
        // Every counted pair differs by one in all three channels.
        CHECK(tv_plain(env) == doctest::Approx(3.0 * pairs / (h * w)).epsilon(1e-12));
        CHECK(tv_plain(env) == doctest::Approx(tv_reference(env, nullptr, nullptr)).epsilon(1e-12));
        Image doubled = env;
        doubled *= 2.0f;
        CHECK(tv_plain(doubled) == doctest::Approx(4.0 * tv_plain(env)).epsilon(1e-12));
    }
}

TEST_CASE("TV matches an independent summation") {
    const Image m = random_image(11, 13, 3, 2);
    const Image g = random_image(11, 13, 3, 3, 0.0f, 4.0f);
    Image mask = random_image(11, 13, 1, 4);
    for (float& v : mask.data()) v = v > 0.3f ? 1.0f : 0.0f;
    CHECK(tv_edge_aware(m, g) == doctest::Approx(tv_reference(m, &g, nullptr)).epsilon(1e-9));
    CHECK(tv_edge_aware(m, g, &mask) == doctest::Approx(tv_reference(m, &g, &mask)).epsilon(1e-9));
    CHECK(tv_plain(g) == doctest::Approx(tv_reference(g, nullptr, nullptr)).epsilon(1e-9));
    CHECK_THROWS_AS(tv_edge_aware(m, random_image(11, 12, 3, 5)), DimensionError);
}

TEST_CASE("TV gradients match finite differences") {
    const Image m = random_image(6, 7, 2, 6);
    const Image g = random_image(6, 7, 3, 7);
    Image mask(6, 7, 1, 1.0f);
    mask.at(2, 3) = 0.0f;
    Image grad(6, 7, 2);
    tv_edge_aware_grad(m, g, &mask, 1.5, grad);
    Image env_grad(6, 7, 2);
    tv_plain_grad(m, 0.5, env_grad);
    const double h = 1e-2;
    for (std::size_t i = 0; i < m.size(); ++i) {
        Image p = m, q = m;
        p.data()[i] += float(h);
        q.data()[i] -= float(h);
        const double step = double(p.data()[i]) - q.data()[i];
        const double fd = 1.5 * (tv_edge_aware(p, g, &mask) - tv_edge_aware(q, g, &mask)) / step;
        CHECK(grad.data()[i] == doctest::Approx(fd).epsilon(1e-3).scale(1e-4));
        const double fe = 0.5 * (tv_plain(p) - tv_plain(q)) / step;
        CHECK(env_grad.data()[i] == doctest::Approx(fe).epsilon(1e-3).scale(1e-4));
    }
}

TEST_CASE("normal loss") {
    Image n(5, 5, 3);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) n.set_rgb(y, x, Vec3(0, 0, -1));
    Image flipped = n;
    flipped *= -1.0f;
    const Image guide(5, 5, 3, 0.5f);
    CHECK(normal_loss(n, n, guide, 5.0) == 0.0);
    CHECK(normal_loss(n, flipped, guide, 5.0) == doctest::Approx(2.0).epsilon(1e-12));

    std::mt19937 rng(8);
    std::normal_distribution<double> gauss;
    Image a(8, 9, 3), b(8, 9, 3);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 9; ++x) {
            a.set_rgb(y, x, Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized());
            b.set_rgb(y, x, Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized());
        }
    }
    const Image g = random_image(8, 9, 3, 9);
    double s = 0.0;
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 9; ++x) {
            double d2 = 0.0;
            for (int c = 0; c < 3; ++c) d2 += std::pow(double(a.at(y, x, c)) - b.at(y, x, c), 2);
            s += std::sqrt(d2);
        }
    }
    const double expected = s / 72.0 + 5.0 * tv_reference(a, &g, nullptr);
    CHECK(std::abs(normal_loss(a, b, g, 5.0) - expected) < 1e-6);
}

TEST_CASE("decomposition loss") {
    const Image gt = random_image(10, 12, 3, 10);
    const Image env(8, 16, 3, 1.0f);
    const MaterialMaps flat = MaterialMaps::uniform(10, 12, 0.5f);
    const LossWeights w;
    const LossBreakdown zero = decomposition_loss(gt, gt, flat, env, w);
    CHECK(zero.total == 0.0);

    Image shifted = gt;
    for (float& v : shifted.data()) v += 0.1f;
    CHECK(l1_color(shifted, gt) == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(decomposition_loss(shifted, gt, flat, env, w).color == doctest::Approx(0.1).epsilon(1e-6));

    const Image render = random_image(10, 12, 3, 11);
    MaterialMaps mats{random_image(10, 12, 3, 12), random_image(10, 12, 1, 13), random_image(10, 12, 1, 14)};
    const Image env2 = random_image(8, 16, 3, 15, 0.0f, 3.0f);
    Image mask = random_image(10, 12, 1, 16);
    for (float& v : mask.data()) v = v > 0.4f ? 1.0f : 0.0f;
    const LossBreakdown l = decomposition_loss(render, gt, mats, env2, w, &mask);

    double color = 0.0;
    int terms = 0;
    for (int y = 0; y < 10; ++y) {
        for (int x = 0; x < 12; ++x) {
            if (mask.at(y, x) < 0.5f) continue;
            for (int c = 0; c < 3; ++c) color += std::fabs(double(render.at(y, x, c)) - gt.at(y, x, c));
            terms += 3;
        }
    }
    color /= terms;
    const double mtv = tv_reference(mats.albedo, &gt, &mask) + tv_reference(mats.roughness, &gt, &mask) +
                       tv_reference(mats.metallic, &gt, &mask);
    const double ltv = tv_reference(env2, nullptr, nullptr);
    CHECK(std::abs(l.color - color) < 1e-6);
    CHECK(std::abs(l.material_tv - mtv) < 1e-6);
    CHECK(std::abs(l.light_tv - ltv) < 1e-6);
    CHECK(std::abs(l.total - (color + 1.0 * mtv + 0.01 * ltv)) < 1e-6);
    CHECK(std::abs(l.total - (l.color + w.material_tv * l.material_tv + w.light_tv * l.light_tv)) < 1e-9);
    CHECK(l.normal == 0.0);
    CHECK(l.color >= 0.0);
    CHECK(l.material_tv >= 0.0);
    CHECK(l.light_tv >= 0.0);
}

}
