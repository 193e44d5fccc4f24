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

#include "gigi/losses.hpp"

#include <cmath>

namespace gigi {

namespace {

double guide_weight(const Image& guide, int y0, int x0, int y1, int x1) {
    double d = 0.0;
    for (int c = 0; c < guide.channels(); ++c) d += std::abs(static_cast<double>(guide.at(y0, x0, c)) - guide.at(y1, x1, c));
    return std::exp(-d / guide.channels());
}

bool pair_counts(const Image* mask, int y0, int x0, int y1, int x1) {
    return !mask || (mask->at(y0, x0) > 0.5f && mask->at(y1, x1) > 0.5f);
}

// Calls f(y, x, y_prev, x_prev, weight) for each counted pair.
template <class F>
void for_each_pair(const Image& map, const Image* guide, const Image* mask, F&& f) {
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (y > 0 && pair_counts(mask, y, x, y - 1, x)) f(y, x, y - 1, x, guide ? guide_weight(*guide, y, x, y - 1, x) : 1.0);
            if (x > 0 && pair_counts(mask, y, x, y, x - 1)) f(y, x, y, x - 1, guide ? guide_weight(*guide, y, x, y, x - 1) : 1.0);
        }
    }
}

double tv_impl(const Image& map, const Image* guide, const Image* mask) {
    double sum = 0.0;
    for_each_pair(map, guide, mask, [&](int y, int x, int py, int px, double w) {
        double d2 = 0.0;
        for (int c = 0; c < map.channels(); ++c) {
            const double d = static_cast<double>(map.at(y, x, c)) - map.at(py, px, c);
            d2 += d * d;
        }
        sum += w * d2;
    });
    return sum / static_cast<double>(map.pixel_count());
}

void tv_grad_impl(const Image& map, const Image* guide, const Image* mask, double scale, Image& grad) {
    if (!grad.same_shape(map)) throw DimensionError("tv gradient: shape mismatch");
    const double k = 2.0 * scale / static_cast<double>(map.pixel_count());
    for_each_pair(map, guide, mask, [&](int y, int x, int py, int px, double w) {
        for (int c = 0; c < map.channels(); ++c) {
            const double g = k * w * (static_cast<double>(map.at(y, x, c)) - map.at(py, px, c));
            grad.at(y, x, c) += static_cast<float>(g);
            grad.at(py, px, c) -= static_cast<float>(g);
        }
    });
}

} // namespace

double tv_edge_aware(const Image& map, const Image& guide, const Image* mask) {
    require_same_extent(map, guide, "tv_edge_aware: guide");
    if (mask) require_same_extent(map, *mask, "tv_edge_aware: mask");
    return tv_impl(map, &guide, mask);
}

void tv_edge_aware_grad(const Image& map, const Image& guide, const Image* mask, double scale, Image& grad) {
    require_same_extent(map, guide, "tv_edge_aware: guide");
    tv_grad_impl(map, &guide, mask, scale, grad);
}

double tv_plain(const Image& env) { return tv_impl(env, nullptr, nullptr); }

void tv_plain_grad(const Image& env, double scale, Image& grad) { tv_grad_impl(env, nullptr, nullptr, scale, grad); }

double normal_loss(const Image& n, const Image& n_hat, const Image& guide, double normal_tv_weight) {
    if (!n.same_shape(n_hat) || n.channels() != 3) throw DimensionError("normal_loss: shape mismatch");
    double sum = 0.0;
    for (int y = 0; y < n.height(); ++y) {
        for (int x = 0; x < n.width(); ++x) sum += (n.rgb(y, x) - n_hat.rgb(y, x)).norm();
    }
    return sum / static_cast<double>(n.pixel_count()) + normal_tv_weight * tv_edge_aware(n, guide);
}

double l1_color(const Image& render, const Image& gt, const Image* mask) {
    if (!render.same_shape(gt)) throw DimensionError("l1_color: shape mismatch");
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < render.height(); ++y) {
        for (int x = 0; x < render.width(); ++x) {
            if (mask && mask->at(y, x) <= 0.5f) continue;
            for (int c = 0; c < render.channels(); ++c) {
                sum += std::abs(static_cast<double>(render.at(y, x, c)) - gt.at(y, x, c));
                ++count;
            }
        }
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

double material_tv(const MaterialMaps& m, const Image& guide, const Image* mask) {
    return tv_edge_aware(m.albedo, guide, mask) + tv_edge_aware(m.roughness, guide, mask) +
           tv_edge_aware(m.metallic, guide, mask);
}

LossBreakdown decomposition_loss(const Image& render, const Image& gt, const MaterialMaps& materials,
                                 const Image& env, const LossWeights& weights, const Image* mask) {
    LossBreakdown loss;
    loss.color = l1_color(render, gt, mask);
    loss.material_tv = material_tv(materials, gt, mask);
    loss.light_tv = tv_plain(env);
    loss.total = loss.color + weights.material_tv * loss.material_tv + weights.light_tv * loss.light_tv;
    return loss;
}

} // namespace gigi
