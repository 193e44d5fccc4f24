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

#pragma once

#include "gigi/gbuffer.hpp"
#include "gigi/image.hpp"

namespace gigi {

struct LossWeights {
    double normal_tv = 5.0;
    double material_tv = 1.0;
    double light_tv = 0.01;
};

struct LossBreakdown {
    double color = 0.0;
    double material_tv = 0.0;
    double light_tv = 0.0;
    double normal = 0.0;
    double total = 0.0;
};

// (1/|map|) sum exp(-|dI|) |dM|^2 over vertical and horizontal neighbour
// pairs; |dI| is the mean absolute guide difference over its channels and
// |dM|^2 sums over map channels. |map| is the pixel count. With a mask, only
// pairs of two masked pixels count.
double tv_edge_aware(const Image& map, const Image& guide, const Image* mask = nullptr);
// Adds scale * d(tv)/d(map) to grad.
void tv_edge_aware_grad(const Image& map, const Image& guide, const Image* mask, double scale, Image& grad);

// (1/|E|) sum |dE|^2 over neighbour pairs, no wraparound.
double tv_plain(const Image& env);
void tv_plain_grad(const Image& env, double scale, Image& grad);

// Mean |n - n_hat| plus weighted edge-aware TV of n.
double normal_loss(const Image& n, const Image& n_hat, const Image& guide, double normal_tv_weight);

// Mean absolute difference over masked pixels and all channels.
double l1_color(const Image& render, const Image& gt, const Image* mask = nullptr);

double material_tv(const MaterialMaps& materials, const Image& guide, const Image* mask = nullptr);

LossBreakdown decomposition_loss(const Image& render, const Image& gt, const MaterialMaps& materials,
                                 const Image& env, const LossWeights& weights, const Image* mask = nullptr);

} // namespace gigi
