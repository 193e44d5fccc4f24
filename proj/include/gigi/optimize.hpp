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

#include <filesystem>
#include <optional>
#include <vector>

#include "gigi/ibl.hpp"
#include "gigi/losses.hpp"
#include "gigi/tracing.hpp"

namespace gigi {

// Partial derivatives of one direct-lit pixel value (per color channel).
struct DirectGradient {
    Vec3 albedo;    // d L_c / d a_c; the Jacobian is diagonal
    Vec3 metallic;  // d L_c / d m
    Vec3 roughness; // d L_c / d rho, one-sided at lookup cell boundaries
};

DirectGradient grad_direct(const ibl::DirectLookup& lk, const brdf::Material& mat, double occlusion);
DirectGradient grad_direct(const GBuffer& gb, const ibl::EnvironmentSet& env, const Image& occlusion, int y, int x);

struct OptimizeConfig {
    int iterations = 2000;
    double lr_initial = 0.05;
    double lr_final = 0.005;
    bool optimize_env = false;
    bool optimize_roughness = true;
    bool optimize_metallic = true;
    int indirect_every = 50; // iterations between indirect refreshes
    double divergence_factor = 10.0;
    LossWeights weights;
    ibl::PrefilterSettings prefilter;

    // lr_initial (lr_final / lr_initial)^(i / iterations)
    double learning_rate(int i) const;
    void validate() const;
};

// Fixed geometry of one view plus its linear HDR target.
struct OptimizeView {
    GBuffer geometry;
    Image target;
};

struct OptimizeResult {
    std::vector<MaterialMaps> materials; // one set per view
    Image env;
    std::vector<LossBreakdown> trace;    // iterations + 1 rows
    std::vector<double> learning_rates;
};

// Projected gradient descent on the decomposition loss. Occlusion is traced
// once per view; the incident indirect light is refreshed every
// indirect_every iterations from the current unoccluded direct image and held constant
// in between. Gradients are taken with respect to the loss scaled by the
// number of color terms (materials) or environment values (lighting).
OptimizeResult optimize_materials(const std::vector<OptimizeView>& views, const Image& env_init,
                                  const TracingConfig& tracing, const OptimizeConfig& cfg,
                                  const std::vector<MaterialMaps>* init = nullptr);

void write_loss_csv(const OptimizeResult& result, const std::filesystem::path& path);

} // namespace gigi
