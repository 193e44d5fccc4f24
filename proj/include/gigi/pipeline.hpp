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
#include <vector>

#include <json.hpp>

#include "gigi/cubemap.hpp"
#include "gigi/ibl.hpp"
#include "gigi/tracing.hpp"

namespace gigi {

struct RenderBundle {
    Image direct;
    Image occlusion;
    Image indirect;
    Image composite;
    Image incident; // indirect before the (1-m) a/pi factor
    Image hits;
    nlohmann::json provenance = nlohmann::json::object();
};

// Direct lighting with the cached occlusion, indirect gathered from `sources`
// (direct shading with O = 1 when empty), then composite.
RenderBundle render_with_cache(const GBuffer& gb, const ibl::EnvironmentSet& env, const TraceCache& cache,
                               const std::vector<const Image*>& sources = {});

// Full pipeline. With a cubemap, rays march in world space and radiance comes
// from the face images.
RenderBundle render_view(const GBuffer& gb, const ibl::EnvironmentSet& env, const TracingConfig& cfg,
                         const CubemapBundle* cube = nullptr);

// Re-runs the pipeline for new materials and lighting. Nothing but geometry
// is carried over.
RenderBundle relight(const GBuffer& gb, const MaterialMaps& materials, const ibl::EnvironmentSet& env,
                     const TracingConfig& cfg, const CubemapBundle* cube = nullptr);

void store_bundle(const RenderBundle& bundle, const GBuffer& gb, const std::filesystem::path& dir);

} // namespace gigi
