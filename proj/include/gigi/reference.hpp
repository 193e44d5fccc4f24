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

#include "gigi/ibl.hpp"
#include "gigi/tracing.hpp"

// Single-threaded versions of the parallel kernels, written without the hit
// cache or shared quadrature tables. Tests require them to agree bitwise with
// the OpenMP kernels; the benchmark target times both.
namespace gigi::reference {

TraceResult trace_screen(const GBuffer& gb, const Image* direct, const TracingConfig& cfg,
                         const TraceHooks& hooks = {});

Image prefilter_diffuse(const Image& env, int out_height);

Image shade_direct(const GBuffer& gb, const ibl::EnvironmentSet& env, const Image& occlusion);

// Screen-space pipeline: occlusion, direct, indirect from the unoccluded direct image.
struct Render {
    Image direct;
    Image occlusion;
    Image indirect;
    Image composite;
};
Render render_view(const GBuffer& gb, const ibl::EnvironmentSet& env, const TracingConfig& cfg);

} // namespace gigi::reference
