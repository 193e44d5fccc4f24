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

#include "gigi/pipeline.hpp"

#include <fstream>

#include "gigi/tensor_io.hpp"

namespace gigi {

RenderBundle render_with_cache(const GBuffer& gb, const ibl::EnvironmentSet& env, const TraceCache& cache,
                               const std::vector<const Image*>& sources) {
    RenderBundle out;
    out.occlusion = cache.occlusion;
    out.hits = cache.hits;
    out.direct = ibl::shade_direct(gb, env, out.occlusion);
    if (sources.empty()) {
        const Image first_pass = ibl::shade_direct(gb, env, Image(gb.height(), gb.width(), 1, 1.0f));
        out.incident = gather_incident(cache, {&first_pass});
    } else {
        out.incident = gather_incident(cache, sources);
    }
    out.indirect = apply_diffuse_albedo(gb, out.incident);
    out.composite = composite(out.direct, out.indirect);
    return out;
}

RenderBundle render_view(const GBuffer& gb, const ibl::EnvironmentSet& env, const TracingConfig& cfg,
                         const CubemapBundle* cube) {
    if (cube) return render_with_cache(gb, env, world_trace_hits(gb, *cube, cfg), face_sources(*cube));
    return render_with_cache(gb, env, trace_screen_hits(gb, cfg));
}

RenderBundle relight(const GBuffer& gb, const MaterialMaps& materials, const ibl::EnvironmentSet& env,
                     const TracingConfig& cfg, const CubemapBundle* cube) {
    GBuffer lit = gb;
    materials.apply_to(lit);
    return render_view(lit, env, cfg, cube);
}

void store_bundle(const RenderBundle& bundle, const GBuffer& gb, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto& intr = gb.intrinsics;
    io::store_map(bundle.direct, dir / "direct.gigt", "direct", intr, gb.pose);
    io::store_map(bundle.occlusion, dir / "occlusion.gigt", "occlusion", intr, gb.pose);
    io::store_map(bundle.indirect, dir / "indirect.gigt", "indirect", intr, gb.pose);
    io::store_map(bundle.composite, dir / "composite.gigt", "composite", intr, gb.pose);
    io::store_map(bundle.hits, dir / "hits.gigt", "hit_count", intr, gb.pose);
    std::ofstream out(dir / "provenance.json");
    if (!out) throw IoError("cannot write " + (dir / "provenance.json").string());
    out << bundle.provenance.dump(2) << "\n";
}

} // namespace gigi
