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

#include "gigi/tracing.hpp"

#include <cmath>

#include "gigi/parallel.hpp"

namespace gigi {

TracingConfig TracingConfig::defaults(const CameraIntrinsics& intr) {
    TracingConfig cfg;
    cfg.t0 = 0.01 * intr.depth_range();
    cfg.thickness = 8.0 * cfg.t0;
    return cfg;
}

void TracingConfig::validate() const {
    if (!(t0 > 0.0)) throw ConfigError("tracing: t0 must be positive");
    if (!(thickness >= 0.0)) throw ConfigError("tracing: thickness must be non-negative");
    if (max_steps < 1) throw ConfigError("tracing: max_steps must be at least 1");
    if (sample_count() < 1) throw ConfigError("tracing: need at least one ray sample");
    if (sample_count() > kMaxRaySamples) throw ConfigError("tracing: at most 65535 ray samples");
}

double adaptive_step(double z0, double t0, const CameraIntrinsics& intr) {
    const double s = 1.0 + z0 / (intr.z_far - intr.z_near);
    return t0 * s * s;
}

RayHit march_ray(const Vec3& x0, const Vec3& dir, const Image& depth, const CameraIntrinsics& intr,
                 const TracingConfig& cfg, const Vec3& normal) {
    if (!(x0.z() > 0.0)) throw PreconditionError("march_ray: origin is behind the camera");
    const PixelDepth p0 = detail::project_unchecked(x0, intr);
    if (!intr.contains_pixel(p0.u, p0.v)) throw PreconditionError("march_ray: origin projects outside the image");
    if (!is_unit(dir, 1e-4)) throw PreconditionError("march_ray: direction is not unit length");

    const Vec3 origin = x0 + kNormalOffset * normal;
    const double t = adaptive_step(x0.z(), cfg.t0, intr);
    RayHit out;
    for (int k = 1; k <= cfg.max_steps; ++k) {
        out.steps = k;
        const Vec3 x = origin + dir * (k * t);
        if (x.z() <= intr.z_near || x.z() >= intr.z_far) break;
        const PixelDepth p = detail::project_unchecked(x, intr);
        if (!intr.contains_pixel(p.u, p.v)) break;
        const int px = static_cast<int>(p.u);
        const int py = static_cast<int>(p.v);
        const double zd = depth.at(py, px);
        if (zd <= 0.0) continue;
        if (zd < x.z() && x.z() < zd + cfg.thickness) {
            out.hit = true;
            out.px = px;
            out.py = py;
            return out;
        }
    }
    return out;
}

Image gather_incident(const TraceCache& cache, const std::vector<const Image*>& sources) {
    const int h = cache.occlusion.height();
    const int w = cache.occlusion.width();
    Image out(h, w, 3);
    parallel_rows(h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (cache.weight_sum[i] == 0.0) continue;
            Vec3 radiance = Vec3::Zero();
            for (std::size_t r = cache.offsets[i]; r < cache.offsets[i + 1]; ++r) {
                const HitRecord& rec = cache.records[r];
                const float* p = sources[static_cast<std::size_t>(rec.source)]->data().data() + rec.pixel * 3;
                radiance += cache.sample_weights[rec.sample] * Vec3(p[0], p[1], p[2]);
            }
            out.set_rgb(y, x, radiance * (kPi / cache.weight_sum[i]));
        }
    });
    return out;
}

TraceCache trace_screen_hits(const GBuffer& gb, const TracingConfig& cfg, const TraceHooks& hooks) {
    return build_trace_cache(gb.height(), gb.width(), gb.width(), cfg, hooks, [&](int y, int x) {
        const Vec3 x0 = gb.view_point(y, x);
        const Vec3 n = gb.normal.rgb(y, x);
        const Frame frame(n);
        auto march = [&gb, &cfg, x0, n, frame](const Vec3& local) {
            return march_ray(x0, frame.to_world(local), gb.depth, gb.intrinsics, cfg, n);
        };
        return gb.masked(y, x) ? std::optional<decltype(march)>(march) : std::nullopt;
    });
}

TraceResult trace_screen(const GBuffer& gb, const Image* direct, const TracingConfig& cfg, const TraceHooks& hooks) {
    if (direct) {
        require_same_extent(gb.depth, *direct, "trace: direct image vs gbuffer");
        if (direct->channels() != 3) throw DimensionError("trace: direct image must have 3 channels");
    }
    TraceCache cache = trace_screen_hits(gb, cfg, hooks);
    TraceResult out;
    out.incident = direct ? gather_incident(cache, {direct}) : Image(gb.height(), gb.width(), 3);
    out.indirect = apply_diffuse_albedo(gb, out.incident);
    out.occlusion = std::move(cache.occlusion);
    out.hits = std::move(cache.hits);
    return out;
}

Image occlusion_map(const GBuffer& gb, const TracingConfig& cfg, const TraceHooks& hooks) {
    return trace_screen(gb, nullptr, cfg, hooks).occlusion;
}

Image indirect_map(const GBuffer& gb, const Image& direct, const TracingConfig& cfg) {
    return trace_screen(gb, &direct, cfg).indirect;
}

Image apply_diffuse_albedo(const GBuffer& gb, const Image& incident) {
    require_same_extent(gb.depth, incident, "indirect: incident vs gbuffer");
    Image out(gb.height(), gb.width(), 3);
    for (int y = 0; y < gb.height(); ++y) {
        for (int x = 0; x < gb.width(); ++x) {
            if (!gb.masked(y, x)) continue;
            const double k = (1.0 - gb.metallic.at(y, x)) * kInvPi;
            out.set_rgb(y, x, k * gb.albedo.rgb(y, x).cwiseProduct(incident.rgb(y, x)));
        }
    }
    return out;
}

Image composite(const Image& direct, const Image& indirect) {
    if (!direct.same_shape(indirect)) throw DimensionError("composite: direct and indirect differ in shape");
    Image out = direct;
    auto dst = out.data();
    auto src = indirect.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    return out;
}

} // namespace gigi
