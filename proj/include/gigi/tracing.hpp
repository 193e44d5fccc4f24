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

#include <cstdint>
#include <optional>
#include <vector>

#include "gigi/gbuffer.hpp"
#include "gigi/parallel.hpp"
#include "gigi/sampling.hpp"

namespace gigi {

struct TracingConfig {
    double t0 = 0.0;       // base step length, scene units
    int max_steps = 32;
    double thickness = 0.0; // delta
    HemisphereSampler sampler = FibonacciLattice{64};

    // t0 = 0.01 (z_far - z_near), delta = 8 t0, 32 steps, 64-point lattice.
    static TracingConfig defaults(const CameraIntrinsics& intr);
    int sample_count() const { return gigi::sample_count(sampler); }
    void validate() const;
};

inline constexpr double kNormalOffset = 1e-3;

struct RayHit {
    bool hit = false;
    int px = -1;
    int py = -1;
    int steps = 0;
    int face = -1; // cubemap face, -1 in screen space
};

// t0 (1 + z0 / (z_far - z_near))^2
double adaptive_step(double z0, double t0, const CameraIntrinsics& intr);

// Screen-space march from view-space x0 along unit dir. The origin is pushed
// kNormalOffset along `normal` first; the step length uses the depth of x0.
// Pixels with depth <= 0 are empty.
RayHit march_ray(const Vec3& x0, const Vec3& dir, const Image& depth, const CameraIntrinsics& intr,
                 const TracingConfig& cfg, const Vec3& normal = Vec3::Zero());

struct TraceHooks {
    bool force_visible = false; // every sample counts as a hit
};

// One marching pass per pixel serves both estimators.
struct TraceResult {
    Image occlusion; // 1 channel, 1 outside the mask
    Image incident;  // 3 channels, pi * sum(V I w) / sum(w)
    Image indirect;  // 3 channels, (1-m) a/pi * incident
    Image hits;      // 1 channel, number of samples that hit
};

inline constexpr int kMaxRaySamples = 65535;

struct HitRecord {
    std::uint32_t pixel;  // y * width + x in the source image
    std::uint16_t source; // 0 in screen space, the face index for a cubemap
    std::uint16_t sample; // index into TraceCache::sample_weights
};

// Hits of one marching pass, kept so the indirect gather can be repeated for
// new radiance images without marching again.
struct TraceCache {
    Image occlusion;
    Image hits;
    std::vector<double> weight_sum;   // per pixel, sum of all sample weights
    std::vector<std::size_t> offsets; // per pixel + 1, into records
    std::vector<HitRecord> records;
    std::vector<double> sample_weights;
};

// Self-normalised hemisphere quadrature shared by the screen-space and
// cubemap tracers. rays(y, x) returns an optional marcher mapping a local
// (+z up) sample direction to a RayHit; empty for unmasked pixels. Hit pixels
// index source images `source_width` wide.
template <class Rays>
TraceCache build_trace_cache(int height, int width, int source_width, const TracingConfig& cfg,
                             const TraceHooks& hooks, Rays&& rays);

// pi * sum(w I(hit)) / sum(w) per pixel; sources[r.source] supplies I.
Image gather_incident(const TraceCache& cache, const std::vector<const Image*>& sources);

TraceCache trace_screen_hits(const GBuffer& gb, const TracingConfig& cfg, const TraceHooks& hooks = {});

// `direct` may be null, in which case incident and indirect are zero.
TraceResult trace_screen(const GBuffer& gb, const Image* direct, const TracingConfig& cfg,
                         const TraceHooks& hooks = {});

Image occlusion_map(const GBuffer& gb, const TracingConfig& cfg, const TraceHooks& hooks = {});
Image indirect_map(const GBuffer& gb, const Image& direct, const TracingConfig& cfg);

// (1-m) a/pi * incident on masked pixels.
Image apply_diffuse_albedo(const GBuffer& gb, const Image& incident);

Image composite(const Image& direct, const Image& indirect);

template <class Rays>
TraceCache build_trace_cache(int height, int width, int source_width, const TracingConfig& cfg,
                             const TraceHooks& hooks, Rays&& rays) {
    cfg.validate();
    const std::vector<HemisphereSample> local = local_hemisphere_samples(cfg.sampler);
    const std::size_t pixels = static_cast<std::size_t>(height) * width;
    TraceCache cache{Image(height, width, 1, 1.0f), Image(height, width, 1), std::vector<double>(pixels, 0.0), {}, {}, {}};
    for (const HemisphereSample& s : local) cache.sample_weights.push_back(s.weight);
    std::vector<std::vector<HitRecord>> row_records(static_cast<std::size_t>(height));
    std::vector<std::size_t> counts(pixels, 0);
    parallel_rows(height, [&](int y) {
        auto& out = row_records[static_cast<std::size_t>(y)];
        for (int x = 0; x < width; ++x) {
            auto march = rays(y, x);
            if (!march) continue;
            double w_sum = 0.0;
            double v_sum = 0.0;
            std::size_t n = 0;
            for (std::size_t k = 0; k < local.size(); ++k) {
                const HemisphereSample& s = local[k];
                w_sum += s.weight;
                const RayHit hit = (*march)(s.dir);
                if (hit.hit) {
                    v_sum += s.weight;
                    out.push_back({static_cast<std::uint32_t>(hit.py * source_width + hit.px),
                                   static_cast<std::uint16_t>(std::max(hit.face, 0)), static_cast<std::uint16_t>(k)});
                    ++n;
                } else if (hooks.force_visible) {
                    v_sum += s.weight;
                }
            }
            const std::size_t i = static_cast<std::size_t>(y) * width + x;
            cache.weight_sum[i] = w_sum;
            counts[i] = n;
            cache.occlusion.at(y, x) = static_cast<float>(std::clamp(1.0 - v_sum / w_sum, 0.0, 1.0));
            cache.hits.at(y, x) = static_cast<float>(n);
        }
    });
    cache.offsets.assign(pixels + 1, 0);
    for (std::size_t i = 0; i < pixels; ++i) cache.offsets[i + 1] = cache.offsets[i] + counts[i];
    cache.records.reserve(cache.offsets.back());
    for (auto& row : row_records) cache.records.insert(cache.records.end(), row.begin(), row.end());
    return cache;
}

} // namespace gigi
