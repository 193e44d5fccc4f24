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


#include "gigi/reference.hpp"

#include <algorithm>
#include <cmath>

namespace gigi::reference {

TraceResult trace_screen(const GBuffer& gb, const Image* direct, const TracingConfig& cfg, const TraceHooks& hooks) {
    cfg.validate();
    const auto local = local_hemisphere_samples(cfg.sampler);
    const int h = gb.height();
    const int w = gb.width();
    TraceResult out{Image(h, w, 1, 1.0f), Image(h, w, 3), Image(h, w, 3), Image(h, w, 1)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!gb.masked(y, x)) continue;
            const Vec3 x0 = gb.view_point(y, x);
            const Vec3 n = gb.normal.rgb(y, x);
            const Frame frame(n);
            double w_sum = 0.0;
            double v_sum = 0.0;
            int hits = 0;
            Vec3 radiance = Vec3::Zero();
            for (const HemisphereSample& s : local) {
                w_sum += s.weight;
                const RayHit hit = march_ray(x0, frame.to_world(s.dir), gb.depth, gb.intrinsics, cfg, n);
                if (hit.hit) {
                    v_sum += s.weight;
                    ++hits;
                    if (direct) radiance += s.weight * direct->rgb(hit.py, hit.px);
                } else if (hooks.force_visible) {
                    v_sum += s.weight;
                }
            }
            out.occlusion.at(y, x) = static_cast<float>(std::clamp(1.0 - v_sum / w_sum, 0.0, 1.0));
            out.hits.at(y, x) = static_cast<float>(hits);
            if (direct) out.incident.set_rgb(y, x, radiance * (kPi / w_sum));
        }
    }
    out.indirect = apply_diffuse_albedo(gb, out.incident);
    return out;
}

Image prefilter_diffuse(const Image& env, int out_height) {
    ibl::validate_environment(env);
    if (out_height < 1) throw ConfigError("irradiance map height must be positive");
    const int eh = env.height();
    const int ew = env.width();
    const int sub = std::max(1, static_cast<int>(std::ceil(std::sqrt(double(ibl::kMinDiffuseSamples) / (eh * ew)))));
    const int out_w = 2 * out_height;
    Image out(out_height, out_w, 3);
    for (int orow = 0; orow < out_height; ++orow) {
        for (int ocol = 0; ocol < out_w; ++ocol) {
            const Vec3 n = ibl::texel_direction(orow, ocol, out_height, out_w);
            double norm = 0.0;
            Vec3 acc = Vec3::Zero();
            for (int row = 0; row < eh; ++row) {
                for (int a = 0; a < sub; ++a) {
                    const double t0 = kPi * (row + double(a) / sub) / eh;
                    const double t1 = kPi * (row + double(a + 1) / sub) / eh;
                    const double tm = 0.5 * (t0 + t1);
                    const double d_omega = 2.0 * kPi / (double(ew) * sub) * (std::cos(t0) - std::cos(t1));
                    for (int col = 0; col < ew; ++col) {
                        for (int b = 0; b < sub; ++b) {
                            const double phi = 2.0 * kPi * (col + (b + 0.5) / sub) / ew;
                            const Vec3 d(std::sin(tm) * std::cos(phi), std::sin(tm) * std::sin(phi), std::cos(tm));
                            const double c = d.dot(n);
                            if (c <= 0.0) continue;
                            const double wgt = c * d_omega;
                            acc += wgt * env.rgb(row, col);
                            norm += wgt;
                        }
                    }
                }
            }
            out.set_rgb(orow, ocol, acc * (kPi / norm));
        }
    }
    return out;
}

Image shade_direct(const GBuffer& gb, const ibl::EnvironmentSet& env, const Image& occlusion) {
    require_same_extent(gb.depth, occlusion, "reference shade_direct");
    Image out(gb.height(), gb.width(), 3);
    for (int y = 0; y < gb.height(); ++y) {
        for (int x = 0; x < gb.width(); ++x) {
            if (!gb.masked(y, x)) continue;
            const ibl::PixelFrame f = ibl::pixel_frame(gb, y, x);
            out.set_rgb(y, x, ibl::shade_pixel(env, f.normal, f.to_camera, ibl::material_at(gb, y, x), occlusion.at(y, x)));
        }
    }
    return out;
}

Render render_view(const GBuffer& gb, const ibl::EnvironmentSet& env, const TracingConfig& cfg) {
    Render r;
    r.occlusion = reference::trace_screen(gb, nullptr, cfg).occlusion;
    r.direct = reference::shade_direct(gb, env, r.occlusion);
    const Image first_pass = reference::shade_direct(gb, env, Image(gb.height(), gb.width(), 1, 1.0f));
    r.indirect = reference::trace_screen(gb, &first_pass, cfg).indirect;
    r.composite = composite(r.direct, r.indirect);
    return r;
}

} // namespace gigi::reference
