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

#include "gigi/oracle.hpp"

#include <cmath>

#include "gigi/sampling.hpp"

namespace gigi::oracle {

namespace {

constexpr double kOriginOffset = 1e-6;

Vec3 faceforward(const Vec3& n, const Vec3& toward) { return n.dot(toward) < 0.0 ? Vec3(-n) : n; }

} // namespace

double mc_occlusion(const scene::Scene& scene, const Vec3& point, const Vec3& normal, int rays,
                    double max_distance) {
    const Frame frame(normal);
    const Vec3 origin = point + kOriginOffset * normal;
    const auto dirs = cosine_grid_directions(rays);
    std::size_t hits = 0;
    for (const Vec3& local : dirs) {
        if (scene.occluded(origin, frame.to_world(local), max_distance)) ++hits;
    }
    return 1.0 - static_cast<double>(hits) / dirs.size();
}

Vec3 mc_incident(const scene::Scene& scene, const Vec3& point, const Vec3& normal,
                 const ibl::EnvironmentSet& env, const BounceSettings& settings) {
    const Frame frame(normal);
    const Vec3 origin = point + kOriginOffset * normal;
    const auto dirs = cosine_grid_directions(settings.rays);
    Vec3 sum = Vec3::Zero();
    for (const Vec3& local : dirs) {
        const Vec3 dir = frame.to_world(local);
        const auto hit = scene.intersect(origin, dir, settings.max_distance);
        if (!hit) continue;
        const Vec3 wo = -dir;
        const Vec3 n = faceforward(hit->normal, wo);
        double occlusion = 1.0;
        if (settings.mode == BounceMode::Occluded) {
            occlusion = mc_occlusion(scene, hit->point, n, settings.occlusion_rays, settings.occlusion_distance);
        }
        sum += ibl::shade_pixel(env, n, wo, hit->material, occlusion);
    }
    return sum * (kPi / dirs.size());
}

Vec3 mc_one_bounce(const scene::Scene& scene, const Vec3& point, const Vec3& normal, const brdf::Material& mat,
                   const ibl::EnvironmentSet& env, const BounceSettings& settings) {
    return ((1.0 - mat.metallic) * kInvPi) * mat.albedo.cwiseProduct(mc_incident(scene, point, normal, env, settings));
}

Vec3 mc_direct(const Image& radiance, const Vec3& normal, const Vec3& to_camera, const brdf::Material& mat,
               int rays) {
    const Frame frame(normal);
    const auto dirs = cosine_grid_directions(rays);
    Vec3 sum = Vec3::Zero();
    for (const Vec3& local : dirs) {
        const Vec3 wi = frame.to_world(local);
        const auto f = brdf::brdf_eval(brdf::ShadingFrame::make(normal, to_camera, wi), mat);
        // cos / pdf = pi for cosine-distributed directions
        sum += f.cwiseProduct(ibl::detail::sample_env_unchecked(radiance, wi));
    }
    return sum * (kPi / dirs.size());
}

double screen_horizon(double z0, const TracingConfig& cfg, const CameraIntrinsics& intr) {
    return cfg.max_steps * adaptive_step(z0, cfg.t0, intr);
}

std::optional<scene::SceneHit> pixel_surface(const scene::Scene& scene, const ViewPose& pose,
                                             const CameraIntrinsics& intr, int x, int y) {
    const Vec3 ray_view = Vec3((x + 0.5 - intr.cx) / intr.fx, (y + 0.5 - intr.cy) / intr.fy, 1.0).normalized();
    const Vec3 dir = pose.dir_to_world(ray_view);
    auto hit = scene.intersect(pose.center(), dir);
    if (!hit) return std::nullopt;
    hit->normal = faceforward(hit->normal, -dir);
    return hit;
}

double in_frame_hit_fraction(const scene::Scene& scene, const Vec3& point, const Vec3& normal, int rays,
                             double max_distance, const ViewPose& pose, const CameraIntrinsics& intr) {
    const Frame frame(normal);
    const Vec3 origin = point + kOriginOffset * normal;
    const Vec3 eye = pose.center();
    int hits = 0;
    int seen = 0;
    for (const Vec3& local : cosine_grid_directions(rays)) {
        const auto hit = scene.intersect(origin, frame.to_world(local), max_distance);
        if (!hit) continue;
        ++hits;
        const Vec3 v = pose.to_view(hit->point);
        if (!(v.z() > intr.z_near && v.z() < intr.z_far)) continue;
        const PixelDepth p = detail::project_unchecked(v, intr);
        if (!intr.contains_pixel(p.u, p.v)) continue;
        const Vec3 to_hit = hit->point - eye;
        const double dist = to_hit.norm();
        if (scene.occluded(eye, to_hit / dist, dist * (1.0 - 1e-6) - 1e-6)) continue;
        ++seen;
    }
    return hits == 0 ? 1.0 : double(seen) / hits;
}

Image environment_from(int height, const std::function<Vec3(const Vec3&)>& radiance) {
    Image env(height, 2 * height, 3);
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < 2 * height; ++col) {
            env.set_rgb(row, col, radiance(ibl::texel_direction(row, col, height, 2 * height)));
        }
    }
    return env;
}

Image constant_environment(int height, const Vec3& radiance) {
    return environment_from(height, [&](const Vec3&) { return radiance; });
}

namespace {

Vec3 sky_radiance(const Vec3& d) {
    const Vec3 ground(0.25, 0.22, 0.2);
    const Vec3 horizon(0.9, 0.9, 0.85);
    const Vec3 zenith(0.35, 0.55, 1.0);
    Vec3 base;
    if (d.z() < 0.0) {
        base = lerp(horizon * 0.5, ground, std::min(1.0, -4.0 * d.z()));
    } else {
        base = lerp(horizon, zenith, std::sqrt(d.z()));
    }
    const Vec3 sun_dir = Vec3(0.4, -0.5, 0.75).normalized();
    const double s = std::max(0.0, d.dot(sun_dir));
    return base + Vec3(6.0, 5.5, 4.5) * std::pow(s, 32.0);
}

} // namespace

Image sky_environment(int height) { return environment_from(height, sky_radiance); }

Image red_facing_environment(int height) {
    return environment_from(height, [](const Vec3& d) {
        const double s = std::max(0.0, -d.y());
        return Vec3(sky_radiance(d) + Vec3(4.0, 0.3, 0.2) * std::pow(s, 4.0));
    });
}

Image environment_preset(const std::string& name, int height) {
    if (name == "constant") return constant_environment(height, Vec3::Ones());
    if (name == "sky") return sky_environment(height);
    if (name == "red_facing") return red_facing_environment(height);
    throw ConfigError("unknown environment preset '" + name + "'");
}

} // namespace gigi::oracle
