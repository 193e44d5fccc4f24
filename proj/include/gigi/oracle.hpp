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

#include <functional>
#include <optional>
#include <string>

#include "gigi/ibl.hpp"
#include "gigi/scene.hpp"
#include "gigi/tracing.hpp"

namespace gigi::oracle {

// Brute-force references computed from exact ray casts. Hemisphere
// directions are a cosine-distributed midpoint grid (no random numbers).

// 1 - (fraction of cosine-weighted rays that hit within max_distance).
double mc_occlusion(const scene::Scene& scene, const Vec3& point, const Vec3& normal, int rays,
                    double max_distance);

enum class BounceMode {
    FirstPass, // hit points shaded direct-only with O = 1, as the tracer assumes
    Occluded,  // hit points shaded with their own exact occlusion
};

struct BounceSettings {
    int rays = 4096;
    double max_distance = std::numeric_limits<double>::infinity();
    BounceMode mode = BounceMode::FirstPass;
    int occlusion_rays = 256;          // Occluded mode only
    double occlusion_distance = std::numeric_limits<double>::infinity();
};

// pi/N sum of direct radiance leaving the hit points toward `point`.
Vec3 mc_incident(const scene::Scene& scene, const Vec3& point, const Vec3& normal,
                 const ibl::EnvironmentSet& env, const BounceSettings& settings);

// (1-m) a/pi * mc_incident
Vec3 mc_one_bounce(const scene::Scene& scene, const Vec3& point, const Vec3& normal, const brdf::Material& mat,
                   const ibl::EnvironmentSet& env, const BounceSettings& settings);

// Reference for the split-sum shader: the hemisphere integral of the full BRDF
// against the unfiltered radiance map.
Vec3 mc_direct(const Image& radiance, const Vec3& normal, const Vec3& to_camera, const brdf::Material& mat,
               int rays);

// Distance covered by a screen-space march from view depth z0.
double screen_horizon(double z0, const TracingConfig& cfg, const CameraIntrinsics& intr);

// Exact surface seen through the center of pixel (x, y), normal facing the
// camera, in world coordinates.
std::optional<scene::SceneHit> pixel_surface(const scene::Scene& scene, const ViewPose& pose,
                                             const CameraIntrinsics& intr, int x, int y);

// Share of the cosine-weighted hits (within max_distance) whose hit point is
// visible to the camera inside its image, i.e. present in the depth buffer.
// 1 when nothing is hit.
double in_frame_hit_fraction(const scene::Scene& scene, const Vec3& point, const Vec3& normal, int rays,
                             double max_distance, const ViewPose& pose, const CameraIntrinsics& intr);

// Equirectangular environments, height x 2*height, from a radiance function of direction.
Image environment_from(int height, const std::function<Vec3(const Vec3&)>& radiance);
Image constant_environment(int height, const Vec3& radiance);
// Smooth sky over a darker ground with a soft sun lobe.
Image sky_environment(int height);
// Sky plus a saturated red lobe around -y.
Image red_facing_environment(int height);
// constant, sky, red_facing
Image environment_preset(const std::string& name, int height);

} // namespace gigi::oracle
