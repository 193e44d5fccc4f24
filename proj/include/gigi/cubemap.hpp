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

#include <array>
#include <filesystem>

#include "gigi/ibl.hpp"
#include "gigi/scene.hpp"
#include "gigi/tracing.hpp"

namespace gigi {

// Face order +x, -x, +y, -y, +z, -z, expressed in the frame of the center
// (front) camera; +z is the front view itself.
enum CubeFaceId : int { kPosX = 0, kNegX, kPosY, kNegY, kPosZ, kNegZ };
inline constexpr int kCubeFaces = 6;

const char* face_name(int face);

// Rows (right, down, forward) of the face camera relative to the center camera.
Mat3 face_rotation(int face);

// Dominant axis of `dir` (center-camera frame); ties go to x, then y.
int select_face(const Vec3& dir);

struct CubeFace {
    GBuffer gbuffer; // carries the face pose and 90-degree intrinsics
    Image direct;    // first-pass direct image, O = 1
};

struct CubemapBundle {
    std::array<CubeFace, kCubeFaces> faces;
    ViewPose center_pose; // the +z face
    int face_size = 0;

    Vec3 center() const { return center_pose.center(); }
    const CameraIntrinsics& intrinsics() const { return faces[kPosZ].gbuffer.intrinsics; }
};

CameraIntrinsics face_intrinsics(int size, double z_near, double z_far);
ViewPose face_pose(const ViewPose& center_pose, int face);

CubemapBundle build_cubemap(const scene::Scene& scene, const ViewPose& center_pose, int face_size, double z_near,
                            double z_far, const ibl::EnvironmentSet& env);

// World-space march. The step length comes from the distance between x0 and
// the cube center; each sample is tested against the face its direction from
// the center falls in.
RayHit world_march_ray(const Vec3& x0, const Vec3& dir, const CubemapBundle& cube, const TracingConfig& cfg,
                       const Vec3& normal = Vec3::Zero());

// Same estimators as trace_screen, with rays marched through the cube and
// radiance read from the hit face. Sample directions are generated in the
// front camera's view frame so both modes use identical rays.
TraceCache world_trace_hits(const GBuffer& front, const CubemapBundle& cube, const TracingConfig& cfg,
                            const TraceHooks& hooks = {});
std::vector<const Image*> face_sources(const CubemapBundle& cube);
TraceResult world_occlusion_indirect(const GBuffer& front, const CubemapBundle& cube, const TracingConfig& cfg,
                                     const TraceHooks& hooks = {});

// face_<name>/ G-buffer set + direct.gigt, manifest.json with face poses.
void store_cubemap(const CubemapBundle& cube, const std::filesystem::path& dir);
CubemapBundle load_cubemap(const std::filesystem::path& dir);

} // namespace gigi
