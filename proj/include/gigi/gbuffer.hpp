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

#include "gigi/camera.hpp"
#include "gigi/image.hpp"

namespace gigi {

// Per-pixel geometry and material for one view. Unmasked pixels carry depth 0.
struct GBuffer {
    CameraIntrinsics intrinsics;
    ViewPose pose;
    Image depth;     // 1 channel, view-space z
    Image normal;    // 3 channels, unit, view space, facing the camera
    Image albedo;    // 3 channels in [0,1]
    Image roughness; // 1 channel in [0,1]
    Image metallic;  // 1 channel in [0,1]
    Image mask;      // 1 channel, 0 or 1

    static GBuffer allocate(const CameraIntrinsics& intr, const ViewPose& pose = {});

    int width() const { return intrinsics.width; }
    int height() const { return intrinsics.height; }
    bool masked(int y, int x) const { return mask.at(y, x) > 0.5f; }

    // View-space surface point at the center of pixel (x, y).
    Vec3 view_point(int y, int x) const {
        return detail::unproject_unchecked(x + 0.5, y + 0.5, depth.at(y, x), intrinsics);
    }

    // Throws PreconditionError naming the first violated invariant.
    void validate() const;
};

// Material maps recovered by the optimizer or fed to relighting.
struct MaterialMaps {
    Image albedo;
    Image roughness;
    Image metallic;

    static MaterialMaps from_gbuffer(const GBuffer& gb);
    static MaterialMaps uniform(int height, int width, float value);
    void apply_to(GBuffer& gb) const;
};

struct PseudoNormals {
    Image normal;     // 3 channels
    Image degenerate; // 1 channel, 1 where the 3x3 window was collinear
};

// Normals from the 3x3 depth neighbourhood of each pixel. Pixels on the image
// border or next to an unmasked pixel copy the nearest interior normal.
PseudoNormals pseudo_normal(const Image& depth, const Image& mask, const CameraIntrinsics& intr);

} // namespace gigi
