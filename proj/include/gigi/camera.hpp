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

#include "gigi/math.hpp"

namespace gigi {

// Pinhole camera. View space is right-handed: +x right, +y down, +z into the
// screen. Pixel (i, j) covers [i, i+1) x [j, j+1); its center is (i+0.5, j+0.5).
struct CameraIntrinsics {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
    double z_near = 0.01;
    double z_far = 100.0;

    // Symmetric camera with the given vertical field of view.
    static CameraIntrinsics from_fov(int width, int height, double fov_y_deg, double z_near, double z_far);

    double depth_range() const { return z_far - z_near; }
    bool contains_pixel(double u, double v) const { return u >= 0.0 && v >= 0.0 && u < width && v < height; }

    void validate() const;
};

// Rigid view-from-world transform: x_view = rotation * x_world + translation.
struct ViewPose {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    // Camera at `eye` looking at `target`; `up` fixes the roll (image y points against it).
    static ViewPose look_at(const Vec3& eye, const Vec3& target, const Vec3& up);

    Vec3 to_view(const Vec3& world) const { return rotation * world + translation; }
    Vec3 to_world(const Vec3& view) const { return rotation.transpose() * (view - translation); }
    Vec3 dir_to_view(const Vec3& world_dir) const { return rotation * world_dir; }
    Vec3 dir_to_world(const Vec3& view_dir) const { return rotation.transpose() * view_dir; }
    Vec3 center() const { return -(rotation.transpose() * translation); }

    void validate() const;
};

struct PixelDepth {
    double u = 0.0;
    double v = 0.0;
    double z = 0.0;
};

// (u, v, z) -> view-space point. Checks the pixel and depth ranges.
Vec3 unproject(double u, double v, double z, const CameraIntrinsics& intr);

// View-space point -> (u, v, z). The result may fall outside the image.
PixelDepth project(const Vec3& p, const CameraIntrinsics& intr);

namespace detail {

inline Vec3 unproject_unchecked(double u, double v, double z, const CameraIntrinsics& intr) {
    return Vec3(z * (u - intr.cx) / intr.fx, z * (v - intr.cy) / intr.fy, z);
}

inline PixelDepth project_unchecked(const Vec3& p, const CameraIntrinsics& intr) {
    return {intr.fx * p.x() / p.z() + intr.cx, intr.fy * p.y() / p.z() + intr.cy, p.z()};
}

} // namespace detail

} // namespace gigi
