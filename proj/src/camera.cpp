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

#include "gigi/camera.hpp"

#include <string>

#include "gigi/error.hpp"

namespace gigi {

CameraIntrinsics CameraIntrinsics::from_fov(int width, int height, double fov_y_deg, double z_near, double z_far) {
    CameraIntrinsics intr;
    intr.width = width;
    intr.height = height;
    intr.fy = 0.5 * height / std::tan(0.5 * fov_y_deg * kPi / 180.0);
    intr.fx = intr.fy;
    intr.cx = 0.5 * width;
    intr.cy = 0.5 * height;
    intr.z_near = z_near;
    intr.z_far = z_far;
    intr.validate();
    return intr;
}

void CameraIntrinsics::validate() const {
    if (!(fx > 0.0) || !(fy > 0.0)) throw PreconditionError("focal lengths must be positive");
    if (width <= 0 || height <= 0) throw PreconditionError("image size must be positive");
    if (!(cx >= 0.0 && cx < width) || !(cy >= 0.0 && cy < height)) {
        throw PreconditionError("principal point outside the image");
    }
    if (!(z_near > 0.0) || !(z_far > z_near)) throw PreconditionError("need 0 < z_near < z_far");
}

ViewPose ViewPose::look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
    const Vec3 forward = (target - eye).normalized();
    const Vec3 right = forward.cross(up).normalized();
    const Vec3 down = forward.cross(right);
    ViewPose pose;
    pose.rotation.row(0) = right.transpose();
    pose.rotation.row(1) = down.transpose();
    pose.rotation.row(2) = forward.transpose();
    pose.translation = -(pose.rotation * eye);
    pose.validate();
    return pose;
}

void ViewPose::validate() const {
    const Mat3 gram = rotation.transpose() * rotation;
    if (!gram.isApprox(Mat3::Identity(), 1e-6) || (gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-6) {
        throw PreconditionError("pose rotation is not orthonormal");
    }
    if (std::abs(rotation.determinant() - 1.0) > 1e-6) throw PreconditionError("pose rotation has det != +1");
}

Vec3 unproject(double u, double v, double z, const CameraIntrinsics& intr) {
    if (!(z > intr.z_near && z < intr.z_far)) {
        throw PreconditionError("unproject: depth " + std::to_string(z) + " outside (z_near, z_far)");
    }
    if (!intr.contains_pixel(u, v)) {
        throw PreconditionError("unproject: pixel (" + std::to_string(u) + ", " + std::to_string(v) +
                                ") outside the image");
    }
    return detail::unproject_unchecked(u, v, z, intr);
}

PixelDepth project(const Vec3& p, const CameraIntrinsics& intr) {
    if (!(p.z() > 0.0)) throw PreconditionError("project: point is behind the camera");
    return detail::project_unchecked(p, intr);
}

} // namespace gigi
