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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gigi {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInvPi = std::numbers::inv_pi;

inline double saturate(double x) { return std::clamp(x, 0.0, 1.0); }

inline double lerp(double a, double b, double t) { return a + (b - a) * t; }

inline Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

// Mirror of `d` about `n`; both unit. reflect(-wo, n) gives the specular direction.
inline Vec3 reflect(const Vec3& d, const Vec3& n) { return d - 2.0 * d.dot(n) * n; }

// Orthonormal frame with `n` as the third axis (Duff et al. 2017, branchless).
struct Frame {
    Vec3 tangent;
    Vec3 bitangent;
    Vec3 normal;

    explicit Frame(const Vec3& n) : normal(n) {
        const double sign = std::copysign(1.0, n.z());
        const double a = -1.0 / (sign + n.z());
        const double b = n.x() * n.y() * a;
        tangent = Vec3(1.0 + sign * n.x() * n.x() * a, sign * b, -sign * n.x());
        bitangent = Vec3(b, sign + n.y() * n.y() * a, -n.y());
    }

    Vec3 to_world(const Vec3& local) const {
        return tangent * local.x() + bitangent * local.y() + normal * local.z();
    }
    Vec3 to_local(const Vec3& w) const { return Vec3(w.dot(tangent), w.dot(bitangent), w.dot(normal)); }
};

inline bool is_unit(const Vec3& v, double tol) { return std::abs(v.norm() - 1.0) <= tol; }

} // namespace gigi
