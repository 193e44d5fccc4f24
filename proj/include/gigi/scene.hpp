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

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gigi/brdf.hpp"
#include "gigi/gbuffer.hpp"

namespace gigi::scene {

// Analytic primitives in the world frame (z up).
struct Plane {
    Vec3 point;
    Vec3 normal; // unit
};

struct Sphere {
    Vec3 center;
    double radius = 1.0;
};

struct Box {
    Vec3 min;
    Vec3 max;
};

using Shape = std::variant<Plane, Sphere, Box>;

struct Primitive {
    Shape shape;
    brdf::Material material;
};

struct SceneHit {
    double t = 0.0;
    Vec3 point;
    Vec3 normal; // geometric, outward for solids; as given for planes
    brdf::Material material;
    int primitive = -1;
};

inline constexpr double kMinHitDistance = 1e-6;

// Camera placement stored with a scene.
struct ViewSpec {
    Vec3 eye = Vec3::Zero();
    Vec3 target = Vec3::UnitY();
    Vec3 up = Vec3::UnitZ();
    double fov_y_deg = 60.0;
    double z_near = 0.1;
    double z_far = 10.0;

    ViewPose pose() const { return ViewPose::look_at(eye, target, up); }
    CameraIntrinsics intrinsics(int width, int height) const {
        return CameraIntrinsics::from_fov(width, height, fov_y_deg, z_near, z_far);
    }
};

struct Scene {
    std::string name;
    std::vector<Primitive> primitives;
    std::optional<ViewSpec> view;
    std::string env; // optional path, relative to the scene file

    // Nearest hit with kMinHitDistance < t < t_max.
    std::optional<SceneHit> intersect(const Vec3& origin, const Vec3& dir,
                                      double t_max = std::numeric_limits<double>::infinity()) const;
    bool occluded(const Vec3& origin, const Vec3& dir, double t_max) const;
    // True when p lies strictly inside a sphere or box.
    bool inside_solid(const Vec3& p) const;
    void validate() const;
};

std::optional<SceneHit> intersect_shape(const Shape& shape, const Vec3& origin, const Vec3& dir);

// JSON form:
// {"materials": [{"albedo": [r,g,b], "roughness": r, "metallic": m}, ...],
//  "primitives": [{"type": "plane", "point": [...], "normal": [...], "material": i},
//                 {"type": "sphere", "center": [...], "radius": r, "material": i},
//                 {"type": "box", "min": [...], "max": [...], "material": i}],
//  "view": {"eye": [...], "target": [...], "up": [...], "fov_y": deg, "z_near": n, "z_far": f},
//  "env": "path"}
Scene scene_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scene& scene);
ViewSpec view_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ViewSpec& view);
// Parse errors are reported as ConfigError with line and column.
Scene load_scene(const std::filesystem::path& path);
nlohmann::json parse_json_file(const std::filesystem::path& path);

// plane, corner90, box_interior, sphere_on_plane, box_with_offscreen_wall
Scene preset(const std::string& name);
std::vector<std::string> preset_names();

// Ray-cast G-buffer. Normals face the camera; misses stay unmasked.
GBuffer synth_gbuffer(const Scene& scene, const ViewPose& pose, const CameraIntrinsics& intr);
GBuffer synth_gbuffer(const Scene& scene, int width, int height);

} // namespace gigi::scene
