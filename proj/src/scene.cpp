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

#include "gigi/scene.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "gigi/parallel.hpp"

namespace gigi::scene {

namespace {

struct ShapeIntersector {
    const Vec3& o;
    const Vec3& d;

    std::optional<SceneHit> operator()(const Plane& p) const {
        const double denom = d.dot(p.normal);
        if (denom == 0.0) return std::nullopt;
        const double t = (p.point - o).dot(p.normal) / denom;
        if (!(t > kMinHitDistance)) return std::nullopt;
        return SceneHit{t, o + t * d, p.normal, {}, -1};
    }

    std::optional<SceneHit> operator()(const Sphere& s) const {
        const Vec3 oc = o - s.center;
        const double b = oc.dot(d);
        const double c = oc.squaredNorm() - s.radius * s.radius;
        const double disc = b * b - c;
        if (disc < 0.0) return std::nullopt;
        const double root = std::sqrt(disc);
        double t = -b - root;
        if (!(t > kMinHitDistance)) t = -b + root;
        if (!(t > kMinHitDistance)) return std::nullopt;
        const Vec3 p = o + t * d;
        return SceneHit{t, p, (p - s.center) / s.radius, {}, -1};
    }

    std::optional<SceneHit> operator()(const Box& b) const {
        double t_near = -std::numeric_limits<double>::infinity();
        double t_far = std::numeric_limits<double>::infinity();
        int near_axis = -1;
        int far_axis = -1;
        for (int a = 0; a < 3; ++a) {
            if (d[a] == 0.0) {
                if (o[a] < b.min[a] || o[a] > b.max[a]) return std::nullopt;
                continue;
            }
            double t0 = (b.min[a] - o[a]) / d[a];
            double t1 = (b.max[a] - o[a]) / d[a];
            if (t0 > t1) std::swap(t0, t1);
            if (t0 > t_near) {
                t_near = t0;
                near_axis = a;
            }
            if (t1 < t_far) {
                t_far = t1;
                far_axis = a;
            }
        }
        if (t_near > t_far) return std::nullopt;
        double t = t_near;
        int axis = near_axis;
        double side = -1.0; // entering: normal opposes the ray
        if (!(t > kMinHitDistance)) {
            t = t_far;
            axis = far_axis;
            side = 1.0;
        }
        if (!(t > kMinHitDistance) || axis < 0) return std::nullopt;
        Vec3 n = Vec3::Zero();
        n[axis] = side * std::copysign(1.0, d[axis]);
        return SceneHit{t, o + t * d, n, {}, -1};
    }
};

Vec3 vec3_from(const nlohmann::json& j) {
    const auto a = j.get<std::array<double, 3>>();
    return {a[0], a[1], a[2]};
}

nlohmann::json vec3_json(const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); }

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::optional<SceneHit> intersect_shape(const Shape& shape, const Vec3& origin, const Vec3& dir) {
    return std::visit(ShapeIntersector{origin, dir}, shape);
}

std::optional<SceneHit> Scene::intersect(const Vec3& origin, const Vec3& dir, double t_max) const {
    std::optional<SceneHit> best;
    for (std::size_t i = 0; i < primitives.size(); ++i) {
        auto hit = intersect_shape(primitives[i].shape, origin, dir);
        if (!hit || hit->t >= t_max) continue;
        if (!best || hit->t < best->t) {
            hit->material = primitives[i].material;
            hit->primitive = static_cast<int>(i);
            best = hit;
        }
    }
    return best;
}

bool Scene::occluded(const Vec3& origin, const Vec3& dir, double t_max) const {
    for (const auto& prim : primitives) {
        const auto hit = intersect_shape(prim.shape, origin, dir);
        if (hit && hit->t < t_max) return true;
    }
    return false;
}

bool Scene::inside_solid(const Vec3& p) const {
    for (const auto& prim : primitives) {
        if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
            if ((p - s->center).norm() < s->radius) return true;
        } else if (const auto* b = std::get_if<Box>(&prim.shape)) {
            if ((p.array() > b->min.array()).all() && (p.array() < b->max.array()).all()) return true;
        }
    }
    return false;
}

void Scene::validate() const {
    for (std::size_t i = 0; i < primitives.size(); ++i) {
        const std::string where = "primitive " + std::to_string(i);
        const auto& prim = primitives[i];
        if (const auto* p = std::get_if<Plane>(&prim.shape)) {
            if (!is_unit(p->normal, 1e-6)) throw SceneError(where + ": plane normal is not unit length");
        } else if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
            if (!(s->radius > 0.0)) throw SceneError(where + ": sphere radius must be positive");
        } else if (const auto* b = std::get_if<Box>(&prim.shape)) {
            if (!(b->min.array() < b->max.array()).all()) throw SceneError(where + ": box min must be below max");
        }
        const auto& m = prim.material;
        const bool ok = (m.albedo.array() >= 0.0).all() && (m.albedo.array() <= 1.0).all() && m.metallic >= 0.0 &&
                        m.metallic <= 1.0 && m.roughness >= 0.0 && m.roughness <= 1.0;
        if (!ok) throw SceneError(where + ": material channels must lie in [0,1]");
    }
}

ViewSpec view_from_json(const nlohmann::json& j) {
    ViewSpec v;
    v.eye = vec3_from(j.at("eye"));
    v.target = vec3_from(j.at("target"));
    if (j.contains("up")) v.up = vec3_from(j.at("up"));
    v.fov_y_deg = j.value("fov_y", v.fov_y_deg);
    v.z_near = j.value("z_near", v.z_near);
    v.z_far = j.value("z_far", v.z_far);
    return v;
}

nlohmann::json to_json(const ViewSpec& v) {
    return {{"eye", vec3_json(v.eye)},       {"target", vec3_json(v.target)}, {"up", vec3_json(v.up)},
            {"fov_y", v.fov_y_deg},          {"z_near", v.z_near},            {"z_far", v.z_far}};
}

Scene scene_from_json(const nlohmann::json& j) {
    Scene scene;
    try {
        scene.name = j.value("name", std::string("custom"));
        std::vector<brdf::Material> materials;
        if (j.contains("materials")) {
            for (const auto& m : j.at("materials")) {
                brdf::Material mat;
                if (m.contains("albedo")) mat.albedo = vec3_from(m.at("albedo"));
                mat.roughness = m.value("roughness", mat.roughness);
                mat.metallic = m.value("metallic", mat.metallic);
                materials.push_back(mat);
            }
        }
        for (const auto& p : j.at("primitives")) {
            Primitive prim;
            const std::string type = p.at("type").get<std::string>();
            if (type == "plane") {
                prim.shape = Plane{vec3_from(p.at("point")), vec3_from(p.at("normal")).normalized()};
            } else if (type == "sphere") {
                prim.shape = Sphere{vec3_from(p.at("center")), p.at("radius").get<double>()};
            } else if (type == "box") {
                prim.shape = Box{vec3_from(p.at("min")), vec3_from(p.at("max"))};
            } else {
                throw SceneError("unknown primitive type '" + type + "'");
            }
            const int mi = p.value("material", 0);
            if (!materials.empty()) {
                if (mi < 0 || mi >= static_cast<int>(materials.size())) {
                    throw SceneError("material index " + std::to_string(mi) + " out of range");
                }
                prim.material = materials[static_cast<std::size_t>(mi)];
            }
            scene.primitives.push_back(prim);
        }
        if (j.contains("view")) scene.view = view_from_json(j.at("view"));
        scene.env = j.value("env", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw SceneError(std::string("scene JSON: ") + e.what());
    }
    scene.validate();
    return scene;
}

nlohmann::json to_json(const Scene& scene) {
    nlohmann::json materials = nlohmann::json::array();
    nlohmann::json prims = nlohmann::json::array();
    for (const auto& prim : scene.primitives) {
        const auto& m = prim.material;
        materials.push_back({{"albedo", vec3_json(m.albedo)}, {"roughness", m.roughness}, {"metallic", m.metallic}});
        nlohmann::json p;
        if (const auto* pl = std::get_if<Plane>(&prim.shape)) {
            p = {{"type", "plane"}, {"point", vec3_json(pl->point)}, {"normal", vec3_json(pl->normal)}};
        } else if (const auto* s = std::get_if<Sphere>(&prim.shape)) {
            p = {{"type", "sphere"}, {"center", vec3_json(s->center)}, {"radius", s->radius}};
        } else if (const auto* b = std::get_if<Box>(&prim.shape)) {
            p = {{"type", "box"}, {"min", vec3_json(b->min)}, {"max", vec3_json(b->max)}};
        }
        p["material"] = prims.size();
        prims.push_back(p);
    }
    nlohmann::json j = {{"name", scene.name}, {"materials", materials}, {"primitives", prims}};
    if (scene.view) j["view"] = to_json(*scene.view);
    if (!scene.env.empty()) j["env"] = scene.env;
    return j;
}

nlohmann::json parse_json_file(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": malformed JSON");
    }
}

Scene load_scene(const std::filesystem::path& path) { return scene_from_json(parse_json_file(path)); }

GBuffer synth_gbuffer(const Scene& scene, const ViewPose& pose, const CameraIntrinsics& intr) {
    scene.validate();
    const Vec3 eye = pose.center();
    if (scene.inside_solid(eye)) throw SceneError("camera center lies inside solid geometry");
    GBuffer gb = GBuffer::allocate(intr, pose);
    parallel_rows(intr.height, [&](int y) {
        for (int x = 0; x < intr.width; ++x) {
            const Vec3 ray_view = Vec3((x + 0.5 - intr.cx) / intr.fx, (y + 0.5 - intr.cy) / intr.fy, 1.0).normalized();
            const auto hit = scene.intersect(eye, pose.dir_to_world(ray_view));
            if (!hit) continue;
            const double z = hit->t * ray_view.z();
            if (!(z > intr.z_near && z < intr.z_far)) continue;
            Vec3 n = pose.dir_to_view(hit->normal).normalized();
            if (n.dot(ray_view) > 0.0) n = -n;
            gb.depth.at(y, x) = static_cast<float>(z);
            gb.normal.set_rgb(y, x, n);
            gb.albedo.set_rgb(y, x, hit->material.albedo);
            gb.roughness.at(y, x) = static_cast<float>(hit->material.roughness);
            gb.metallic.at(y, x) = static_cast<float>(hit->material.metallic);
            gb.mask.at(y, x) = 1.0f;
        }
    });
    return gb;
}

GBuffer synth_gbuffer(const Scene& scene, int width, int height) {
    if (!scene.view) throw SceneError("scene '" + scene.name + "' has no view");
    return synth_gbuffer(scene, scene.view->pose(), scene.view->intrinsics(width, height));
}

// ---------------------------------------------------------------------------
// Presets

namespace {

brdf::Material mat(const Vec3& albedo, double roughness, double metallic = 0.0) {
    return {albedo, metallic, roughness};
}

Scene plane_scene() {
    Scene s;
    s.name = "plane";
    s.primitives.push_back({Plane{Vec3(0, 3, 0), Vec3(0, -1, 0)}, mat(Vec3::Ones(), 1.0)});
    s.view = ViewSpec{Vec3::Zero(), Vec3(0, 1, 0), Vec3::UnitZ(), 60.0, 0.1, 10.0};
    return s;
}

Scene corner_scene() {
    Scene s;
    s.name = "corner90";
    s.primitives.push_back({Box{Vec3(-1.5, -1.5, -0.1), Vec3(1.5, 1.5, 0.0)}, mat(Vec3(0.7, 0.7, 0.7), 0.6)});
    s.primitives.push_back({Box{Vec3(-1.5, 1.5, -0.1), Vec3(1.5, 1.7, 2.5)}, mat(Vec3(0.8, 0.6, 0.5), 0.5)});
    s.view = ViewSpec{Vec3(3.5, -4.5, 3.5), Vec3(0.0, 0.5, 0.7), Vec3::UnitZ(), 50.0, 0.1, 15.0};
    return s;
}

Scene box_interior_scene() {
    // Open-top, open-front room seen from outside so every surface is in frame.
    Scene s;
    s.name = "box_interior";
    s.primitives.push_back({Box{Vec3(-2, -2, -0.1), Vec3(2, 2, 0)}, mat(Vec3(0.6, 0.6, 0.55), 0.65)});
    s.primitives.push_back({Box{Vec3(-2.1, 2, -0.1), Vec3(2.1, 2.1, 3)}, mat(Vec3(1.0, 1.0, 1.0), 0.45)});
    s.primitives.push_back({Box{Vec3(-2.1, -2, -0.1), Vec3(-2, 2, 3)}, mat(Vec3(0.7, 0.3, 0.25), 0.3)});
    s.primitives.push_back({Box{Vec3(2, -2, -0.1), Vec3(2.1, 2, 3)}, mat(Vec3(0.25, 0.4, 0.7), 0.3)});
    s.view = ViewSpec{Vec3(0, -6.5, 5.0), Vec3(0, 0.3, 0.9), Vec3::UnitZ(), 50.0, 0.1, 15.0};
    return s;
}

Scene sphere_on_plane_scene() {
    Scene s;
    s.name = "sphere_on_plane";
    s.primitives.push_back({Plane{Vec3(0, 0, 0), Vec3(0, 0, 1)}, mat(Vec3(0.6, 0.6, 0.6), 0.8)});
    s.primitives.push_back({Sphere{Vec3(0, 0, 0.5), 0.5}, mat(Vec3(0.9, 0.2, 0.2), 0.3)});
    s.view = ViewSpec{Vec3(0, -3, 1.6), Vec3(0, 0, 0.3), Vec3::UnitZ(), 50.0, 0.1, 10.0};
    return s;
}

Scene offscreen_wall_scene() {
    Scene s;
    s.name = "box_with_offscreen_wall";
    s.primitives.push_back({Plane{Vec3(0, 0, 0), Vec3(0, 0, 1)}, mat(Vec3(0.6, 0.6, 0.6), 0.8)});
    s.primitives.push_back({Box{Vec3(-3, -1.2, 0), Vec3(3, -0.9, 2.5)}, mat(Vec3(1.0, 1.0, 1.0), 0.7)});
    s.primitives.push_back({Box{Vec3(-0.4, 1.5, 0), Vec3(0.4, 2.3, 0.8)}, mat(Vec3(0.3, 0.5, 0.8), 0.5)});
    const double pitch = 30.0 * kPi / 180.0;
    s.view = ViewSpec{Vec3(0, 0, 1), Vec3(0, std::cos(pitch), 1.0 - std::sin(pitch)), Vec3::UnitZ(), 90.0, 0.05, 8.0};
    return s;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"plane", "corner90", "box_interior", "sphere_on_plane", "box_with_offscreen_wall"};
}

Scene preset(const std::string& name) {
    if (name == "plane") return plane_scene();
    if (name == "corner90") return corner_scene();
    if (name == "box_interior") return box_interior_scene();
    if (name == "sphere_on_plane") return sphere_on_plane_scene();
    if (name == "box_with_offscreen_wall") return offscreen_wall_scene();
    throw SceneError("unknown scene preset '" + name + "'");
}

} // namespace gigi::scene
