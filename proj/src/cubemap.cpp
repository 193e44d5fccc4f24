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

#include "gigi/cubemap.hpp"

#include <fstream>

#include <json.hpp>

#include "gigi/parallel.hpp"
#include "gigi/tensor_io.hpp"

namespace gigi {

namespace {

constexpr std::array<const char*, kCubeFaces> kFaceNames = {"px", "nx", "py", "ny", "pz", "nz"};

Mat3 rows(const Vec3& right, const Vec3& down, const Vec3& forward) {
    Mat3 m;
    m.row(0) = right.transpose();
    m.row(1) = down.transpose();
    m.row(2) = forward.transpose();
    return m;
}

} // namespace

const char* face_name(int face) { return kFaceNames.at(static_cast<std::size_t>(face)); }

Mat3 face_rotation(int face) {
    const Vec3 x = Vec3::UnitX();
    const Vec3 y = Vec3::UnitY();
    const Vec3 z = Vec3::UnitZ();
    switch (face) {
    case kPosX: return rows(-z, y, x);
    case kNegX: return rows(z, y, -x);
    case kPosY: return rows(x, -z, y);
    case kNegY: return rows(x, z, -y);
    case kPosZ: return rows(x, y, z);
    case kNegZ: return rows(-x, y, -z);
    default: throw PreconditionError("face index out of range");
    }
}

int select_face(const Vec3& d) {
    const Vec3 a = d.cwiseAbs();
    if (a.x() >= a.y() && a.x() >= a.z()) return d.x() >= 0.0 ? kPosX : kNegX;
    if (a.y() >= a.z()) return d.y() >= 0.0 ? kPosY : kNegY;
    return d.z() >= 0.0 ? kPosZ : kNegZ;
}

CameraIntrinsics face_intrinsics(int size, double z_near, double z_far) {
    CameraIntrinsics intr;
    intr.width = size;
    intr.height = size;
    intr.fx = intr.fy = intr.cx = intr.cy = 0.5 * size;
    intr.z_near = z_near;
    intr.z_far = z_far;
    intr.validate();
    return intr;
}

ViewPose face_pose(const ViewPose& center_pose, int face) {
    ViewPose pose;
    pose.rotation = face_rotation(face) * center_pose.rotation;
    pose.translation = -(pose.rotation * center_pose.center());
    return pose;
}

CubemapBundle build_cubemap(const scene::Scene& scene, const ViewPose& center_pose, int face_size, double z_near,
                            double z_far, const ibl::EnvironmentSet& env) {
    if (face_size < 64) throw ConfigError("cubemap faces must be at least 64 pixels");
    center_pose.validate();
    if (scene.inside_solid(center_pose.center())) throw SceneError("cubemap center lies inside solid geometry");
    CubemapBundle cube;
    cube.center_pose = center_pose;
    cube.face_size = face_size;
    const CameraIntrinsics intr = face_intrinsics(face_size, z_near, z_far);
    for (int f = 0; f < kCubeFaces; ++f) {
        CubeFace& face = cube.faces[static_cast<std::size_t>(f)];
        face.gbuffer = scene::synth_gbuffer(scene, face_pose(center_pose, f), intr);
        face.direct = ibl::shade_direct(face.gbuffer, env, Image(face_size, face_size, 1, 1.0f));
    }
    return cube;
}

RayHit world_march_ray(const Vec3& x0, const Vec3& dir, const CubemapBundle& cube, const TracingConfig& cfg,
                       const Vec3& normal) {
    if (!is_unit(dir, 1e-4)) throw PreconditionError("world_march_ray: direction is not unit length");
    const CameraIntrinsics& intr = cube.intrinsics();
    const Vec3 center = cube.center();
    const Vec3 origin = x0 + kNormalOffset * normal;
    const double t = adaptive_step((x0 - center).norm(), cfg.t0, intr);
    const int size = cube.face_size;
    RayHit out;
    for (int k = 1; k <= cfg.max_steps; ++k) {
        out.steps = k;
        const Vec3 x = origin + dir * (k * t);
        const Vec3 local = cube.center_pose.dir_to_view(x - center);
        const int face = select_face(local);
        const Vec3 p = face_rotation(face) * local;
        if (p.z() <= intr.z_near || p.z() >= intr.z_far) break;
        const PixelDepth pd = detail::project_unchecked(p, intr);
        const int px = std::clamp(static_cast<int>(pd.u), 0, size - 1);
        const int py = std::clamp(static_cast<int>(pd.v), 0, size - 1);
        const double zd = cube.faces[static_cast<std::size_t>(face)].gbuffer.depth.at(py, px);
        if (zd <= 0.0) continue;
        if (zd < p.z() && p.z() < zd + cfg.thickness) {
            out.hit = true;
            out.px = px;
            out.py = py;
            out.face = face;
            return out;
        }
    }
    return out;
}

TraceCache world_trace_hits(const GBuffer& front, const CubemapBundle& cube, const TracingConfig& cfg,
                            const TraceHooks& hooks) {
    if ((front.pose.center() - cube.center()).norm() > 1e-6) {
        throw PreconditionError("world tracing: front view must share the cubemap center");
    }
    return build_trace_cache(front.height(), front.width(), cube.face_size, cfg, hooks, [&](int y, int x) {
        const Vec3 n_view = front.normal.rgb(y, x);
        const Vec3 x0 = front.pose.to_world(front.view_point(y, x));
        const Vec3 n = front.pose.dir_to_world(n_view);
        const Frame frame(n_view);
        auto march = [&front, &cube, &cfg, x0, n, frame](const Vec3& local) {
            return world_march_ray(x0, front.pose.dir_to_world(frame.to_world(local)), cube, cfg, n);
        };
        return front.masked(y, x) ? std::optional<decltype(march)>(march) : std::nullopt;
    });
}

std::vector<const Image*> face_sources(const CubemapBundle& cube) {
    std::vector<const Image*> sources;
    for (const CubeFace& face : cube.faces) sources.push_back(&face.direct);
    return sources;
}

TraceResult world_occlusion_indirect(const GBuffer& front, const CubemapBundle& cube, const TracingConfig& cfg,
                                     const TraceHooks& hooks) {
    TraceCache cache = world_trace_hits(front, cube, cfg, hooks);
    TraceResult out;
    out.incident = gather_incident(cache, face_sources(cube));
    out.indirect = apply_diffuse_albedo(front, out.incident);
    out.occlusion = std::move(cache.occlusion);
    out.hits = std::move(cache.hits);
    return out;
}

void store_cubemap(const CubemapBundle& cube, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nlohmann::json faces = nlohmann::json::array();
    for (int f = 0; f < kCubeFaces; ++f) {
        const CubeFace& face = cube.faces[static_cast<std::size_t>(f)];
        const auto face_dir = dir / (std::string("face_") + face_name(f));
        io::store_gbuffer(face.gbuffer, face_dir);
        io::store_map(face.direct, face_dir / "direct.gigt", "direct", face.gbuffer.intrinsics, face.gbuffer.pose);
        faces.push_back({{"name", face_name(f)}, {"pose", io::to_json(face.gbuffer.pose)}});
    }
    const nlohmann::json manifest = {{"face_size", cube.face_size},
                                     {"center_pose", io::to_json(cube.center_pose)},
                                     {"intrinsics", io::to_json(cube.intrinsics())},
                                     {"faces", faces}};
    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << "\n";
}

CubemapBundle load_cubemap(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("missing cubemap manifest in " + dir.string());
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cubemap manifest: " + std::string(e.what()));
    }
    CubemapBundle cube;
    cube.face_size = manifest.at("face_size").get<int>();
    cube.center_pose = io::pose_from_json(manifest.at("center_pose"));
    for (int f = 0; f < kCubeFaces; ++f) {
        const auto face_dir = dir / (std::string("face_") + face_name(f));
        CubeFace& face = cube.faces[static_cast<std::size_t>(f)];
        face.gbuffer = io::load_gbuffer(face_dir);
        face.direct = io::load_tensor(face_dir / "direct.gigt");
        if (face.gbuffer.width() != cube.face_size || face.gbuffer.height() != cube.face_size) {
            throw DimensionError("cubemap face " + std::string(face_name(f)) + " has the wrong size");
        }
    }
    return cube;
}

} // namespace gigi
