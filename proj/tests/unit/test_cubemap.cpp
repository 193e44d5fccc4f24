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

#include <doctest.h>

#include <random>

#include "gigi/cubemap.hpp"
#include "gigi/error.hpp"
#include "gigi/ibl.hpp"
#include "gigi/tracing.hpp"
#include "support.hpp"

using namespace gigi;

namespace {

// Room x in [-2, 2], y in [-3, 3], z in [0, 2.5] built from six slabs.
scene::Scene closed_room() {
    scene::Scene s;
    s.name = "room";
    const brdf::Material m{Vec3(0.5, 0.5, 0.5), 0.0, 0.6};
    s.primitives.push_back({scene::Box{Vec3(-3, -4, -0.5), Vec3(3, 4, 0)}, m});
    s.primitives.push_back({scene::Box{Vec3(-3, -4, 2.5), Vec3(3, 4, 3)}, m});
    s.primitives.push_back({scene::Box{Vec3(-3, -4, -0.5), Vec3(-2, 4, 3)}, m});
    s.primitives.push_back({scene::Box{Vec3(2, -4, -0.5), Vec3(3, 4, 3)}, m});
    s.primitives.push_back({scene::Box{Vec3(-3, -4, -0.5), Vec3(3, -3, 3)}, m});
    s.primitives.push_back({scene::Box{Vec3(-3, 3, -0.5), Vec3(3, 4, 3)}, m});
    return s;
}

ViewPose room_pose() { return ViewPose::look_at(Vec3(0, 0, 1), Vec3(0, 1, 1), Vec3::UnitZ()); }

// Same center, rotated by `deg` about the view's vertical axis.
ViewPose yawed(const ViewPose& pose, double deg) {
    const double a = deg * kPi / 180.0;
    Mat3 r;
    r << std::cos(a), 0, -std::sin(a), 0, 1, 0, std::sin(a), 0, std::cos(a);
    ViewPose out;
    out.rotation = r * pose.rotation;
    out.translation = -(out.rotation * pose.center());
    return out;
}

double masked_mad(const GBuffer& gb, const Image& a, const Image& b) {
    double s = 0.0;
    int n = 0;
    for (int y = 0; y < gb.height(); ++y) {
        for (int x = 0; x < gb.width(); ++x) {
            if (!gb.masked(y, x)) continue;
            s += std::abs(double(a.at(y, x)) - b.at(y, x));
            ++n;
        }
    }
    return s / n;
}

} // namespace

TEST_SUITE("cubemap") {

TEST_CASE("face rotations are proper and the front face is the identity") {
    for (int f = 0; f < kCubeFaces; ++f) {
        const Mat3 r = face_rotation(f);
        CHECK((r * r.transpose() - Mat3::Identity()).norm() < 1e-12);
        CHECK(r.determinant() == doctest::Approx(1.0));
    }
    CHECK((face_rotation(kPosZ) - Mat3::Identity()).norm() == 0.0);
    CHECK(face_rotation(kPosX).row(2).transpose().isApprox(Vec3::UnitX()));
    CHECK(face_rotation(kNegX).row(2).transpose().isApprox(-Vec3::UnitX()));
    CHECK(face_rotation(kPosY).row(2).transpose().isApprox(Vec3::UnitY()));
    CHECK(face_rotation(kNegY).row(2).transpose().isApprox(-Vec3::UnitY()));
    CHECK(face_rotation(kNegZ).row(2).transpose().isApprox(-Vec3::UnitZ()));
    CHECK_THROWS_AS(face_rotation(6), PreconditionError);
}

TEST_CASE("face selection is total and breaks ties x, y, z") {
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int i = 0; i < 2000; ++i) {
        const Vec3 d(g(rng), g(rng), g(rng));
        const int f = select_face(d);
        REQUIRE(f >= 0);
        REQUIRE(f < kCubeFaces);
        const Vec3 p = face_rotation(f) * d;
        CHECK(p.z() > 0.0);
        CHECK(std::abs(p.x()) <= p.z() + 1e-12);
        CHECK(std::abs(p.y()) <= p.z() + 1e-12);
    }
    CHECK(select_face(Vec3(1, 1, 0)) == kPosX);
    CHECK(select_face(Vec3(-1, 1, 1)) == kNegX);
    CHECK(select_face(Vec3(0, -1, 1)) == kNegY);
    CHECK(select_face(Vec3(0, 0, -2)) == kNegZ);
}

TEST_CASE("face poses share the center") {
    const ViewPose pose = scene::preset("sphere_on_plane").view->pose();
    for (int f = 0; f < kCubeFaces; ++f) CHECK((face_pose(pose, f).center() - pose.center()).norm() < 1e-12);
    const auto intr = face_intrinsics(128, 0.1, 10.0);
    CHECK(intr.fx == 64.0);
    CHECK(intr.cy == 64.0);
}

TEST_CASE("empty scene leaves every face unmasked") {
    scene::Scene empty;
    empty.name = "empty";
    const auto cube = build_cubemap(empty, room_pose(), 64, 0.05, 10.0, testing::constant_env());
    for (const auto& face : cube.faces) {
        double m = 0.0;
        for (std::size_t i = 0; i < face.gbuffer.mask.size(); ++i) m += face.gbuffer.mask.data()[i];
        CHECK(m == 0.0);
    }
}

TEST_CASE("closed room masks every face with analytic center depths") {
    const auto cube = build_cubemap(closed_room(), room_pose(), 64, 0.05, 10.0, testing::constant_env());
    // Distance from (0,0,1) to the wall each face looks at.
    const double expected[kCubeFaces] = {2.0, 2.0, 1.0, 1.5, 3.0, 3.0};
    for (int f = 0; f < kCubeFaces; ++f) {
        const GBuffer& gb = cube.faces[static_cast<std::size_t>(f)].gbuffer;
        int masked = 0;
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) masked += gb.masked(y, x);
        CHECK(masked == 64 * 64);
        for (int y = 31; y <= 32; ++y)
            for (int x = 31; x <= 32; ++x) CHECK(gb.depth.at(y, x) == doctest::Approx(expected[f]).epsilon(1e-5));
    }
}

TEST_CASE("a seam point maps to the shared edge of both faces") {
    const int size = 128;
    const ViewPose center = room_pose();
    const auto cube = build_cubemap(closed_room(), center, size, 0.05, 10.0, testing::constant_env());
    // On the x = 2 wall, equally far along the +x and +z face axes.
    const Vec3 p(2.0, 2.0, 1.3);
    const ViewPose px = face_pose(center, kPosX), pz = face_pose(center, kPosZ);
    const auto ax = project(px.to_view(p), cube.intrinsics());
    const auto az = project(pz.to_view(p), cube.intrinsics());
    CHECK(ax.z == doctest::Approx(2.0));
    CHECK(az.z == doctest::Approx(2.0));
    CHECK(std::min(std::abs(ax.u), std::abs(ax.u - size)) < 1e-9);
    CHECK(std::min(std::abs(az.u), std::abs(az.u - size)) < 1e-9);
    CHECK(ax.v == doctest::Approx(az.v));
    const Vec3 bx = px.to_world(detail::unproject_unchecked(ax.u, ax.v, ax.z, cube.intrinsics()));
    const Vec3 bz = pz.to_world(detail::unproject_unchecked(az.u, az.v, az.z, cube.intrinsics()));
    CHECK((bx - p).norm() < 1e-3);
    CHECK((bz - p).norm() < 1e-3);

    // Stored depths on either side of the seam reconstruct nearby wall points.
    const int row = static_cast<int>(ax.v);
    const auto reconstruct = [&](int face, int col) {
        const GBuffer& gb = cube.faces[static_cast<std::size_t>(face)].gbuffer;
        return gb.pose.to_world(gb.view_point(row, col));
    };
    const int cx = ax.u < 1.0 ? 0 : size - 1;
    const int cz = az.u < 1.0 ? 0 : size - 1;
    const Vec3 wx = reconstruct(kPosX, cx), wz = reconstruct(kPosZ, cz);
    const double footprint = 2.0 * std::sqrt(2.0) * 2.0 / (size / 2.0);
    CHECK(std::abs(wx.x() - 2.0) < 1e-4);
    CHECK(std::abs(wz.x() - 2.0) < 1e-4);
    CHECK((wx - p).norm() < footprint);
    CHECK((wz - p).norm() < footprint);
}

TEST_CASE("world march finds a wall across a seam and misses open sky") {
    const ViewPose center = room_pose();
    const auto cube = build_cubemap(closed_room(), center, 128, 0.05, 10.0, testing::constant_env());
    const TracingConfig cfg = TracingConfig::defaults(cube.intrinsics());
    const scene::Scene room = closed_room();
    const Vec3 x0(0.5, 0.5, 0.0);
    const Vec3 dir = Vec3(1.0, 0.8, 0.6).normalized();
    const RayHit h = world_march_ray(x0, dir, cube, cfg, Vec3::UnitZ());
    REQUIRE(h.hit);
    const GBuffer& gb = cube.faces[static_cast<std::size_t>(h.face)].gbuffer;
    const Vec3 got = gb.pose.to_world(gb.view_point(h.py, h.px));
    const auto truth = room.intersect(x0 + kNormalOffset * Vec3::UnitZ(), dir);
    REQUIRE(truth);
    const double step = adaptive_step((x0 - center.center()).norm(), cfg.t0, cube.intrinsics());
    CHECK((got - truth->point).norm() < 2.0 * step);

    scene::Scene floor_only;
    floor_only.primitives.push_back(room.primitives[0]);
    const auto open = build_cubemap(floor_only, center, 64, 0.05, 10.0, testing::constant_env());
    CHECK_FALSE(world_march_ray(x0, Vec3::UnitZ(), open, cfg, Vec3::UnitZ()).hit);
    CHECK_THROWS_AS(world_march_ray(x0, Vec3(1, 1, 0), open, cfg), PreconditionError);
}

TEST_CASE("an off-screen wall is found on a side face and missed in screen space") {
    const auto sc = scene::preset("box_with_offscreen_wall");
    const GBuffer gb = scene::synth_gbuffer(sc, 64, 64);
    const auto cube = build_cubemap(sc, gb.pose, 64, gb.intrinsics.z_near, gb.intrinsics.z_far, testing::constant_env());
    const TracingConfig cfg = TracingConfig::defaults(gb.intrinsics);
    const int y = 60, x = 32;
    REQUIRE(gb.masked(y, x));
    const Vec3 xv = gb.view_point(y, x);
    const Vec3 xw = gb.pose.to_world(xv);
    REQUIRE(std::abs(xw.z()) < 1e-6);
    const Vec3 dir_w = (Vec3(0.0, -0.9, 1.5) - xw).normalized();
    const RayHit w = world_march_ray(xw, dir_w, cube, cfg, Vec3::UnitZ());
    REQUIRE(w.hit);
    CHECK(w.face != kPosZ);
    const RayHit s = march_ray(xv, gb.pose.dir_to_view(dir_w), gb.depth, gb.intrinsics, cfg, gb.normal.rgb(y, x));
    CHECK_FALSE(s.hit);

    const TraceResult world = world_occlusion_indirect(gb, cube, cfg);
    const Image screen = occlusion_map(gb, cfg);
    CHECK(world.occlusion.at(y, x) < screen.at(y, x));
}

TEST_CASE("world and screen occlusion agree without hidden geometry") {
    const auto sc = scene::preset("corner90");
    const GBuffer gb = scene::synth_gbuffer(sc, 64, 64);
    const auto cube = build_cubemap(sc, gb.pose, 128, gb.intrinsics.z_near, gb.intrinsics.z_far, testing::constant_env());
    const TracingConfig cfg = TracingConfig::defaults(gb.intrinsics);
    const Image world = world_trace_hits(gb, cube, cfg).occlusion;
    const Image screen = occlusion_map(gb, cfg);
    CHECK(masked_mad(gb, world, screen) <= 0.02);
}

TEST_CASE("occlusion is continuous under cube rotation") {
    const auto sc = scene::preset("box_interior");
    const GBuffer gb = scene::synth_gbuffer(sc, 64, 64);
    const TracingConfig cfg = TracingConfig::defaults(gb.intrinsics);
    const double zn = gb.intrinsics.z_near, zf = gb.intrinsics.z_far;
    const auto base = build_cubemap(sc, gb.pose, 128, zn, zf, testing::constant_env());
    const Image o0 = world_trace_hits(gb, base, cfg).occlusion;
    for (double deg : {90.0, 45.0}) {
        CAPTURE(deg);
        const auto turned = build_cubemap(sc, yawed(gb.pose, deg), 128, zn, zf, testing::constant_env());
        const Image o1 = world_trace_hits(gb, turned, cfg).occlusion;
        CHECK(masked_mad(gb, o0, o1) < 0.03);
    }
}

TEST_CASE("front view must share the cube center") {
    const auto sc = scene::preset("sphere_on_plane");
    const GBuffer gb = scene::synth_gbuffer(sc, 32, 32);
    ViewPose moved = gb.pose;
    moved.translation += Vec3(0.1, 0, 0);
    const auto cube = build_cubemap(sc, moved, 64, 0.1, 10.0, testing::constant_env());
    CHECK_THROWS_AS(world_trace_hits(gb, cube, TracingConfig::defaults(gb.intrinsics)), PreconditionError);
}

TEST_CASE("build preconditions") {
    const auto sc = scene::preset("sphere_on_plane");
    CHECK_THROWS_AS(build_cubemap(sc, sc.view->pose(), 32, 0.1, 10.0, testing::constant_env()), ConfigError);
    const ViewPose inside = ViewPose::look_at(Vec3(0, 0, 0.5), Vec3(0, 1, 0.5), Vec3::UnitZ());
    CHECK_THROWS_AS(build_cubemap(sc, inside, 64, 0.1, 10.0, testing::constant_env()), SceneError);
}

TEST_CASE("store and load round trip") {
    const auto sc = scene::preset("box_with_offscreen_wall");
    const auto cube = build_cubemap(sc, sc.view->pose(), 64, 0.05, 8.0, testing::sky_env());
    testing::TempDir dir("cube");
    store_cubemap(cube, dir.path());
    const auto back = load_cubemap(dir.path());
    CHECK(back.face_size == 64);
    CHECK((back.center() - cube.center()).norm() < 1e-12);
    for (int f = 0; f < kCubeFaces; ++f) {
        const auto& a = cube.faces[static_cast<std::size_t>(f)];
        const auto& b = back.faces[static_cast<std::size_t>(f)];
        CHECK(bitwise_equal(a.gbuffer.depth, b.gbuffer.depth));
        CHECK(bitwise_equal(a.gbuffer.normal, b.gbuffer.normal));
        CHECK(bitwise_equal(a.direct, b.direct));
        CHECK((a.gbuffer.pose.rotation - b.gbuffer.pose.rotation).norm() < 1e-12);
    }
    CHECK_THROWS_AS(load_cubemap(dir / "nope"), IoError);
}

}
