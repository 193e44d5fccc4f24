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

#include "gigi/gbuffer.hpp"

#include <array>
#include <deque>
#include <string>

#include "gigi/parallel.hpp"

namespace gigi {

GBuffer GBuffer::allocate(const CameraIntrinsics& intr, const ViewPose& pose) {
    intr.validate();
    GBuffer gb;
    gb.intrinsics = intr;
    gb.pose = pose;
    const int h = intr.height;
    const int w = intr.width;
    gb.depth = Image(h, w, 1);
    gb.normal = Image(h, w, 3);
    gb.albedo = Image(h, w, 3);
    gb.roughness = Image(h, w, 1);
    gb.metallic = Image(h, w, 1);
    gb.mask = Image(h, w, 1);
    return gb;
}

void GBuffer::validate() const {
    intrinsics.validate();
    pose.validate();
    const int h = height();
    const int w = width();
    auto check_shape = [&](const Image& img, int channels, const char* name) {
        if (img.height() != h || img.width() != w || img.channels() != channels) {
            throw PreconditionError(std::string("gbuffer: ") + name + " has the wrong shape");
        }
    };
    check_shape(depth, 1, "depth");
    check_shape(normal, 3, "normal");
    check_shape(albedo, 3, "albedo");
    check_shape(roughness, 1, "roughness");
    check_shape(metallic, 1, "metallic");
    check_shape(mask, 1, "mask");

    auto in_unit = [](float v) { return v >= 0.0f && v <= 1.0f; };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!masked(y, x)) continue;
            const std::string where = " at pixel (" + std::to_string(x) + ", " + std::to_string(y) + ")";
            const double z = depth.at(y, x);
            if (!(z > intrinsics.z_near && z < intrinsics.z_far)) {
                throw PreconditionError("gbuffer: depth outside (z_near, z_far)" + where);
            }
            if (!is_unit(normal.rgb(y, x), 1e-5)) throw PreconditionError("gbuffer: non-unit normal" + where);
            for (int c = 0; c < 3; ++c) {
                if (!in_unit(albedo.at(y, x, c))) throw PreconditionError("gbuffer: albedo outside [0,1]" + where);
            }
            if (!in_unit(roughness.at(y, x)) || !in_unit(metallic.at(y, x))) {
                throw PreconditionError("gbuffer: roughness/metallic outside [0,1]" + where);
            }
        }
    }
}

MaterialMaps MaterialMaps::from_gbuffer(const GBuffer& gb) { return {gb.albedo, gb.roughness, gb.metallic}; }

MaterialMaps MaterialMaps::uniform(int height, int width, float value) {
    return {Image(height, width, 3, value), Image(height, width, 1, value), Image(height, width, 1, value)};
}

void MaterialMaps::apply_to(GBuffer& gb) const {
    require_same_extent(albedo, gb.depth, "material maps vs gbuffer");
    gb.albedo = albedo;
    gb.roughness = roughness;
    gb.metallic = metallic;
}

namespace {

// Neighbours in circular order so consecutive tangents sweep a consistent winding.
constexpr std::array<std::array<int, 2>, 8> kRing = {{
    {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1},
}};

} // namespace

PseudoNormals pseudo_normal(const Image& depth, const Image& mask, const CameraIntrinsics& intr) {
    intr.validate();
    require_same_extent(depth, mask, "pseudo_normal: depth vs mask");
    const int h = depth.height();
    const int w = depth.width();
    PseudoNormals out{Image(h, w, 3), Image(h, w, 1)};
    Image interior(h, w, 1);

    auto is_masked = [&](int y, int x) { return mask.at(y, x) > 0.5f; };

    parallel_rows(h, [&](int y) {
        for (int x = 0; x < w; ++x) {
            if (!is_masked(y, x) || y == 0 || x == 0 || y == h - 1 || x == w - 1) continue;
            bool full = true;
            for (const auto& [dy, dx] : kRing) full = full && is_masked(y + dy, x + dx);
            if (!full) continue;

            const Vec3 center = detail::unproject_unchecked(x + 0.5, y + 0.5, depth.at(y, x), intr);
            std::array<Vec3, 8> tangents;
            double scale = 0.0;
            for (std::size_t k = 0; k < kRing.size(); ++k) {
                const int yy = y + kRing[k][0];
                const int xx = x + kRing[k][1];
                tangents[k] = detail::unproject_unchecked(xx + 0.5, yy + 0.5, depth.at(yy, xx), intr) - center;
                scale += tangents[k].squaredNorm();
            }
            Vec3 sum = Vec3::Zero();
            for (std::size_t k = 0; k < tangents.size(); ++k) {
                sum += tangents[k].cross(tangents[(k + 1) % tangents.size()]);
            }
            const double len = sum.norm();
            if (!(len > 1e-12 * scale)) {
                out.normal.set_rgb(y, x, Vec3(0.0, 0.0, -1.0));
                out.degenerate.at(y, x) = 1.0f;
                continue;
            }
            Vec3 n = sum / len;
            if (n.dot(center) > 0.0) n = -n;
            out.normal.set_rgb(y, x, n);
            interior.at(y, x) = 1.0f;
        }
    });

    // Multi-source BFS (8-connected) from valid interior pixels fills the rest
    // of the mask with the nearest interior normal.
    std::vector<int> source(static_cast<std::size_t>(h) * w, -1);
    std::deque<int> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (interior.at(y, x) > 0.5f) {
                source[static_cast<std::size_t>(y) * w + x] = y * w + x;
                queue.push_back(y * w + x);
            }
        }
    }
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        const int y = id / w;
        const int x = id % w;
        for (const auto& [dy, dx] : kRing) {
            const int yy = y + dy;
            const int xx = x + dx;
            if (yy < 0 || xx < 0 || yy >= h || xx >= w) continue;
            const std::size_t nid = static_cast<std::size_t>(yy) * w + xx;
            if (source[nid] >= 0 || !is_masked(yy, xx) || out.degenerate.at(yy, xx) > 0.5f) continue;
            source[nid] = source[static_cast<std::size_t>(id)];
            queue.push_back(static_cast<int>(nid));
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!is_masked(y, x) || interior.at(y, x) > 0.5f || out.degenerate.at(y, x) > 0.5f) continue;
            const int src = source[static_cast<std::size_t>(y) * w + x];
            if (src < 0) {
                out.normal.set_rgb(y, x, Vec3(0.0, 0.0, -1.0));
                out.degenerate.at(y, x) = 1.0f;
            } else {
                out.normal.set_rgb(y, x, out.normal.rgb(src / w, src % w));
            }
        }
    }
    return out;
}

} // namespace gigi
