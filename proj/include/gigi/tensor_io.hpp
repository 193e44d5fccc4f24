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
#include <optional>
#include <string>

#include <json.hpp>

#include "gigi/gbuffer.hpp"
#include "gigi/image.hpp"

namespace gigi::io {

namespace fs = std::filesystem;

// GIGT v1: "GIGT", u32 height, u32 width, u32 channels (little endian), then
// height*width*channels little-endian IEEE-754 binary32 values, row-major,
// channel-interleaved.
inline constexpr char kMagic[4] = {'G', 'I', 'G', 'T'};
inline constexpr std::size_t kHeaderBytes = 16;

void store_tensor(const Image& map, const fs::path& path);
Image load_tensor(const fs::path& path);

// Byte-level codec, shared by the file functions above.
std::string encode_tensor(const Image& map);
Image decode_tensor(std::string_view bytes);

// JSON sidecar `<name>.json` next to `<name>.gigt`.
struct Sidecar {
    std::string role;
    std::optional<CameraIntrinsics> intrinsics;
    std::optional<ViewPose> pose;
};

fs::path sidecar_path(const fs::path& tensor_path);
void store_sidecar(const Sidecar& sidecar, const fs::path& tensor_path);
std::optional<Sidecar> load_sidecar(const fs::path& tensor_path);

nlohmann::json to_json(const CameraIntrinsics& intr);
CameraIntrinsics intrinsics_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ViewPose& pose);
ViewPose pose_from_json(const nlohmann::json& j);

// Writes map + sidecar in one go.
void store_map(const Image& map, const fs::path& path, const std::string& role,
               const std::optional<CameraIntrinsics>& intr = std::nullopt,
               const std::optional<ViewPose>& pose = std::nullopt);

// PFM ("PF" color or "Pf" grayscale, bottom row first). Grayscale is expanded
// to three channels. A positive scale marks big-endian payloads.
Image load_pfm(const fs::path& path);
void store_pfm(const Image& rgb, const fs::path& path);

// Environment map from .pfm or .gigt.
Image load_environment(const fs::path& path);

// G-buffer directory: depth, normal, albedo, roughness, metallic GIGT files
// plus sidecars. Coverage is carried by depth (0 = empty pixel).
void store_gbuffer(const GBuffer& gb, const fs::path& dir);
GBuffer load_gbuffer(const fs::path& dir);

void store_materials(const MaterialMaps& mats, const fs::path& dir);
MaterialMaps load_materials(const fs::path& dir);

std::string sha256_file(const fs::path& path);
std::string sha256_bytes(std::string_view bytes);

} // namespace gigi::io
