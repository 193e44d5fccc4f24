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

#include "gigi/tensor_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace gigi::io {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    return v;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::move(ss).str();
}

void write_file(const fs::path& path, std::string_view bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

} // namespace

std::string encode_tensor(const Image& map) {
    std::string out;
    out.reserve(kHeaderBytes + map.size() * 4);
    out.append(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(map.height()));
    put_u32(out, static_cast<std::uint32_t>(map.width()));
    put_u32(out, static_cast<std::uint32_t>(map.channels()));
    for (float v : map.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

Image decode_tensor(std::string_view bytes) {
    if (bytes.size() < 4) throw FormatError("truncated GIGT magic", bytes.size());
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad GIGT magic", 0);
    if (bytes.size() < kHeaderBytes) throw FormatError("truncated GIGT header", bytes.size());
    const std::uint64_t h = get_u32(bytes, 4);
    const std::uint64_t w = get_u32(bytes, 8);
    const std::uint64_t c = get_u32(bytes, 12);
    if (c == 0) throw FormatError("GIGT channel count is zero", 12);
    constexpr std::uint64_t kMaxDim = static_cast<std::uint64_t>(std::numeric_limits<int>::max());
    if (h > kMaxDim || w > kMaxDim || c > kMaxDim) throw FormatError("GIGT dimension overflow", 4);
    const std::uint64_t count = h * w * c;
    if (h != 0 && w != 0 && (count / h / w != c || count > std::numeric_limits<std::uint64_t>::max() / 4)) {
        throw FormatError("GIGT dimension overflow", 4);
    }
    const std::uint64_t expected = kHeaderBytes + count * 4;
    if (bytes.size() < expected) {
        // Offset of the first float that is not fully present.
        const std::uint64_t complete = (bytes.size() - kHeaderBytes) / 4;
        throw FormatError("truncated GIGT payload", kHeaderBytes + complete * 4);
    }
    if (bytes.size() > expected) throw FormatError("trailing bytes after GIGT payload", expected);
    if (count > static_cast<std::uint64_t>(std::numeric_limits<std::ptrdiff_t>::max() / 4)) {
        throw FormatError("GIGT dimension overflow", 4);
    }
    Image map(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c));
    auto data = map.data();
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * i));
    return map;
}

void store_tensor(const Image& map, const fs::path& path) { write_file(path, encode_tensor(map)); }

Image load_tensor(const fs::path& path) { return decode_tensor(read_file(path)); }

fs::path sidecar_path(const fs::path& tensor_path) {
    fs::path p = tensor_path;
    p.replace_extension(".json");
    return p;
}

nlohmann::json to_json(const CameraIntrinsics& intr) {
    return {{"fx", intr.fx},         {"fy", intr.fy},         {"cx", intr.cx},
            {"cy", intr.cy},         {"width", intr.width},   {"height", intr.height},
            {"z_near", intr.z_near}, {"z_far", intr.z_far}};
}

CameraIntrinsics intrinsics_from_json(const nlohmann::json& j) {
    CameraIntrinsics intr;
    intr.fx = j.at("fx").get<double>();
    intr.fy = j.at("fy").get<double>();
    intr.cx = j.at("cx").get<double>();
    intr.cy = j.at("cy").get<double>();
    intr.width = j.at("width").get<int>();
    intr.height = j.at("height").get<int>();
    intr.z_near = j.at("z_near").get<double>();
    intr.z_far = j.at("z_far").get<double>();
    intr.validate();
    return intr;
}

nlohmann::json to_json(const ViewPose& pose) {
    nlohmann::json rot = nlohmann::json::array();
    for (int r = 0; r < 3; ++r) rot.push_back({pose.rotation(r, 0), pose.rotation(r, 1), pose.rotation(r, 2)});
    return {{"rotation", rot},
            {"translation", {pose.translation.x(), pose.translation.y(), pose.translation.z()}}};
}

ViewPose pose_from_json(const nlohmann::json& j) {
    ViewPose pose;
    if (j.contains("eye")) {
        const auto eye = j.at("eye").get<std::array<double, 3>>();
        const auto target = j.at("target").get<std::array<double, 3>>();
        const auto up = j.value("up", std::array<double, 3>{0.0, 0.0, 1.0});
        return ViewPose::look_at(Vec3(eye[0], eye[1], eye[2]), Vec3(target[0], target[1], target[2]),
                                 Vec3(up[0], up[1], up[2]));
    }
    const auto& rot = j.at("rotation");
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) pose.rotation(r, c) = rot.at(r).at(c).get<double>();
    }
    const auto t = j.at("translation").get<std::array<double, 3>>();
    pose.translation = Vec3(t[0], t[1], t[2]);
    pose.validate();
    return pose;
}

void store_sidecar(const Sidecar& sidecar, const fs::path& tensor_path) {
    nlohmann::json j = {{"role", sidecar.role}};
    if (sidecar.intrinsics) j.update(to_json(*sidecar.intrinsics));
    if (sidecar.pose) j["pose"] = to_json(*sidecar.pose);
    write_file(sidecar_path(tensor_path), j.dump(2) + "\n");
}

std::optional<Sidecar> load_sidecar(const fs::path& tensor_path) {
    const fs::path path = sidecar_path(tensor_path);
    if (!fs::exists(path)) return std::nullopt;
    const auto j = nlohmann::json::parse(read_file(path));
    Sidecar sc;
    sc.role = j.value("role", "");
    if (j.contains("fx")) sc.intrinsics = intrinsics_from_json(j);
    if (j.contains("pose")) sc.pose = pose_from_json(j.at("pose"));
    return sc;
}

void store_map(const Image& map, const fs::path& path, const std::string& role,
               const std::optional<CameraIntrinsics>& intr, const std::optional<ViewPose>& pose) {
    store_tensor(map, path);
    store_sidecar({role, intr, pose}, path);
}

Image load_pfm(const fs::path& path) {
    const std::string bytes = read_file(path);
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) throw FormatError("truncated PFM header", start);
        return bytes.substr(start, pos - start);
    };
    const std::string tag = next_token();
    int channels = 0;
    if (tag == "PF") {
        channels = 3;
    } else if (tag == "Pf") {
        channels = 1;
    } else {
        throw FormatError("bad PFM magic", 0);
    }
    int w = 0;
    int h = 0;
    double scale = 0.0;
    try {
        w = std::stoi(next_token());
        h = std::stoi(next_token());
        scale = std::stod(next_token());
    } catch (const std::logic_error&) {
        throw FormatError("unparsable PFM header", pos);
    }
    if (w <= 0 || h <= 0 || scale == 0.0) throw FormatError("invalid PFM dimensions or scale", pos);
    ++pos; // single whitespace byte ends the header
    const std::uint64_t need = static_cast<std::uint64_t>(w) * h * channels * 4;
    if (bytes.size() - pos < need) throw FormatError("truncated PFM payload", bytes.size());
    const bool big_endian = scale > 0.0;
    Image img(h, w, 3);
    for (int row = 0; row < h; ++row) {
        const int y = h - 1 - row;
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < channels; ++c) {
                std::uint32_t u = 0;
                const std::size_t off = pos + 4 * ((static_cast<std::size_t>(row) * w + x) * channels + c);
                for (int i = 0; i < 4; ++i) {
                    const int shift = big_endian ? 8 * (3 - i) : 8 * i;
                    u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[off + i])) << shift;
                }
                const float v = std::bit_cast<float>(u);
                if (channels == 1) {
                    img.at(y, x, 0) = img.at(y, x, 1) = img.at(y, x, 2) = v;
                } else {
                    img.at(y, x, c) = v;
                }
            }
        }
    }
    return img;
}

void store_pfm(const Image& rgb, const fs::path& path) {
    if (rgb.channels() != 3) throw DimensionError("store_pfm expects a 3-channel map");
    std::string out = "PF\n" + std::to_string(rgb.width()) + " " + std::to_string(rgb.height()) + "\n-1.0\n";
    for (int row = 0; row < rgb.height(); ++row) {
        const int y = rgb.height() - 1 - row;
        for (int x = 0; x < rgb.width(); ++x) {
            for (int c = 0; c < 3; ++c) put_u32(out, std::bit_cast<std::uint32_t>(rgb.at(y, x, c)));
        }
    }
    write_file(path, out);
}

Image load_environment(const fs::path& path) {
    const auto ext = path.extension().string();
    Image env = ext == ".pfm" ? load_pfm(path) : load_tensor(path);
    if (env.channels() != 3) throw DimensionError("environment map must have 3 channels");
    return env;
}

void store_gbuffer(const GBuffer& gb, const fs::path& dir) {
    fs::create_directories(dir);
    Image depth = gb.depth;
    for (int y = 0; y < gb.height(); ++y) {
        for (int x = 0; x < gb.width(); ++x) {
            if (!gb.masked(y, x)) depth.at(y, x) = 0.0f;
        }
    }
    store_map(depth, dir / "depth.gigt", "depth", gb.intrinsics, gb.pose);
    store_map(gb.normal, dir / "normal.gigt", "normal", gb.intrinsics, gb.pose);
    store_map(gb.albedo, dir / "albedo.gigt", "albedo", gb.intrinsics, gb.pose);
    store_map(gb.roughness, dir / "roughness.gigt", "roughness", gb.intrinsics, gb.pose);
    store_map(gb.metallic, dir / "metallic.gigt", "metallic", gb.intrinsics, gb.pose);
}

GBuffer load_gbuffer(const fs::path& dir) {
    const auto sc = load_sidecar(dir / "depth.gigt");
    if (!sc || !sc->intrinsics) throw IoError("missing intrinsics sidecar for " + (dir / "depth.gigt").string());
    GBuffer gb = GBuffer::allocate(*sc->intrinsics, sc->pose.value_or(ViewPose{}));
    auto load_checked = [&](const char* name, int channels) {
        Image img = load_tensor(dir / name);
        if (img.height() != gb.height() || img.width() != gb.width() || img.channels() != channels) {
            throw DimensionError(std::string("gbuffer file ") + name + " has the wrong shape");
        }
        return img;
    };
    gb.depth = load_checked("depth.gigt", 1);
    gb.normal = load_checked("normal.gigt", 3);
    gb.albedo = load_checked("albedo.gigt", 3);
    gb.roughness = load_checked("roughness.gigt", 1);
    gb.metallic = load_checked("metallic.gigt", 1);
    for (int y = 0; y < gb.height(); ++y) {
        for (int x = 0; x < gb.width(); ++x) gb.mask.at(y, x) = gb.depth.at(y, x) > 0.0f ? 1.0f : 0.0f;
    }
    gb.validate();
    return gb;
}

void store_materials(const MaterialMaps& mats, const fs::path& dir) {
    fs::create_directories(dir);
    store_map(mats.albedo, dir / "albedo.gigt", "albedo");
    store_map(mats.roughness, dir / "roughness.gigt", "roughness");
    store_map(mats.metallic, dir / "metallic.gigt", "metallic");
}

MaterialMaps load_materials(const fs::path& dir) {
    MaterialMaps m{load_tensor(dir / "albedo.gigt"), load_tensor(dir / "roughness.gigt"),
                   load_tensor(dir / "metallic.gigt")};
    if (m.albedo.channels() != 3 || m.roughness.channels() != 1 || m.metallic.channels() != 1 ||
        !m.albedo.same_extent(m.roughness) || !m.albedo.same_extent(m.metallic)) {
        throw DimensionError("material maps in " + dir.string() + " have inconsistent shapes");
    }
    return m;
}

std::string sha256_bytes(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("sha256 failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return hex.str();
}

std::string sha256_file(const fs::path& path) { return sha256_bytes(read_file(path)); }

} // namespace gigi::io
