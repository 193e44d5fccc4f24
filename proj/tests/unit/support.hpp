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

#include <cstring>
#include <filesystem>
#include <random>
#include <string>

#include "gigi/ibl.hpp"
#include "gigi/image.hpp"
#include "gigi/oracle.hpp"
#include "gigi/scene.hpp"

namespace testing {

namespace fs = std::filesystem;

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = fs::temp_directory_path() / ("gigi_test_" + tag + "_" + std::to_string(std::random_device{}()));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

inline std::uint32_t float_bits(float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    return u;
}

inline gigi::ibl::EnvironmentSet env_set(const gigi::Image& radiance) {
    gigi::ibl::PrefilterSettings s;
    s.specular_samples = 256;
    return gigi::ibl::prefilter_environment(radiance, s);
}

inline const gigi::ibl::EnvironmentSet& constant_env() {
    static const auto set = env_set(gigi::oracle::constant_environment(32, gigi::Vec3::Ones()));
    return set;
}

inline const gigi::ibl::EnvironmentSet& sky_env() {
    static const auto set = env_set(gigi::oracle::sky_environment(32));
    return set;
}

inline gigi::GBuffer preset_gbuffer(const std::string& name, int size) {
    return gigi::scene::synth_gbuffer(gigi::scene::preset(name), size, size);
}

inline double mean_abs(const gigi::Image& a, const gigi::Image& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(double(a.data()[i]) - b.data()[i]);
    return s / double(a.size());
}

} // namespace testing
