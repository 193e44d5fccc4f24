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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gigi/error.hpp"
#include "gigi/math.hpp"

namespace gigi {

// Row-major, channel-interleaved float map. Scalar maps use one channel, color
// and normal maps three. This is the in-memory twin of the GIGT file layout.
class Image {
public:
    Image() = default;
    Image(int height, int width, int channels, float fill = 0.0f);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(height_) * width_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t index(int y, int x, int c = 0) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }
    float& at(int y, int x, int c = 0) noexcept { return data_[index(y, x, c)]; }
    float at(int y, int x, int c = 0) const noexcept { return data_[index(y, x, c)]; }

    Vec3 rgb(int y, int x) const noexcept {
        const float* p = &data_[index(y, x)];
        return Vec3(p[0], p[1], p[2]);
    }
    void set_rgb(int y, int x, const Vec3& v) noexcept {
        float* p = &data_[index(y, x)];
        p[0] = static_cast<float>(v.x());
        p[1] = static_cast<float>(v.y());
        p[2] = static_cast<float>(v.z());
    }

    std::span<float> data() noexcept { return data_; }
    std::span<const float> data() const noexcept { return data_; }

    bool same_shape(const Image& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
    }
    bool same_extent(const Image& other) const noexcept {
        return height_ == other.height_ && width_ == other.width_;
    }

    void fill(float v);
    Image& operator*=(float s);

    friend bool operator==(const Image&, const Image&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<float> data_;
};

// Bitwise comparison, so NaN payloads and signed zeros count.
bool bitwise_equal(const Image& a, const Image& b);

void require_same_extent(const Image& a, const Image& b, const std::string& what);

} // namespace gigi
