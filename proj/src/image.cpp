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

#include "gigi/image.hpp"

#include <algorithm>
#include <cstring>

namespace gigi {

Image::Image(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
    if (height < 0 || width < 0 || channels <= 0) {
        throw DimensionError("invalid image shape " + std::to_string(height) + "x" + std::to_string(width) + "x" +
                             std::to_string(channels));
    }
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

void Image::fill(float v) { std::fill(data_.begin(), data_.end(), v); }

Image& Image::operator*=(float s) {
    for (float& v : data_) v *= s;
    return *this;
}

bool bitwise_equal(const Image& a, const Image& b) {
    if (!a.same_shape(b)) return false;
    return a.size() == 0 || std::memcmp(a.data().data(), b.data().data(), a.size() * sizeof(float)) == 0;
}

void require_same_extent(const Image& a, const Image& b, const std::string& what) {
    if (!a.same_extent(b)) {
        throw DimensionError(what + ": " + std::to_string(a.height()) + "x" + std::to_string(a.width()) + " vs " +
                             std::to_string(b.height()) + "x" + std::to_string(b.width()));
    }
}

} // namespace gigi
