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
#include <string>

#include "gigi/image.hpp"

namespace gigi {

enum class Tonemap { Gamma22, Reinhard, None };

Tonemap parse_tonemap(const std::string& name);

// Display value in [0,1] for one linear channel value.
double tonemap_value(double x, Tonemap op);
Image tonemap(const Image& img, Tonemap op);

// Mean squared error over all values. Optional 1-channel mask selects pixels.
double mse(const Image& a, const Image& b, const Image* mask = nullptr);
double mae(const Image& a, const Image& b, const Image* mask = nullptr);

// 10 log10(1 / MSE); +inf for identical inputs. Without `linear` both images
// are gamma-2.2 tonemapped (clamped to [0,1]) first.
double psnr(const Image& a, const Image& b, bool linear, const Image* mask = nullptr);

// Gaussian-window SSIM (11x11, sigma 1.5, K1 0.01, K2 0.03, data range 1),
// averaged over valid window positions and channels.
double ssim(const Image& a, const Image& b, bool linear);

std::string format_metric(double v);

// 8-bit RGB (3 channels) or gray (1 channel) PNG.
void export_png(const Image& img, const std::filesystem::path& path, Tonemap op);

} // namespace gigi
