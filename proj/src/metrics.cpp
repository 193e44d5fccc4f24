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

#include "gigi/metrics.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <vector>

#include <png.h>

namespace gigi {

Tonemap parse_tonemap(const std::string& name) {
    if (name == "gamma22") return Tonemap::Gamma22;
    if (name == "reinhard") return Tonemap::Reinhard;
    if (name == "none") return Tonemap::None;
    throw ConfigError("unknown tonemap '" + name + "' (gamma22, reinhard, none)");
}

double tonemap_value(double x, Tonemap op) {
    switch (op) {
    case Tonemap::Gamma22: return std::pow(saturate(x), 1.0 / 2.2);
    case Tonemap::Reinhard: {
        const double r = std::max(x, 0.0) / (1.0 + std::max(x, 0.0));
        return std::pow(r, 1.0 / 2.2);
    }
    case Tonemap::None: return saturate(x);
    }
    return 0.0;
}

Image tonemap(const Image& img, Tonemap op) {
    Image out = img;
    for (float& v : out.data()) v = static_cast<float>(tonemap_value(v, op));
    return out;
}

namespace {

template <class F>
double masked_mean(const Image& a, const Image& b, const Image* mask, F&& f) {
    if (!a.same_shape(b)) throw DimensionError("metrics: images differ in shape");
    if (mask) require_same_extent(a, *mask, "metrics: mask");
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < a.height(); ++y) {
        for (int x = 0; x < a.width(); ++x) {
            if (mask && mask->at(y, x) <= 0.5f) continue;
            for (int c = 0; c < a.channels(); ++c) {
                sum += f(static_cast<double>(a.at(y, x, c)) - b.at(y, x, c));
                ++count;
            }
        }
    }
    if (count == 0) throw PreconditionError("metrics: no pixels selected");
    return sum / static_cast<double>(count);
}

std::array<double, 11> gaussian_window() {
    std::array<double, 11> w{};
    double total = 0.0;
    for (int i = 0; i < 11; ++i) {
        const double d = i - 5;
        w[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        total += w[static_cast<std::size_t>(i)];
    }
    for (double& v : w) v /= total;
    return w;
}

// Separable filter over valid positions only.
std::vector<double> filter_valid(const std::vector<double>& src, int h, int w) {
    static const std::array<double, 11> k = gaussian_window();
    const int oh = h - 10;
    const int ow = w - 10;
    std::vector<double> tmp(static_cast<std::size_t>(h) * ow);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < 11; ++i) s += k[static_cast<std::size_t>(i)] * src[static_cast<std::size_t>(y) * w + x + i];
            tmp[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < 11; ++i) s += k[static_cast<std::size_t>(i)] * tmp[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    return out;
}

} // namespace

double mse(const Image& a, const Image& b, const Image* mask) {
    return masked_mean(a, b, mask, [](double d) { return d * d; });
}

double mae(const Image& a, const Image& b, const Image* mask) {
    return masked_mean(a, b, mask, [](double d) { return std::abs(d); });
}

double psnr(const Image& a, const Image& b, bool linear, const Image* mask) {
    const double e = linear ? mse(a, b, mask) : mse(tonemap(a, Tonemap::Gamma22), tonemap(b, Tonemap::Gamma22), mask);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / e);
}

double ssim(const Image& a_in, const Image& b_in, bool linear) {
    if (!a_in.same_shape(b_in)) throw DimensionError("ssim: images differ in shape");
    if (a_in.height() < 11 || a_in.width() < 11) throw DimensionError("ssim: images must be at least 11x11");
    const Image a = linear ? a_in : tonemap(a_in, Tonemap::Gamma22);
    const Image b = linear ? b_in : tonemap(b_in, Tonemap::Gamma22);
    const int h = a.height();
    const int w = a.width();
    const double c1 = 0.01 * 0.01;
    const double c2 = 0.03 * 0.03;
    double total = 0.0;
    for (int c = 0; c < a.channels(); ++c) {
        std::vector<double> x(static_cast<std::size_t>(h) * w), y(x.size()), xx(x.size()), yy(x.size()), xy(x.size());
        for (int r = 0; r < h; ++r) {
            for (int col = 0; col < w; ++col) {
                const std::size_t i = static_cast<std::size_t>(r) * w + col;
                x[i] = a.at(r, col, c);
                y[i] = b.at(r, col, c);
                xx[i] = x[i] * x[i];
                yy[i] = y[i] * y[i];
                xy[i] = x[i] * y[i];
            }
        }
        const auto mx = filter_valid(x, h, w);
        const auto my = filter_valid(y, h, w);
        const auto mxx = filter_valid(xx, h, w);
        const auto myy = filter_valid(yy, h, w);
        const auto mxy = filter_valid(xy, h, w);
        double sum = 0.0;
        for (std::size_t i = 0; i < mx.size(); ++i) {
            const double vx = mxx[i] - mx[i] * mx[i];
            const double vy = myy[i] - my[i] * my[i];
            const double cov = mxy[i] - mx[i] * my[i];
            sum += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cov + c2)) /
                   ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
        }
        total += sum / static_cast<double>(mx.size());
    }
    return total / a.channels();
}

std::string format_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void export_png(const Image& img, const std::filesystem::path& path, Tonemap op) {
    if (img.channels() != 1 && img.channels() != 3) throw DimensionError("export_png: need 1 or 3 channels");
    std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!file) throw IoError("cannot write " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialisation failed");
    }
    std::vector<unsigned char> bytes(img.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<unsigned char>(std::lround(255.0 * tonemap_value(img.data()[i], op)));
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng failed writing " + path.string());
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()), static_cast<png_uint_32>(img.height()), 8,
                 img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels();
    for (int y = 0; y < img.height(); ++y) png_write_row(png, bytes.data() + stride * y);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace gigi
