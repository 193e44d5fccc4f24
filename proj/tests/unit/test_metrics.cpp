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

#include <png.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gigi/metrics.hpp"
#include "support.hpp"

using namespace gigi;

namespace {

struct Png {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<unsigned char> bytes;
};

Png read_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    REQUIRE(png_image_begin_read_from_file(&image, path.string().c_str()));
    Png out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.channels = PNG_IMAGE_SAMPLE_CHANNELS(image.format);
    out.bytes.resize(PNG_IMAGE_SIZE(image));
    REQUIRE(png_image_finish_read(&image, nullptr, out.bytes.data(), 0, nullptr));
    return out;
}

// 24 x 20 x 3 test pattern shared with the reference values below.
std::pair<Image, Image> pattern() {
    Image a(24, 20, 3), b(24, 20, 3);
    for (int y = 0; y < 24; ++y) {
        for (int x = 0; x < 20; ++x) {
            for (int c = 0; c < 3; ++c) {
                const float av = static_cast<float>(0.5 + 0.4 * std::sin(0.3 * x + 0.2 * y + c));
                a.at(y, x, c) = av;
                b.at(y, x, c) = static_cast<float>(std::clamp(double(av) * av + 0.05 * std::cos(0.7 * x - 0.4 * y), 0.0, 1.0));
            }
        }
    }
    return {a, b};
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("PSNR") {
    const Image a(8, 8, 3, 0.25f);
    CHECK(psnr(a, a, true) == std::numeric_limits<double>::infinity());
    CHECK(psnr(a, a, false) == std::numeric_limits<double>::infinity());
    CHECK(format_metric(psnr(a, a, true)) == "inf");
    const Image b(8, 8, 3, 0.35f);
    CHECK(psnr(a, b, true) == doctest::Approx(20.0).epsilon(1e-6));
    CHECK(mse(a, b) == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(mae(a, b) == doctest::Approx(0.1).epsilon(1e-6));

    Image mask(8, 8, 1, 0.0f);
    mask.at(2, 3) = 1.0f;
    Image c = a;
    c.set_rgb(5, 5, Vec3::Ones());
    CHECK(psnr(a, c, true, &mask) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(mse(a, Image(8, 7, 3)), DimensionError);
}

TEST_CASE("tonemapped PSNR clamps to the display range") {
    const Image a(4, 4, 3, 2.0f), b(4, 4, 3, 5.0f);
    CHECK(psnr(a, b, false) == std::numeric_limits<double>::infinity());
    CHECK(psnr(a, b, true) < 0.0);
}

TEST_CASE("SSIM identities and reference values") {
    const auto [a, b] = pattern();
    CHECK(ssim(a, a, true) == doctest::Approx(1.0).epsilon(1e-12));
    // Reference values from an independent Gaussian-window implementation
    // (sigma 1.5, population covariance, data range 1).
    const Image c5(24, 20, 3, 0.5f), c6(24, 20, 3, 0.6f);
    CHECK(std::abs(ssim(c5, c6, true) - 0.9836092443861664) < 1e-4);
    CHECK(std::abs(ssim(a, b, true) - 0.7032018747085318) < 1e-4);
    CHECK(ssim(a, b, true) == doctest::Approx(ssim(b, a, true)).epsilon(1e-12));
}

TEST_CASE("tonemap operators") {
    CHECK(tonemap_value(1.0, Tonemap::Gamma22) == 1.0);
    CHECK(tonemap_value(0.0, Tonemap::Gamma22) == 0.0);
    CHECK(tonemap_value(4.0, Tonemap::Gamma22) == 1.0);
    CHECK(tonemap_value(1.0, Tonemap::Reinhard) == doctest::Approx(std::pow(0.5, 1.0 / 2.2)).epsilon(1e-12));
    CHECK(tonemap_value(0.3, Tonemap::None) == doctest::Approx(0.3));
    CHECK(parse_tonemap("reinhard") == Tonemap::Reinhard);
    CHECK(parse_tonemap("gamma22") == Tonemap::Gamma22);
    CHECK(parse_tonemap("none") == Tonemap::None);
    CHECK_THROWS_AS(parse_tonemap("aces"), ConfigError);
}

TEST_CASE("PNG export") {
    testing::TempDir dir("png");
    Image img(2, 3, 3, 0.0f);
    img.set_rgb(0, 0, Vec3::Ones());
    img.set_rgb(1, 2, Vec3(1.0, 0.0, 1.0));
    export_png(img, dir / "g.png", Tonemap::Gamma22);
    const Png g = read_png(dir / "g.png");
    CHECK(g.width == 3);
    CHECK(g.height == 2);
    CHECK(g.channels == 3);
    CHECK(g.bytes[0] == 255);
    CHECK(g.bytes[3] == 0);
    CHECK(g.bytes[(1 * 3 + 2) * 3 + 0] == 255);
    CHECK(g.bytes[(1 * 3 + 2) * 3 + 1] == 0);

    export_png(Image(1, 1, 3, 1.0f), dir / "r.png", Tonemap::Reinhard);
    const Png r = read_png(dir / "r.png");
    CHECK(r.bytes[0] == std::lround(255.0 * std::pow(0.5, 1.0 / 2.2)));

    export_png(Image(2, 2, 1, 0.5f), dir / "gray.png", Tonemap::None);
    const Png gray = read_png(dir / "gray.png");
    CHECK(gray.channels == 1);
    CHECK(gray.bytes[3] == 128);
    CHECK_THROWS_AS(export_png(Image(2, 2, 2), dir / "x.png", Tonemap::None), DimensionError);
}

}
