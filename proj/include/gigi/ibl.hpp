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

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "gigi/brdf.hpp"
#include "gigi/gbuffer.hpp"
#include "gigi/image.hpp"

namespace gigi::ibl {

// Equirectangular maps are height x (2*height) x 3. Texel (row, col) is centered
// at u = (col+0.5)/W, v = (row+0.5)/H with azimuth phi = 2*pi*u and polar angle
// theta = pi*v measured from +z.

Vec3 uv_to_direction(double u, double v);
Vec2 direction_to_uv(const Vec3& dir);
Vec3 texel_direction(int row, int col, int height, int width);

// Exact solid angle of one texel in `row`.
double texel_solid_angle(int row, int height, int width);

struct BilinearTaps {
    std::array<std::size_t, 4> pixel; // y * width + x
    std::array<double, 4> weight;
};

// Azimuth wraps, the poles clamp.
BilinearTaps equirect_taps(int height, int width, const Vec3& dir);

// Checked lookup: `dir` must be unit length to 1e-4.
Vec3 sample_env(const Image& map, const Vec3& dir);

namespace detail {
Vec3 sample_env_unchecked(const Image& map, const Vec3& dir);
}

void validate_environment(const Image& env);

// Cosine-weighted irradiance. The environment is integrated as piecewise
// constant texels, each split into enough sub-texels that every output texel
// sees at least 4096 quadrature points; weights are normalised so a constant
// map of radiance L yields exactly pi*L.
Image prefilter_diffuse(const Image& env, int out_height);

inline constexpr int kMinDiffuseSamples = 4096;
inline constexpr int kDefaultSpecularSamples = 1024;

// Roughness mip chain; mip l is filtered with the GGX lobe of roughness
// l/(mip_count-1) using n = v = r and filtered importance sampling from a box
// pyramid of the source. Mip 0 is the source map itself.
std::vector<Image> prefilter_specular(const Image& env, int mip_count,
                                      int samples = kDefaultSpecularSamples);

// Split-sum scale/bias (A, B) for one (n.v, roughness) pair.
Vec2 integrate_split_sum(double n_dot_v, double roughness, int samples = kDefaultSpecularSamples);

// size x size x 2 table; rows index roughness, columns n.v, both at cell centers.
Image compute_brdf_lut(int size, int samples = kDefaultSpecularSamples);

// Adjoints of the two prefilters (both are linear in the environment).
Image prefilter_diffuse_adjoint(const Image& irradiance_grad, int env_height, int env_width);
Image prefilter_specular_adjoint(const std::vector<Image>& chain_grad, int env_height, int env_width,
                                 int samples = kDefaultSpecularSamples);

struct PrefilterSettings {
    int irradiance_height = 32;
    int mip_count = 5;
    int lut_size = 64;
    int specular_samples = kDefaultSpecularSamples;
};

struct EnvironmentSet {
    Image radiance;
    Image irradiance;
    std::vector<Image> specular;
    Image lut;

    bool complete() const;
    int mip_count() const { return static_cast<int>(specular.size()); }
};

EnvironmentSet prefilter_environment(const Image& env, const PrefilterSettings& settings);
// Reuses a precomputed LUT; the LUT does not depend on the lighting.
EnvironmentSet prefilter_environment(const Image& env, const PrefilterSettings& settings, const Image& lut);

// LUT lookup with optional derivative along roughness (piecewise linear,
// right-sided at cell centers).
Vec2 lut_lookup(const Image& lut, double n_dot_v, double roughness, Vec2* d_roughness = nullptr);

// Trilinear lookup in the mip chain at mip = roughness * (M - 1).
Vec3 specular_lookup(const std::vector<Image>& chain, const Vec3& dir, double roughness,
                     Vec3* d_roughness = nullptr);

// Everything the split-sum shader reads for one surface point, plus the
// roughness derivatives of the piecewise-linear lookups.
struct DirectLookup {
    Vec3 irradiance;
    Vec3 prefiltered;
    Vec3 d_prefiltered;
    double scale = 0.0;
    double bias = 0.0;
    double d_scale = 0.0;
    double d_bias = 0.0;
};

inline constexpr double kMinNdotV = 1e-4;

// n and wo in the world frame of the environment; wo points to the camera.
DirectLookup lookup_direct(const EnvironmentSet& env, const Vec3& n, const Vec3& wo, double roughness);

// (1-m) a/pi O I_dir + (A f0 + B) I_s
Vec3 combine_direct(const DirectLookup& lk, const brdf::Material& mat, double occlusion);

Vec3 shade_pixel(const EnvironmentSet& env, const Vec3& n, const Vec3& wo, const brdf::Material& mat,
                 double occlusion);

brdf::Material material_at(const GBuffer& gb, int y, int x);

// World-frame normal and view direction for a G-buffer pixel.
struct PixelFrame {
    Vec3 normal;
    Vec3 to_camera;
};
PixelFrame pixel_frame(const GBuffer& gb, int y, int x);

// Direct-lit image; occlusion scales only the diffuse term. Unmasked pixels are 0.
Image shade_direct(const GBuffer& gb, const EnvironmentSet& env, const Image& occlusion);

// Prefiltered set cache: irradiance.gigt, specular_<l>.gigt, brdf_lut.gigt
// and manifest.json {mip_count, lut_size, source_hash, ...}.
void store_environment_set(const EnvironmentSet& env, const std::filesystem::path& dir,
                           const std::string& source_hash, const PrefilterSettings& settings);
EnvironmentSet load_environment_set(const std::filesystem::path& dir);
// True when dir holds a set built from `source_hash` with the same settings.
bool environment_cache_matches(const std::filesystem::path& dir, const std::string& source_hash,
                               const PrefilterSettings& settings);

} // namespace gigi::ibl
