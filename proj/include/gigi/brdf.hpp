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

#include "gigi/math.hpp"

namespace gigi::brdf {

// Cook-Torrance with a Lambertian diffuse lobe: GGX distribution, Schlick
// Fresnel, separable Smith/Schlick-GGX masking with the IBL k = alpha/2.
// alpha = roughness^2 throughout.

struct Material {
    Vec3 albedo = Vec3::Constant(0.5);
    double metallic = 0.0;
    double roughness = 0.5;
};

inline constexpr double kDielectricF0 = 0.04;
inline constexpr double kMinAlpha = 1e-4;
inline constexpr double kSpecularEpsilon = 1e-6;

inline double alpha_from_roughness(double roughness) {
    return std::max(roughness * roughness, kMinAlpha);
}

inline Vec3 base_reflectance(const Vec3& albedo, double metallic) {
    return lerp(Vec3::Constant(kDielectricF0), albedo, metallic);
}

double ndf_ggx(double n_dot_h, double roughness);

Vec3 fresnel_schlick(double v_dot_h, const Vec3& f0);

double geometry_schlick_ggx(double n_dot_x, double roughness);
double geometry_smith(double n_dot_v, double n_dot_l, double roughness);

struct ShadingFrame {
    Vec3 n;
    Vec3 wo; // surface -> camera
    Vec3 wi; // surface -> light
    Vec3 h;

    static ShadingFrame make(const Vec3& n, const Vec3& wo, const Vec3& wi);
};

// Microfacet term alone; symmetric in wi and wo.
Vec3 specular_eval(const ShadingFrame& frame, const Material& mat);

// Full BRDF value. Zero when either direction is at or below the horizon.
Vec3 brdf_eval(const ShadingFrame& frame, const Material& mat);

// GGX half-vector sample around +z for uniform (u1, u2).
Vec3 sample_ggx_half_vector(double u1, double u2, double alpha);

} // namespace gigi::brdf
