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

#include "gigi/brdf.hpp"

namespace gigi::brdf {

double ndf_ggx(double n_dot_h, double roughness) {
    const double c = saturate(n_dot_h);
    const double a = alpha_from_roughness(saturate(roughness));
    const double a2 = a * a;
    const double f = c * c * (a2 - 1.0) + 1.0;
    return a2 / (kPi * f * f);
}

Vec3 fresnel_schlick(double v_dot_h, const Vec3& f0) {
    const double m = 1.0 - saturate(v_dot_h);
    const double m2 = m * m;
    return f0 + (Vec3::Ones() - f0) * (m2 * m2 * m);
}

double geometry_schlick_ggx(double n_dot_x, double roughness) {
    const double k = 0.5 * alpha_from_roughness(saturate(roughness));
    const double c = saturate(n_dot_x);
    return c / (c * (1.0 - k) + k);
}

double geometry_smith(double n_dot_v, double n_dot_l, double roughness) {
    return geometry_schlick_ggx(n_dot_v, roughness) * geometry_schlick_ggx(n_dot_l, roughness);
}

ShadingFrame ShadingFrame::make(const Vec3& n, const Vec3& wo, const Vec3& wi) {
    const Vec3 sum = wi + wo;
    const double len = sum.norm();
    return {n, wo, wi, len > 0.0 ? Vec3(sum / len) : n};
}

Vec3 specular_eval(const ShadingFrame& frame, const Material& mat) {
    const double n_dot_l = frame.n.dot(frame.wi);
    const double n_dot_v = frame.n.dot(frame.wo);
    if (n_dot_l <= 0.0 || n_dot_v <= 0.0) return Vec3::Zero();
    const double d = ndf_ggx(frame.n.dot(frame.h), mat.roughness);
    const Vec3 f = fresnel_schlick(frame.wo.dot(frame.h), base_reflectance(mat.albedo, mat.metallic));
    const double g = geometry_smith(n_dot_v, n_dot_l, mat.roughness);
    return f * (d * g / (4.0 * n_dot_l * n_dot_v + kSpecularEpsilon));
}

Vec3 brdf_eval(const ShadingFrame& frame, const Material& mat) {
    if (frame.n.dot(frame.wi) <= 0.0 || frame.n.dot(frame.wo) <= 0.0) return Vec3::Zero();
    return (1.0 - mat.metallic) * kInvPi * mat.albedo + specular_eval(frame, mat);
}

Vec3 sample_ggx_half_vector(double u1, double u2, double alpha) {
    const double phi = 2.0 * kPi * u1;
    // (a^2 - 1) written as (a-1)(a+1) for accuracy near a = 1
    const double cos2 = (1.0 - u2) / (1.0 + (alpha + 1.0) * ((alpha - 1.0) * u2));
    const double cos_theta = std::sqrt(std::max(cos2, 0.0));
    const double sin_theta = std::sqrt(std::max(1.0 - cos2, 0.0));
    return {sin_theta * std::cos(phi), sin_theta * std::sin(phi), cos_theta};
}

} // namespace gigi::brdf
