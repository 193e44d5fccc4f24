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

#include "gigi/ibl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "gigi/parallel.hpp"
#include "gigi/sampling.hpp"
#include "gigi/tensor_io.hpp"

namespace gigi::ibl {

Vec3 uv_to_direction(double u, double v) {
    const double phi = 2.0 * kPi * u;
    const double theta = kPi * v;
    const double st = std::sin(theta);
    return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

Vec2 direction_to_uv(const Vec3& dir) {
    double phi = std::atan2(dir.y(), dir.x());
    if (phi < 0.0) phi += 2.0 * kPi;
    const double theta = std::acos(std::clamp(dir.z(), -1.0, 1.0));
    return {phi / (2.0 * kPi), theta / kPi};
}

Vec3 texel_direction(int row, int col, int height, int width) {
    return uv_to_direction((col + 0.5) / width, (row + 0.5) / height);
}

double texel_solid_angle(int row, int height, int width) {
    const double t0 = kPi * row / height;
    const double t1 = kPi * (row + 1) / height;
    return 2.0 * kPi / width * (std::cos(t0) - std::cos(t1));
}

BilinearTaps equirect_taps(int height, int width, const Vec3& dir) {
    const Vec2 uv = direction_to_uv(dir);
    const double x = uv.x() * width - 0.5;
    const double y = uv.y() * height - 0.5;
    const double xf = std::floor(x);
    const double yf = std::floor(y);
    const double fx = x - xf;
    const double fy = y - yf;
    int x0 = static_cast<int>(xf) % width;
    if (x0 < 0) x0 += width;
    const int x1 = (x0 + 1) % width;
    const int y0 = std::clamp(static_cast<int>(yf), 0, height - 1);
    const int y1 = std::clamp(static_cast<int>(yf) + 1, 0, height - 1);
    auto id = [width](int yy, int xx) { return static_cast<std::size_t>(yy) * width + xx; };
    return {{id(y0, x0), id(y0, x1), id(y1, x0), id(y1, x1)},
            {(1.0 - fx) * (1.0 - fy), fx * (1.0 - fy), (1.0 - fx) * fy, fx * fy}};
}

namespace detail {

Vec3 sample_env_unchecked(const Image& map, const Vec3& dir) {
    const BilinearTaps taps = equirect_taps(map.height(), map.width(), dir);
    const float* data = map.data().data();
    Vec3 out = Vec3::Zero();
    for (int k = 0; k < 4; ++k) {
        const float* p = data + taps.pixel[k] * 3;
        out += taps.weight[k] * Vec3(p[0], p[1], p[2]);
    }
    return out;
}

} // namespace detail

Vec3 sample_env(const Image& map, const Vec3& dir) {
    if (!is_unit(dir, 1e-4)) throw PreconditionError("sample_env: direction is not unit length");
    if (map.channels() != 3 || map.empty()) throw DimensionError("sample_env: expected a 3-channel map");
    return detail::sample_env_unchecked(map, dir);
}

void validate_environment(const Image& env) {
    if (env.channels() != 3) throw DimensionError("environment map must have 3 channels");
    if (env.height() < 1 || env.width() != 2 * env.height()) {
        throw DimensionError("environment map must be H x 2H, got " + std::to_string(env.height()) + "x" +
                             std::to_string(env.width()));
    }
    for (float v : env.data()) {
        if (!std::isfinite(v) || v < 0.0f) throw PreconditionError("environment map has negative or non-finite radiance");
    }
}

// ---------------------------------------------------------------------------
// Diffuse irradiance

namespace {

struct DiffuseQuadrature {
    std::vector<Vec3> dir;
    std::vector<double> solid_angle;
    std::vector<std::size_t> texel; // env pixel index
};

DiffuseQuadrature make_diffuse_quadrature(int h, int w) {
    const int texels = h * w;
    const int sub = std::max(1, static_cast<int>(std::ceil(std::sqrt(double(kMinDiffuseSamples) / texels))));
    DiffuseQuadrature q;
    const std::size_t n = static_cast<std::size_t>(texels) * sub * sub;
    q.dir.reserve(n);
    q.solid_angle.reserve(n);
    q.texel.reserve(n);
    for (int row = 0; row < h; ++row) {
        for (int a = 0; a < sub; ++a) {
            const double t0 = kPi * (row + double(a) / sub) / h;
            const double t1 = kPi * (row + double(a + 1) / sub) / h;
            const double tm = 0.5 * (t0 + t1);
            const double d_omega = 2.0 * kPi / (double(w) * sub) * (std::cos(t0) - std::cos(t1));
            for (int col = 0; col < w; ++col) {
                for (int b = 0; b < sub; ++b) {
                    const double phi = 2.0 * kPi * (col + (b + 0.5) / sub) / w;
                    q.dir.emplace_back(std::sin(tm) * std::cos(phi), std::sin(tm) * std::sin(phi), std::cos(tm));
                    q.solid_angle.push_back(d_omega);
                    q.texel.push_back(static_cast<std::size_t>(row) * w + col);
                }
            }
        }
    }
    return q;
}

} // namespace

Image prefilter_diffuse(const Image& env, int out_height) {
    validate_environment(env);
    if (out_height < 1) throw ConfigError("irradiance map height must be positive");
    const int out_w = 2 * out_height;
    const DiffuseQuadrature q = make_diffuse_quadrature(env.height(), env.width());
    const float* src = env.data().data();
    Image out(out_height, out_w, 3);
    parallel_rows(out_height, [&](int row) {
        for (int col = 0; col < out_w; ++col) {
            const Vec3 n = texel_direction(row, col, out_height, out_w);
            double norm = 0.0;
            Vec3 acc = Vec3::Zero();
            for (std::size_t s = 0; s < q.dir.size(); ++s) {
                const double c = q.dir[s].dot(n);
                if (c <= 0.0) continue;
                const double wgt = c * q.solid_angle[s];
                const float* p = src + q.texel[s] * 3;
                acc += wgt * Vec3(p[0], p[1], p[2]);
                norm += wgt;
            }
            out.set_rgb(row, col, acc * (kPi / norm));
        }
    });
    return out;
}

Image prefilter_diffuse_adjoint(const Image& irradiance_grad, int env_height, int env_width) {
    const int oh = irradiance_grad.height();
    const int ow = irradiance_grad.width();
    const DiffuseQuadrature q = make_diffuse_quadrature(env_height, env_width);
    const int sub = static_cast<int>(std::lround(std::sqrt(double(q.dir.size()) / (double(env_height) * env_width))));

    std::vector<Vec3> normals(static_cast<std::size_t>(oh) * ow);
    std::vector<double> scale(normals.size());
    for (int row = 0; row < oh; ++row) {
        for (int col = 0; col < ow; ++col) {
            const std::size_t o = static_cast<std::size_t>(row) * ow + col;
            normals[o] = texel_direction(row, col, oh, ow);
            double norm = 0.0;
            for (std::size_t s = 0; s < q.dir.size(); ++s) norm += std::max(0.0, q.dir[s].dot(normals[o])) * q.solid_angle[s];
            scale[o] = kPi / norm;
        }
    }

    Image grad(env_height, env_width, 3);
    // Samples of one env row are contiguous: sub sub-rows of (env_width * sub) entries.
    const std::size_t row_stride = static_cast<std::size_t>(env_width) * sub * sub;
    parallel_rows(env_height, [&](int row) {
        for (int col = 0; col < env_width; ++col) {
            Vec3 acc = Vec3::Zero();
            for (std::size_t o = 0; o < normals.size(); ++o) {
                double wsum = 0.0;
                for (int a = 0; a < sub; ++a) {
                    const std::size_t base = row * row_stride + static_cast<std::size_t>(a) * env_width * sub +
                                             static_cast<std::size_t>(col) * sub;
                    for (int b = 0; b < sub; ++b) {
                        const std::size_t s = base + b;
                        const double c = q.dir[s].dot(normals[o]);
                        if (c > 0.0) wsum += c * q.solid_angle[s];
                    }
                }
                if (wsum == 0.0) continue;
                const float* g = irradiance_grad.data().data() + o * 3;
                acc += (wsum * scale[o]) * Vec3(g[0], g[1], g[2]);
            }
            grad.set_rgb(row, col, acc);
        }
    });
    return grad;
}

// ---------------------------------------------------------------------------
// Specular mip chain

namespace {

std::vector<Image> build_pyramid(const Image& env) {
    std::vector<Image> levels{env};
    while (levels.back().height() % 2 == 0 && levels.back().height() >= 2) {
        const Image& src = levels.back();
        Image dst(src.height() / 2, src.width() / 2, 3);
        for (int y = 0; y < dst.height(); ++y) {
            for (int x = 0; x < dst.width(); ++x) {
                for (int c = 0; c < 3; ++c) {
                    dst.at(y, x, c) = 0.25f * (src.at(2 * y, 2 * x, c) + src.at(2 * y, 2 * x + 1, c) +
                                               src.at(2 * y + 1, 2 * x, c) + src.at(2 * y + 1, 2 * x + 1, c));
                }
            }
        }
        levels.push_back(std::move(dst));
    }
    return levels;
}

int pyramid_level_count(int height) {
    int levels = 1;
    while (height % 2 == 0 && height >= 2) {
        height /= 2;
        ++levels;
    }
    return levels;
}

int mip_height(int env_height, int mip) { return std::max(env_height >> mip, std::min(env_height, 4)); }

struct SpecularTap {
    Vec3 local;
    double weight; // n.l / sum(n.l)
    int level;
    double frac; // blend toward level + 1
};

struct SpecularPlan {
    int levels = 1;
    std::vector<std::vector<SpecularTap>> taps; // per mip; mip 0 is empty
};

SpecularPlan make_specular_plan(int env_height, int env_width, int mip_count, int samples) {
    SpecularPlan plan;
    plan.levels = pyramid_level_count(env_height);
    plan.taps.resize(static_cast<std::size_t>(mip_count));
    const double texel_omega = 4.0 * kPi / (double(env_height) * env_width);
    for (int mip = 1; mip < mip_count; ++mip) {
        const double roughness = double(mip) / (mip_count - 1);
        const double alpha = brdf::alpha_from_roughness(roughness);
        auto& taps = plan.taps[static_cast<std::size_t>(mip)];
        double total = 0.0;
        for (int i = 0; i < samples; ++i) {
            const Vec2 u = hammersley(static_cast<unsigned>(i), static_cast<unsigned>(samples));
            const Vec3 h = brdf::sample_ggx_half_vector(u.x(), u.y(), alpha);
            const Vec3 l = 2.0 * h.z() * h - Vec3::UnitZ();
            if (l.z() <= 0.0) continue;
            const double d = brdf::ndf_ggx(h.z(), roughness);
            const double sample_omega = 4.0 / (samples * d);
            double lod = 0.5 * std::log2(sample_omega / texel_omega) + 1.0;
            lod = std::clamp(lod, 0.0, double(plan.levels - 1));
            int level = static_cast<int>(std::floor(lod));
            double frac = lod - level;
            if (level >= plan.levels - 1) {
                level = plan.levels - 1;
                frac = 0.0;
            }
            taps.push_back({l, l.z(), level, frac});
            total += l.z();
        }
        for (auto& t : taps) t.weight /= total;
    }
    return plan;
}

// Calls fn(level, pixel, weight) for every source texel feeding one output texel.
template <class Fn>
void visit_specular_texel(const SpecularPlan& plan, const std::vector<std::pair<int, int>>& dims, int mip, int row,
                          int col, int out_h, int out_w, Fn&& fn) {
    const Frame frame(texel_direction(row, col, out_h, out_w));
    for (const SpecularTap& tap : plan.taps[static_cast<std::size_t>(mip)]) {
        const Vec3 d = frame.to_world(tap.local);
        for (int k = 0; k < 2; ++k) {
            const double lw = k == 0 ? 1.0 - tap.frac : tap.frac;
            if (lw == 0.0) continue;
            const int level = tap.level + k;
            const BilinearTaps bt = equirect_taps(dims[level].first, dims[level].second, d);
            for (int q = 0; q < 4; ++q) fn(level, bt.pixel[q], tap.weight * lw * bt.weight[q]);
        }
    }
}

std::vector<std::pair<int, int>> pyramid_dims(int h, int w, int levels) {
    std::vector<std::pair<int, int>> dims;
    for (int l = 0; l < levels; ++l) dims.emplace_back(h >> l, w >> l);
    return dims;
}

} // namespace

std::vector<Image> prefilter_specular(const Image& env, int mip_count, int samples) {
    validate_environment(env);
    if (mip_count < 2) throw ConfigError("specular chain needs at least 2 mips");
    if (samples < 1) throw ConfigError("specular prefilter needs at least one sample");
    const std::vector<Image> pyramid = build_pyramid(env);
    const SpecularPlan plan = make_specular_plan(env.height(), env.width(), mip_count, samples);
    const auto dims = pyramid_dims(env.height(), env.width(), plan.levels);

    std::vector<Image> chain{env};
    for (int mip = 1; mip < mip_count; ++mip) {
        const int h = mip_height(env.height(), mip);
        const int w = 2 * h;
        Image out(h, w, 3);
        parallel_rows(h, [&](int row) {
            for (int col = 0; col < w; ++col) {
                Vec3 acc = Vec3::Zero();
                visit_specular_texel(plan, dims, mip, row, col, h, w, [&](int level, std::size_t px, double wgt) {
                    const float* p = pyramid[static_cast<std::size_t>(level)].data().data() + px * 3;
                    acc += wgt * Vec3(p[0], p[1], p[2]);
                });
                out.set_rgb(row, col, acc);
            }
        });
        chain.push_back(std::move(out));
    }
    return chain;
}

Image prefilter_specular_adjoint(const std::vector<Image>& chain_grad, int env_height, int env_width, int samples) {
    const int mip_count = static_cast<int>(chain_grad.size());
    const SpecularPlan plan = make_specular_plan(env_height, env_width, mip_count, samples);
    const auto dims = pyramid_dims(env_height, env_width, plan.levels);
    std::vector<std::vector<double>> level_grad;
    for (const auto& [h, w] : dims) level_grad.emplace_back(static_cast<std::size_t>(h) * w * 3, 0.0);

    const Image& g0 = chain_grad.front();
    for (std::size_t i = 0; i < g0.size(); ++i) level_grad[0][i] += g0.data()[i];

    // Scatter is sequential so the accumulation order is fixed.
    for (int mip = 1; mip < mip_count; ++mip) {
        const Image& g = chain_grad[static_cast<std::size_t>(mip)];
        for (int row = 0; row < g.height(); ++row) {
            for (int col = 0; col < g.width(); ++col) {
                const Vec3 gv = g.rgb(row, col);
                if (gv.isZero(0.0)) continue;
                visit_specular_texel(plan, dims, mip, row, col, g.height(), g.width(),
                                     [&](int level, std::size_t px, double wgt) {
                                         double* dst = level_grad[static_cast<std::size_t>(level)].data() + px * 3;
                                         dst[0] += wgt * gv.x();
                                         dst[1] += wgt * gv.y();
                                         dst[2] += wgt * gv.z();
                                     });
            }
        }
    }
    // Box-downsample transpose, coarse to fine.
    for (int l = plan.levels - 1; l > 0; --l) {
        const auto [h, w] = dims[static_cast<std::size_t>(l)];
        const int fw = dims[static_cast<std::size_t>(l - 1)].second;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    const double v = 0.25 * level_grad[l][(static_cast<std::size_t>(y) * w + x) * 3 + c];
                    for (int dy = 0; dy < 2; ++dy) {
                        for (int dx = 0; dx < 2; ++dx) {
                            level_grad[l - 1][(static_cast<std::size_t>(2 * y + dy) * fw + 2 * x + dx) * 3 + c] += v;
                        }
                    }
                }
            }
        }
    }
    Image grad(env_height, env_width, 3);
    for (std::size_t i = 0; i < grad.size(); ++i) grad.data()[i] = static_cast<float>(level_grad[0][i]);
    return grad;
}

// ---------------------------------------------------------------------------
// Split-sum BRDF table

Vec2 integrate_split_sum(double n_dot_v, double roughness, int samples) {
    const double nv = std::clamp(n_dot_v, kMinNdotV, 1.0);
    const Vec3 v(std::sqrt(1.0 - nv * nv), 0.0, nv);
    const double alpha = brdf::alpha_from_roughness(roughness);
    double a = 0.0;
    double b = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Vec2 u = hammersley(static_cast<unsigned>(i), static_cast<unsigned>(samples));
        const Vec3 h = brdf::sample_ggx_half_vector(u.x(), u.y(), alpha);
        const double v_dot_h = v.dot(h);
        if (v_dot_h <= 0.0) continue;
        const Vec3 l = 2.0 * v_dot_h * h - v;
        const double n_dot_l = l.z();
        if (n_dot_l <= 0.0) continue;
        const double g = brdf::geometry_smith(nv, n_dot_l, roughness);
        const double g_vis = g * v_dot_h / (h.z() * nv);
        const double m = 1.0 - v_dot_h;
        const double fc = m * m * m * m * m;
        a += (1.0 - fc) * g_vis;
        b += fc * g_vis;
    }
    return {a / samples, b / samples};
}

Image compute_brdf_lut(int size, int samples) {
    if (size < 16) throw ConfigError("BRDF LUT size must be at least 16");
    Image lut(size, size, 2);
    parallel_rows(size, [&](int row) {
        const double roughness = (row + 0.5) / size;
        for (int col = 0; col < size; ++col) {
            const Vec2 ab = integrate_split_sum((col + 0.5) / size, roughness, samples);
            lut.at(row, col, 0) = static_cast<float>(ab.x());
            lut.at(row, col, 1) = static_cast<float>(ab.y());
        }
    });
    return lut;
}

EnvironmentSet prefilter_environment(const Image& env, const PrefilterSettings& settings, const Image& lut) {
    if (lut.channels() != 2 || lut.height() != lut.width()) throw ConfigError("BRDF LUT must be N x N x 2");
    EnvironmentSet set;
    set.radiance = env;
    set.irradiance = prefilter_diffuse(env, settings.irradiance_height);
    set.specular = prefilter_specular(env, settings.mip_count, settings.specular_samples);
    set.lut = lut;
    return set;
}

EnvironmentSet prefilter_environment(const Image& env, const PrefilterSettings& settings) {
    return prefilter_environment(env, settings, compute_brdf_lut(settings.lut_size, settings.specular_samples));
}

bool EnvironmentSet::complete() const {
    return !irradiance.empty() && irradiance.channels() == 3 && specular.size() >= 2 && !lut.empty() &&
           lut.channels() == 2;
}

// ---------------------------------------------------------------------------
// Shading

Vec2 lut_lookup(const Image& lut, double n_dot_v, double roughness, Vec2* d_roughness) {
    const int n = lut.width();
    const double x = std::clamp(n_dot_v * n - 0.5, 0.0, double(n - 1));
    const int x0 = std::min(static_cast<int>(x), n - 2);
    const double fx = x - x0;

    const double y = roughness * n - 0.5;
    int y0;
    double fy;
    double dfy;
    if (y <= 0.0) {
        y0 = 0;
        fy = 0.0;
        dfy = 0.0;
    } else if (y >= n - 1) {
        y0 = n - 2;
        fy = 1.0;
        dfy = 0.0;
    } else {
        y0 = std::min(static_cast<int>(y), n - 2);
        fy = y - y0;
        dfy = n;
    }
    auto row = [&](int yy) {
        return Vec2(lerp(lut.at(yy, x0, 0), lut.at(yy, x0 + 1, 0), fx), lerp(lut.at(yy, x0, 1), lut.at(yy, x0 + 1, 1), fx));
    };
    const Vec2 r0 = row(y0);
    const Vec2 r1 = row(y0 + 1);
    if (d_roughness) *d_roughness = (r1 - r0) * dfy;
    return r0 + (r1 - r0) * fy;
}

Vec3 specular_lookup(const std::vector<Image>& chain, const Vec3& dir, double roughness, Vec3* d_roughness) {
    const int m = static_cast<int>(chain.size());
    const double mip = saturate(roughness) * (m - 1);
    const int l0 = std::min(static_cast<int>(mip), m - 2);
    const double f = mip - l0;
    const Vec3 s0 = detail::sample_env_unchecked(chain[static_cast<std::size_t>(l0)], dir);
    const Vec3 s1 = detail::sample_env_unchecked(chain[static_cast<std::size_t>(l0 + 1)], dir);
    if (d_roughness) *d_roughness = (roughness < 0.0 || roughness > 1.0) ? Vec3::Zero() : Vec3((s1 - s0) * (m - 1));
    return s0 + (s1 - s0) * f;
}

DirectLookup lookup_direct(const EnvironmentSet& env, const Vec3& n, const Vec3& wo, double roughness) {
    DirectLookup lk;
    const double n_dot_v = std::max(n.dot(wo), kMinNdotV);
    lk.irradiance = detail::sample_env_unchecked(env.irradiance, n);
    const Vec3 r = reflect(-wo, n).normalized();
    lk.prefiltered = specular_lookup(env.specular, r, roughness, &lk.d_prefiltered);
    Vec2 d_ab;
    const Vec2 ab = lut_lookup(env.lut, n_dot_v, roughness, &d_ab);
    lk.scale = ab.x();
    lk.bias = ab.y();
    lk.d_scale = d_ab.x();
    lk.d_bias = d_ab.y();
    return lk;
}

Vec3 combine_direct(const DirectLookup& lk, const brdf::Material& mat, double occlusion) {
    const Vec3 f0 = brdf::base_reflectance(mat.albedo, mat.metallic);
    const Vec3 diffuse = ((1.0 - mat.metallic) * kInvPi * occlusion) * mat.albedo.cwiseProduct(lk.irradiance);
    const Vec3 specular = (lk.scale * f0 + Vec3::Constant(lk.bias)).cwiseProduct(lk.prefiltered);
    return diffuse + specular;
}

Vec3 shade_pixel(const EnvironmentSet& env, const Vec3& n, const Vec3& wo, const brdf::Material& mat,
                 double occlusion) {
    return combine_direct(lookup_direct(env, n, wo, mat.roughness), mat, occlusion);
}

brdf::Material material_at(const GBuffer& gb, int y, int x) {
    return {gb.albedo.rgb(y, x), gb.metallic.at(y, x), gb.roughness.at(y, x)};
}

PixelFrame pixel_frame(const GBuffer& gb, int y, int x) {
    const Vec3 p = gb.view_point(y, x);
    const Vec3 n = gb.normal.rgb(y, x).normalized();
    return {gb.pose.dir_to_world(n), gb.pose.dir_to_world(-p.normalized())};
}

Image shade_direct(const GBuffer& gb, const EnvironmentSet& env, const Image& occlusion) {
    if (!env.complete()) throw ConfigError("shade_direct: environment set is incomplete");
    require_same_extent(gb.depth, occlusion, "shade_direct: occlusion vs gbuffer");
    if (occlusion.channels() != 1) throw DimensionError("shade_direct: occlusion must be a scalar map");
    for (float o : occlusion.data()) {
        if (!(o >= 0.0f && o <= 1.0f)) throw PreconditionError("shade_direct: occlusion outside [0,1]");
    }
    Image out(gb.height(), gb.width(), 3);
    parallel_rows(gb.height(), [&](int y) {
        for (int x = 0; x < gb.width(); ++x) {
            if (!gb.masked(y, x)) continue;
            const PixelFrame f = pixel_frame(gb, y, x);
            out.set_rgb(y, x, shade_pixel(env, f.normal, f.to_camera, material_at(gb, y, x), occlusion.at(y, x)));
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Cache

namespace {

nlohmann::json settings_json(const PrefilterSettings& s) {
    return {{"irradiance_height", s.irradiance_height},
            {"mip_count", s.mip_count},
            {"lut_size", s.lut_size},
            {"specular_samples", s.specular_samples}};
}

std::filesystem::path mip_path(const std::filesystem::path& dir, int mip) {
    return dir / ("specular_" + std::to_string(mip) + ".gigt");
}

std::optional<nlohmann::json> read_manifest(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) return std::nullopt;
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

} // namespace

void store_environment_set(const EnvironmentSet& env, const std::filesystem::path& dir,
                           const std::string& source_hash, const PrefilterSettings& settings) {
    if (!env.complete()) throw ConfigError("cannot store an incomplete environment set");
    std::filesystem::create_directories(dir);
    io::store_tensor(env.irradiance, dir / "irradiance.gigt");
    for (int mip = 0; mip < env.mip_count(); ++mip) io::store_tensor(env.specular[mip], mip_path(dir, mip));
    io::store_tensor(env.lut, dir / "brdf_lut.gigt");
    nlohmann::json manifest = settings_json(settings);
    manifest["source_hash"] = source_hash;
    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
    out << manifest.dump(2) << "\n";
}

EnvironmentSet load_environment_set(const std::filesystem::path& dir) {
    const auto manifest = read_manifest(dir);
    if (!manifest) throw IoError("missing or unreadable manifest.json in " + dir.string());
    const int mips = manifest->value("mip_count", 0);
    if (mips < 2) throw FormatError("manifest.json: bad mip_count", 0);
    EnvironmentSet set;
    set.irradiance = io::load_tensor(dir / "irradiance.gigt");
    for (int mip = 0; mip < mips; ++mip) set.specular.push_back(io::load_tensor(mip_path(dir, mip)));
    set.radiance = set.specular.front();
    set.lut = io::load_tensor(dir / "brdf_lut.gigt");
    if (!set.complete()) throw FormatError("environment set in " + dir.string() + " is inconsistent", 0);
    return set;
}

bool environment_cache_matches(const std::filesystem::path& dir, const std::string& source_hash,
                               const PrefilterSettings& settings) {
    const auto manifest = read_manifest(dir);
    if (!manifest || manifest->value("source_hash", std::string()) != source_hash) return false;
    const nlohmann::json expected = settings_json(settings);
    for (const auto& [key, value] : expected.items()) {
        if (!manifest->contains(key) || (*manifest)[key] != value) return false;
    }
    return true;
}

} // namespace gigi::ibl
