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

#include "gigi/optimize.hpp"

#include <cmath>
#include <fstream>

#include "gigi/parallel.hpp"

namespace gigi {

DirectGradient grad_direct(const ibl::DirectLookup& lk, const brdf::Material& mat, double occlusion) {
    const Vec3 f0 = brdf::base_reflectance(mat.albedo, mat.metallic);
    const Vec3 diffuse_light = (occlusion * kInvPi) * lk.irradiance;
    DirectGradient g;
    g.albedo = (1.0 - mat.metallic) * diffuse_light + (lk.scale * mat.metallic) * lk.prefiltered;
    g.metallic = -mat.albedo.cwiseProduct(diffuse_light) +
                 lk.scale * (mat.albedo - Vec3::Constant(brdf::kDielectricF0)).cwiseProduct(lk.prefiltered);
    g.roughness = (lk.d_scale * f0 + Vec3::Constant(lk.d_bias)).cwiseProduct(lk.prefiltered) +
                  (lk.scale * f0 + Vec3::Constant(lk.bias)).cwiseProduct(lk.d_prefiltered);
    return g;
}

DirectGradient grad_direct(const GBuffer& gb, const ibl::EnvironmentSet& env, const Image& occlusion, int y, int x) {
    if (!gb.masked(y, x)) throw PreconditionError("grad_direct: pixel is not covered by the gbuffer mask");
    const ibl::PixelFrame f = ibl::pixel_frame(gb, y, x);
    const brdf::Material mat = ibl::material_at(gb, y, x);
    return grad_direct(ibl::lookup_direct(env, f.normal, f.to_camera, mat.roughness), mat, occlusion.at(y, x));
}

double OptimizeConfig::learning_rate(int i) const {
    if (iterations <= 0) return lr_initial;
    if (i >= iterations) return lr_final;
    return lr_initial * std::pow(lr_final / lr_initial, static_cast<double>(i) / iterations);
}

void OptimizeConfig::validate() const {
    if (iterations < 0) throw ConfigError("optimize: iterations must be non-negative");
    if (!(lr_final > 0.0 && lr_final <= lr_initial)) throw ConfigError("optimize: need 0 < lr_final <= lr_initial");
    if (indirect_every < 1) throw ConfigError("optimize: indirect refresh interval must be at least 1");
    if (weights.material_tv < 0.0 || weights.light_tv < 0.0 || weights.normal_tv < 0.0) {
        throw ConfigError("optimize: loss weights must be non-negative");
    }
}

namespace {

struct ViewState {
    const OptimizeView* view = nullptr;
    MaterialMaps materials;
    Image occlusion;
    TraceCache cache;
    Image incident; // frozen between refreshes
    Image direct;
    Image first_pass;
    std::vector<ibl::PixelFrame> frames; // per pixel, valid where masked
    std::size_t color_terms = 0;
};

struct PixelEnvGrad {
    Vec3 d_irradiance = Vec3::Zero();
    Vec3 d_prefiltered = Vec3::Zero();
};

struct Step {
    double color = 0.0;
    MaterialMaps grad;
    std::vector<PixelEnvGrad> env_grad;
};

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Forward pass of one view with current parameters; fills the direct image,
// the L1 color loss and (optionally) gradients scaled by the number of color terms.
Step evaluate_view(ViewState& s, const ibl::EnvironmentSet& env, bool want_grad, bool want_env_grad) {
    const GBuffer& gb = s.view->geometry;
    const int h = gb.height();
    const int w = gb.width();
    Step step;
    if (want_grad) step.grad = MaterialMaps{Image(h, w, 3), Image(h, w, 1), Image(h, w, 1)};
    if (want_env_grad) step.env_grad.resize(static_cast<std::size_t>(h) * w);
    s.direct = Image(h, w, 3);
    std::vector<double> row_loss(static_cast<std::size_t>(h), 0.0);

    parallel_rows(h, [&](int y) {
        double loss = 0.0;
        for (int x = 0; x < w; ++x) {
            if (!gb.masked(y, x)) continue;
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const ibl::PixelFrame& f = s.frames[i];
            const brdf::Material mat{s.materials.albedo.rgb(y, x), s.materials.metallic.at(y, x),
                                     s.materials.roughness.at(y, x)};
            const double occ = s.occlusion.at(y, x);
            const ibl::DirectLookup lk = ibl::lookup_direct(env, f.normal, f.to_camera, mat.roughness);
            const Vec3 direct = ibl::combine_direct(lk, mat, occ);
            s.direct.set_rgb(y, x, direct);
            const Vec3 q = s.incident.rgb(y, x) * kInvPi;
            const Vec3 render = direct + (1.0 - mat.metallic) * mat.albedo.cwiseProduct(q);
            const Vec3 residual = render - s.view->target.rgb(y, x);
            loss += residual.cwiseAbs().sum();
            if (!want_grad) continue;
            const Vec3 sg(sign(residual.x()), sign(residual.y()), sign(residual.z()));
            const DirectGradient g = grad_direct(lk, mat, occ);
            const Vec3 d_albedo = g.albedo + (1.0 - mat.metallic) * q;
            const Vec3 d_metallic = g.metallic - mat.albedo.cwiseProduct(q);
            step.grad.albedo.set_rgb(y, x, sg.cwiseProduct(d_albedo));
            step.grad.metallic.at(y, x) = static_cast<float>(sg.dot(d_metallic));
            step.grad.roughness.at(y, x) = static_cast<float>(sg.dot(g.roughness));
            if (want_env_grad) {
                const Vec3 f0 = brdf::base_reflectance(mat.albedo, mat.metallic);
                step.env_grad[i].d_irradiance = ((1.0 - mat.metallic) * occ * kInvPi) * sg.cwiseProduct(mat.albedo);
                step.env_grad[i].d_prefiltered = sg.cwiseProduct(lk.scale * f0 + Vec3::Constant(lk.bias));
            }
        }
        row_loss[static_cast<std::size_t>(y)] = loss;
    });
    double total = 0.0;
    for (double v : row_loss) total += v;
    step.color = s.color_terms ? total / static_cast<double>(s.color_terms) : 0.0;
    return step;
}

void scatter(Image& map, const Vec3& dir, const Vec3& value) {
    const ibl::BilinearTaps taps = ibl::equirect_taps(map.height(), map.width(), dir);
    float* data = map.data().data();
    for (int k = 0; k < 4; ++k) {
        float* p = data + taps.pixel[k] * 3;
        for (int c = 0; c < 3; ++c) p[c] += static_cast<float>(taps.weight[k] * value[c]);
    }
}

// Adjoint of the direct shader's environment lookups for one view, added into
// the irradiance and chain gradients with the given scale.
void accumulate_env_grad(const ViewState& s, const Step& step, const ibl::EnvironmentSet& env, double scale,
                         Image& irradiance_grad, std::vector<Image>& chain_grad) {
    const GBuffer& gb = s.view->geometry;
    const int m = env.mip_count();
    for (int y = 0; y < gb.height(); ++y) {
        for (int x = 0; x < gb.width(); ++x) {
            if (!gb.masked(y, x)) continue;
            const std::size_t i = static_cast<std::size_t>(y) * gb.width() + x;
            const PixelEnvGrad& pg = step.env_grad[i];
            const ibl::PixelFrame& f = s.frames[i];
            scatter(irradiance_grad, f.normal, scale * pg.d_irradiance);
            const double mip = saturate(s.materials.roughness.at(y, x)) * (m - 1);
            const int l0 = std::min(static_cast<int>(mip), m - 2);
            const double frac = mip - l0;
            const Vec3 r = reflect(-f.to_camera, f.normal).normalized();
            scatter(chain_grad[static_cast<std::size_t>(l0)], r, (scale * (1.0 - frac)) * pg.d_prefiltered);
            scatter(chain_grad[static_cast<std::size_t>(l0 + 1)], r, (scale * frac) * pg.d_prefiltered);
        }
    }
}

void descend(Image& param, const Image& grad, double lr, double lo, double hi) {
    auto p = param.data();
    auto g = grad.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = static_cast<float>(std::clamp(static_cast<double>(p[i]) - lr * g[i], lo, hi));
    }
}

} // namespace

OptimizeResult optimize_materials(const std::vector<OptimizeView>& views, const Image& env_init,
                                  const TracingConfig& tracing, const OptimizeConfig& cfg,
                                  const std::vector<MaterialMaps>* init) {
    cfg.validate();
    ibl::validate_environment(env_init);
    if (views.empty()) throw ConfigError("optimize: need at least one view");
    if (init && init->size() != views.size()) throw ConfigError("optimize: one initial material set per view");

    std::vector<ViewState> states(views.size());
    for (std::size_t v = 0; v < views.size(); ++v) {
        const OptimizeView& view = views[v];
        view.geometry.validate();
        require_same_extent(view.geometry.depth, view.target, "optimize: target vs gbuffer");
        if (view.target.channels() != 3) throw DimensionError("optimize: target must have 3 channels");
        ViewState& s = states[v];
        s.view = &view;
        const int h = view.geometry.height();
        const int w = view.geometry.width();
        s.materials = init ? (*init)[v] : MaterialMaps::uniform(h, w, 0.5f);
        require_same_extent(s.materials.albedo, view.geometry.depth, "optimize: initial materials");
        s.cache = trace_screen_hits(view.geometry, tracing);
        s.occlusion = s.cache.occlusion;
        s.frames.resize(static_cast<std::size_t>(h) * w);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (!view.geometry.masked(y, x)) continue;
                s.frames[static_cast<std::size_t>(y) * w + x] = ibl::pixel_frame(view.geometry, y, x);
                s.color_terms += 3;
            }
        }
        s.incident = Image(h, w, 3);
    }

    OptimizeResult result;
    result.env = env_init;
    const Image lut = ibl::compute_brdf_lut(cfg.prefilter.lut_size, cfg.prefilter.specular_samples);
    ibl::EnvironmentSet env = ibl::prefilter_environment(result.env, cfg.prefilter, lut);
    const double env_values = static_cast<double>(result.env.size());

    auto refresh_indirect = [&](ViewState& s) {
        GBuffer lit = s.view->geometry;
        s.materials.apply_to(lit);
        s.first_pass = ibl::shade_direct(lit, env, Image(lit.height(), lit.width(), 1, 1.0f));
        s.incident = gather_incident(s.cache, {&s.first_pass});
    };

    auto record = [&](const std::vector<Step>& steps, int i) {
        LossBreakdown loss;
        for (std::size_t v = 0; v < states.size(); ++v) {
            const Image* mask = &states[v].view->geometry.mask;
            loss.color += steps[v].color;
            loss.material_tv += material_tv(states[v].materials, states[v].view->target, mask);
        }
        loss.light_tv = tv_plain(result.env);
        loss.total = loss.color + cfg.weights.material_tv * loss.material_tv + cfg.weights.light_tv * loss.light_tv;
        result.trace.push_back(loss);
        result.learning_rates.push_back(cfg.learning_rate(i));
        return loss.total;
    };

    double initial_total = 0.0;
    for (int i = 0; i <= cfg.iterations; ++i) {
        const bool last = i == cfg.iterations;
        if (i % cfg.indirect_every == 0) {
            for (auto& s : states) refresh_indirect(s);
        }
        std::vector<Step> steps;
        for (auto& s : states) steps.push_back(evaluate_view(s, env, !last, !last && cfg.optimize_env));
        const double total = record(steps, i);
        if (i == 0) initial_total = total;
        if (!std::isfinite(total) || total > cfg.divergence_factor * initial_total) {
            throw DivergenceError("optimize: loss " + std::to_string(total) + " at iteration " + std::to_string(i) +
                                  " exceeds " + std::to_string(cfg.divergence_factor) + "x the initial " +
                                  std::to_string(initial_total));
        }
        if (last) break;

        const double lr = cfg.learning_rate(i);
        Image irradiance_grad;
        std::vector<Image> chain_grad;
        if (cfg.optimize_env) {
            irradiance_grad = Image(env.irradiance.height(), env.irradiance.width(), 3);
            for (const Image& mip : env.specular) chain_grad.emplace_back(mip.height(), mip.width(), 3);
        }
        for (std::size_t v = 0; v < states.size(); ++v) {
            ViewState& s = states[v];
            Step& step = steps[v];
            const Image* mask = &s.view->geometry.mask;
            const double terms = static_cast<double>(s.color_terms);
            const double tv_scale = cfg.weights.material_tv * terms;
            tv_edge_aware_grad(s.materials.albedo, s.view->target, mask, tv_scale, step.grad.albedo);
            tv_edge_aware_grad(s.materials.roughness, s.view->target, mask, tv_scale, step.grad.roughness);
            tv_edge_aware_grad(s.materials.metallic, s.view->target, mask, tv_scale, step.grad.metallic);
            if (cfg.optimize_env) accumulate_env_grad(s, step, env, env_values / terms, irradiance_grad, chain_grad);
            descend(s.materials.albedo, step.grad.albedo, lr, 0.0, 1.0);
            if (cfg.optimize_roughness) descend(s.materials.roughness, step.grad.roughness, lr, 0.0, 1.0);
            if (cfg.optimize_metallic) descend(s.materials.metallic, step.grad.metallic, lr, 0.0, 1.0);
        }
        if (cfg.optimize_env) {
            Image grad = ibl::prefilter_diffuse_adjoint(irradiance_grad, result.env.height(), result.env.width());
            const Image spec = ibl::prefilter_specular_adjoint(chain_grad, result.env.height(), result.env.width(),
                                                               cfg.prefilter.specular_samples);
            for (std::size_t k = 0; k < grad.size(); ++k) grad.data()[k] += spec.data()[k];
            tv_plain_grad(result.env, cfg.weights.light_tv * env_values, grad);
            descend(result.env, grad, lr, 0.0, std::numeric_limits<double>::max());
            env = ibl::prefilter_environment(result.env, cfg.prefilter, lut);
        }
    }
    for (auto& s : states) result.materials.push_back(std::move(s.materials));
    return result;
}

void write_loss_csv(const OptimizeResult& result, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "iteration,color,material_tv,light_tv,total,lr\n";
    out.precision(10);
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const LossBreakdown& l = result.trace[i];
        out << i << ',' << l.color << ',' << l.material_tv << ',' << l.light_tv << ',' << l.total << ','
            << result.learning_rates[i] << '\n';
    }
}

} // namespace gigi
