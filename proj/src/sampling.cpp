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

#include "gigi/sampling.hpp"

#include "gigi/error.hpp"

namespace gigi {

namespace {

struct SampleCounter {
    int operator()(const StratifiedSpherical& s) const { return s.n_phi * s.n_theta; }
    int operator()(const FibonacciLattice& s) const { return s.count; }
};

struct LocalSampleBuilder {
    std::vector<HemisphereSample> operator()(const StratifiedSpherical& s) const {
        std::vector<HemisphereSample> out;
        out.reserve(static_cast<std::size_t>(s.n_phi) * s.n_theta);
        for (int i = 0; i < s.n_phi; ++i) {
            const double phi = 2.0 * kPi * (i + 0.5) / s.n_phi;
            for (int j = 0; j < s.n_theta; ++j) {
                const double theta = 0.5 * kPi * (j + 0.5) / s.n_theta;
                const double st = std::sin(theta);
                const double ct = std::cos(theta);
                out.push_back({Vec3(st * std::cos(phi), st * std::sin(phi), ct), ct * st});
            }
        }
        return out;
    }

    std::vector<HemisphereSample> operator()(const FibonacciLattice& s) const {
        // golden angle increment
        const double increment = kPi * (3.0 - std::sqrt(5.0));
        std::vector<HemisphereSample> out;
        out.reserve(static_cast<std::size_t>(s.count));
        for (int k = 0; k < s.count; ++k) {
            const double ct = 1.0 - (k + 0.5) / s.count;
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            const double phi = increment * k;
            out.push_back({Vec3(st * std::cos(phi), st * std::sin(phi), ct), ct});
        }
        return out;
    }
};

} // namespace

int sample_count(const HemisphereSampler& sampler) { return std::visit(SampleCounter{}, sampler); }

std::vector<HemisphereSample> local_hemisphere_samples(const HemisphereSampler& sampler) {
    if (sample_count(sampler) <= 0) throw ConfigError("hemisphere sampler needs at least one sample");
    return std::visit(LocalSampleBuilder{}, sampler);
}

std::vector<HemisphereSample> hemisphere_samples(const Vec3& n, const HemisphereSampler& sampler) {
    if (!is_unit(n, 1e-4)) throw PreconditionError("hemisphere_samples: normal is not unit length");
    const Frame frame(n.normalized());
    auto samples = local_hemisphere_samples(sampler);
    for (auto& s : samples) s.dir = frame.to_world(s.dir);
    return samples;
}

std::vector<Vec3> cosine_grid_directions(int n) {
    if (n < 1) throw PreconditionError("cosine_grid_directions: need n >= 1");
    const int k1 = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    const int k2 = n / k1;
    std::vector<Vec3> dirs;
    dirs.reserve(static_cast<std::size_t>(k1) * k2);
    for (int i = 0; i < k1; ++i) {
        const double u1 = (i + 0.5) / k1;
        const double r = std::sqrt(u1);
        const double z = std::sqrt(1.0 - u1);
        for (int j = 0; j < k2; ++j) {
            const double phi = 2.0 * kPi * (j + 0.5) / k2;
            dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
        }
    }
    return dirs;
}

} // namespace gigi
