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

#include <variant>
#include <vector>

#include "gigi/math.hpp"

namespace gigi {

// Deterministic point sets; nothing in the library draws random numbers.

inline double radical_inverse_base2(unsigned bits) {
    bits = (bits << 16u) | (bits >> 16u);
    bits = ((bits & 0x55555555u) << 1u) | ((bits & 0xAAAAAAAAu) >> 1u);
    bits = ((bits & 0x33333333u) << 2u) | ((bits & 0xCCCCCCCCu) >> 2u);
    bits = ((bits & 0x0F0F0F0Fu) << 4u) | ((bits & 0xF0F0F0F0u) >> 4u);
    bits = ((bits & 0x00FF00FFu) << 8u) | ((bits & 0xFF00FF00u) >> 8u);
    return static_cast<double>(bits) * 2.3283064365386963e-10; // / 2^32
}

inline Vec2 hammersley(unsigned i, unsigned n) {
    return {(i + 0.5) / static_cast<double>(n), radical_inverse_base2(i)};
}

// Midpoint grid over (phi, theta): phi_i = 2pi(i+1/2)/n_phi, theta_j = (pi/2)(j+1/2)/n_theta.
struct StratifiedSpherical {
    int n_phi = 8;
    int n_theta = 8;
};

// Fibonacci lattice, uniform in solid angle over the hemisphere.
struct FibonacciLattice {
    int count = 64;
};

using HemisphereSampler = std::variant<StratifiedSpherical, FibonacciLattice>;

int sample_count(const HemisphereSampler& sampler);

struct HemisphereSample {
    Vec3 dir;      // unit
    double weight; // cos*sin for the spherical grid, cos for the lattice
};

// Samples around +z, in a fixed order.
std::vector<HemisphereSample> local_hemisphere_samples(const HemisphereSampler& sampler);

// Samples in the hemisphere around unit normal `n` (world or view frame, as `n`).
std::vector<HemisphereSample> hemisphere_samples(const Vec3& n, const HemisphereSampler& sampler);

// Cosine-distributed directions around +z from a k1 x k2 midpoint grid on the
// unit square, k1 = floor(sqrt(n)), k2 = n / k1. Used by the oracles.
std::vector<Vec3> cosine_grid_directions(int n);

} // namespace gigi
