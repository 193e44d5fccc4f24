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

// Parallel kernels against their serial references. Thread count follows
// OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <map>

#include "gigi/oracle.hpp"
#include "gigi/pipeline.hpp"
#include "gigi/reference.hpp"
#include "gigi/scene.hpp"

using namespace gigi;

namespace {

struct Fixture {
    GBuffer gb;
    ibl::EnvironmentSet env;
    TracingConfig cfg;
    Image occlusion;
    Image direct;
};

const Fixture& fixture(int size) {
    static std::map<int, Fixture> cache;
    auto it = cache.find(size);
    if (it != cache.end()) return it->second;
    Fixture f;
    f.gb = scene::synth_gbuffer(scene::preset("box_interior"), size, size);
    f.env = ibl::prefilter_environment(oracle::sky_environment(32), {});
    f.cfg = TracingConfig::defaults(f.gb.intrinsics);
    f.occlusion = occlusion_map(f.gb, f.cfg);
    f.direct = ibl::shade_direct(f.gb, f.env, Image(size, size, 1, 1.0f));
    return cache.emplace(size, std::move(f)).first->second;
}

void set_pixels(benchmark::State& state, int size) {
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(size) * size);
}

void BM_TraceParallel(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const Fixture& f = fixture(size);
    for (auto _ : state) benchmark::DoNotOptimize(trace_screen(f.gb, &f.direct, f.cfg));
    set_pixels(state, size);
}

void BM_TraceReference(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const Fixture& f = fixture(size);
    for (auto _ : state) benchmark::DoNotOptimize(reference::trace_screen(f.gb, &f.direct, f.cfg));
    set_pixels(state, size);
}

void BM_ShadeParallel(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const Fixture& f = fixture(size);
    for (auto _ : state) benchmark::DoNotOptimize(ibl::shade_direct(f.gb, f.env, f.occlusion));
    set_pixels(state, size);
}

void BM_ShadeReference(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const Fixture& f = fixture(size);
    for (auto _ : state) benchmark::DoNotOptimize(reference::shade_direct(f.gb, f.env, f.occlusion));
    set_pixels(state, size);
}

void BM_RenderParallel(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const Fixture& f = fixture(size);
    for (auto _ : state) benchmark::DoNotOptimize(render_view(f.gb, f.env, f.cfg));
    set_pixels(state, size);
}

void BM_RenderReference(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const Fixture& f = fixture(size);
    for (auto _ : state) benchmark::DoNotOptimize(reference::render_view(f.gb, f.env, f.cfg));
    set_pixels(state, size);
}

void BM_PrefilterDiffuseParallel(benchmark::State& state) {
    const Image env = oracle::sky_environment(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ibl::prefilter_diffuse(env, 32));
}

void BM_PrefilterDiffuseReference(benchmark::State& state) {
    const Image env = oracle::sky_environment(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::prefilter_diffuse(env, 32));
}

} // namespace

BENCHMARK(BM_TraceParallel)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraceReference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShadeParallel)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShadeReference)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderParallel)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RenderReference)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrefilterDiffuseParallel)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrefilterDiffuseReference)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
