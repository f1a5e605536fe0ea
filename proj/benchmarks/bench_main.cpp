// SPDX-License-Identifier: Apache-2.0
//
// rsrelay - link-level simulation and power allocation for rate-splitting
// multiple access in decode-and-forward relay networks
// Copyright (C) 2026 the rsrelay contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Micro-benchmarks of the hot paths: the scaled exponential-integral sum
// inside the closed-form split, one full channel/precoder/gain pipeline
// pass, ensemble evaluation at one grid point, and the split itself.

#include "rsrelay/alloc.hpp"
#include "rsrelay/channel.hpp"
#include "rsrelay/precoder.hpp"
#include "rsrelay/ratecalc.hpp"
#include "rsrelay/specfun.hpp"

#include <benchmark/benchmark.h>

namespace
{

void BM_en_partial_sum_scaled(benchmark::State &state)
{
    const unsigned count = unsigned(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(rsrelay::en_partial_sum_scaled(count, 1.6));
}
BENCHMARK(BM_en_partial_sum_scaled)->Arg(16)->Arg(128)->Arg(1024);

void BM_digamma(benchmark::State &state)
{
    double x = 0.1;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(rsrelay::digamma(x));
        x += 0.1;
        if (x > 50.0)
            x = 0.1;
    }
}
BENCHMARK(BM_digamma);

void BM_realization_pipeline(benchmark::State &state)
{
    rsrelay::SystemConfig config;
    std::uint64_t index = 0;
    for (auto _ : state)
    {
        const rsrelay::ChannelRealization r = rsrelay::draw_realization(config, index++);
        const rsrelay::PrecoderSet p = rsrelay::build_precoders(r, config);
        benchmark::DoNotOptimize(rsrelay::compute_link_gains(r, p, config));
    }
}
BENCHMARK(BM_realization_pipeline);

void BM_ensemble_evaluate(benchmark::State &state)
{
    rsrelay::SystemConfig config;
    static const rsrelay::RealizationSet set(config, 200);
    for (auto _ : state)
        benchmark::DoNotOptimize(set.evaluate(0.02, 0.01));
}
BENCHMARK(BM_ensemble_evaluate);

void BM_closed_form_split(benchmark::State &state)
{
    rsrelay::SystemConfig config;
    config.csit_model = rsrelay::CsitModel::make_constant(0.3);
    for (auto _ : state)
        benchmark::DoNotOptimize(rsrelay::t1_opt(config));
}
BENCHMARK(BM_closed_form_split);

} // namespace

BENCHMARK_MAIN();
