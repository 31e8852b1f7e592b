// Copyright 2026 The Origami Crawler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference sweep against the OpenMP sweep on the same seeded sample.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "crawler/sweep.hpp"

namespace {

constexpr std::uint64_t kSample = 96;

crawler::SweepConfig bench_config(int workers) {
  crawler::SweepConfig c;
  c.out = std::filesystem::temp_directory_path() / ("crawler_bench_" + std::to_string(workers) + ".jsonl");
  c.sample = kSample;
  c.seed = 7;
  c.workers = workers;
  return c;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto c = bench_config(0);
  for (auto _ : state) {
    std::filesystem::remove(c.out);
    benchmark::DoNotOptimize(crawler::run_sweep_serial(c));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kSample));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto c = bench_config(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    std::filesystem::remove(c.out);
    benchmark::DoNotOptimize(crawler::run_sweep(c));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kSample));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
