// Copyright 2026 The memcert developers
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

#include <benchmark/benchmark.h>

#include "memcert/channels.hpp"
#include "memcert/oracle.hpp"
#include "memcert/qcore.hpp"
#include "memcert/sdp.hpp"
#include "memcert/selftest.hpp"
#include "memcert/simulate.hpp"

using namespace memcert;

namespace {

void BM_singlet_fidelity_bound(benchmark::State& state) {
  double s = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(singlet_fidelity_bound(s));
    s = s < 2.82 ? s + 1e-6 : 2.0;
  }
}
BENCHMARK(BM_singlet_fidelity_bound);

void BM_scenario1_bound(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(scenario1_bound(0.933971, 0.869620));
}
BENCHMARK(BM_scenario1_bound);

void BM_scenario3_bound(benchmark::State& state) {
  ScenarioInputs in;
  in.scenario = Scenario::s3;
  in.f_i = 0.933971;
  in.f_o = 0.869620;
  in.p_i = 0.9;
  in.p_o = 0.9;
  for (auto _ : state) benchmark::DoNotOptimize(scenario3_bound(in));
}
BENCHMARK(BM_scenario3_bound);

void BM_lambda_max_sdp(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sdp::lambda_max_sdp(0.93, 0.8));
}
BENCHMARK(BM_lambda_max_sdp);

void BM_g_sdp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sdp::g_sdp(0.8696, 0.55));
}
BENCHMARK(BM_g_sdp);

void BM_b_max_sdp(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(sdp::b_max_sdp(0.8696, 0.6, 0.7));
}
BENCHMARK(BM_b_max_sdp);

void BM_exact_correlations(benchmark::State& state) {
  const ExperimentModel model = ideal_chsh_model();
  for (auto _ : state) benchmark::DoNotOptimize(exact_correlations(model));
}
BENCHMARK(BM_exact_correlations);

void BM_sample_counts(benchmark::State& state) {
  const ExperimentModel model = ideal_chsh_model();
  std::uint64_t seed = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_counts(model, 10000, seed++));
}
BENCHMARK(BM_sample_counts);

void BM_fidelity_mixed(benchmark::State& state) {
  const DensityOperator a =
      choi_of(oracle::amplitude_damping(0.3)).matrix;
  const DensityOperator b =
      choi_of(oracle::amplitude_damping(0.6)).matrix;
  for (auto _ : state) benchmark::DoNotOptimize(fidelity(a, b));
}
BENCHMARK(BM_fidelity_mixed);

void BM_choi_kraus_roundtrip(benchmark::State& state) {
  const KrausChannel ch = oracle::amplitude_damping(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(kraus_of(choi_of(ch)));
}
BENCHMARK(BM_choi_kraus_roundtrip);

void BM_extraction_estimate(benchmark::State& state) {
  const KrausChannel ch = oracle::amplitude_damping(0.3);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        oracle::extraction_fidelity_estimate(ch, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_extraction_estimate)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
