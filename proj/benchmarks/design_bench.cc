/*
 * Copyright 2026 The iirfit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "iirfit/designers.h"
#include "iirfit/dsp.h"
#include "iirfit/grad.h"
#include "iirfit/ingest.h"
#include "iirfit/mlp.h"
#include "iirfit/randfilt.h"

namespace iirfit {
namespace {

const FrequencyGrid& Grid() {
  static const FrequencyGrid grid = make_grid(512, 44100.0);
  return grid;
}

MagnitudeResponse Target(int order, std::uint64_t index = 0) {
  return draw_target({Family::kG, order, 1}, Stream::kTest, index, Grid()).response;
}

void BM_CascadeResponse(benchmark::State& state) {
  Rng rng(3);
  const FilterCascade c = sample_family_c(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(cascade_response_db(c, Grid()));
}
BENCHMARK(BM_CascadeResponse)->Arg(4)->Arg(16)->Arg(32);

void BM_CoeffResponseDirect(benchmark::State& state) {
  Rng rng(3);
  const CoefficientFilter f = sample_family_a(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(coeff_response_db(f, Grid()));
}
BENCHMARK(BM_CoeffResponseDirect)->Arg(16)->Arg(32);

void BM_CoeffResponseFft(benchmark::State& state) {
  Rng rng(3);
  const CoefficientFilter f = sample_family_a(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(coeff_response_db_fft(f, Grid()));
}
BENCHMARK(BM_CoeffResponseFft)->Arg(16)->Arg(32);

void BM_LossAndGrad(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const MagnitudeResponse target = Target(order);
  const LossEvaluator eval(Grid());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> v(2 * order + 1);
  for (double& x : v) x = u(rng);
  v[0] = 1.0;
  const CascadeParams params(v);
  for (auto _ : state) benchmark::DoNotOptimize(eval.loss_and_grad(params, target, GainMode::kDirect));
}
BENCHMARK(BM_LossAndGrad)->Arg(4)->Arg(16)->Arg(32);

void BM_SampleFamily(benchmark::State& state) {
  const auto family = static_cast<Family>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(draw_target({family, 16, 1}, Stream::kTest, i++, Grid()));
  }
  state.SetLabel(family_name(family));
}
BENCHMARK(BM_SampleFamily)->DenseRange(0, 6);

void BM_IirnetEstimate(benchmark::State& state) {
  const MlpShape shape{512, static_cast<int>(state.range(0)), 16};
  const auto model = Mlp<float>::Initialized(shape, 1);
  const MagnitudeResponse target = Target(16);
  for (auto _ : state) benchmark::DoNotOptimize(estimate(model, target));
}
BENCHMARK(BM_IirnetEstimate)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_TrainingBatch(benchmark::State& state) {
  const MlpShape shape{512, 256, 4};
  const auto model = Mlp<float>::Initialized(shape, 1);
  const LossEvaluator eval(Grid());
  std::vector<TrainingExample> batch;
  for (int b = 0; b < state.range(0); ++b) batch.push_back(make_example(Target(4, b)));
  for (auto _ : state) benchmark::DoNotOptimize(batch_loss_and_grad(model, eval, batch, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TrainingBatch)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_MywDesign(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const MagnitudeResponse target = Target(order);
  for (auto _ : state) benchmark::DoNotOptimize(myw_design(target, {order, 0, 0}));
}
BENCHMARK(BM_MywDesign)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SgdDesign(benchmark::State& state) {
  const MagnitudeResponse target = Target(16);
  SgdConfig cfg;
  cfg.steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sgd_design(target, cfg));
}
BENCHMARK(BM_SgdDesign)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_SavgolSmooth(benchmark::State& state) {
  const MagnitudeResponse target = Target(16);
  for (auto _ : state) benchmark::DoNotOptimize(savgol_smooth(target, {}));
}
BENCHMARK(BM_SavgolSmooth);

void BM_Resample48kTo44k1(benchmark::State& state) {
  ImpulseResponse ir;
  ir.sample_rate_hz = 48000.0;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < state.range(0); ++i) ir.samples.push_back(g(rng));
  for (auto _ : state) benchmark::DoNotOptimize(resample(ir, 44100.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Resample48kTo44k1)->Arg(512)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_IrToMagnitude(benchmark::State& state) {
  const auto irs = synthetic_cabinet_set(1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ir_to_magnitude(irs[0], Grid()));
}
BENCHMARK(BM_IrToMagnitude);

}  // namespace
}  // namespace iirfit

BENCHMARK_MAIN();
