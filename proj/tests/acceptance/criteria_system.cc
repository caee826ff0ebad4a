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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "acceptance.h"
#include "cli.h"
#include "iirfit/designers.h"
#include "iirfit/dsp.h"
#include "iirfit/evalbench.h"
#include "iirfit/filter_io.h"
#include "iirfit/ingest.h"
#include "iirfit/mlp.h"
#include "iirfit/randfilt.h"

namespace iirfit::acceptance {
namespace {

namespace fs = std::filesystem;
using std::numbers::pi;

constexpr double kFs = 44100.0;
constexpr std::uint64_t kSeed = 1;

// configs/desk.toml in code form.
TrainConfig desk_config(int order, int threads) {
  TrainConfig c;
  c.shape = {512, 256, order};
  c.family = Family::kG;
  c.batch_size = 128;
  c.filters_per_epoch = 20000;
  c.epochs = 10;
  c.lr = 1e-5;
  c.lr_decay_points = {0.8, 0.95};
  c.lr_decay_factor = 0.1;
  c.grad_clip_norm = 0.9;
  c.sample_rate_hz = kFs;
  c.seed = kSeed;
  c.threads = threads;
  return c;
}

std::shared_ptr<const Mlp<float>> train_desk_model(int order, int threads) {
  const TrainConfig cfg = desk_config(order, threads);
  TrainState state = initial_train_state(cfg);
  std::cout << "  training D=256 N=" << order << ", " << cfg.total_steps() << " steps\n";
  train(cfg, state, -1, [](const TrainLogRow& row) {
    std::cout << "    epoch " << row.epoch << " step " << row.step << " lr " << row.lr
              << " mean dB MSE " << num(row.mean_db_mse) << "\n"
              << std::flush;
  });
  return std::make_shared<const Mlp<float>>(std::move(state.model));
}

// ---------------------------------------------------------------------------
// 9. Desk-scale training.

Outcome desk_training(const Context& ctx) {
  const auto model = train_desk_model(4, ctx.threads);
  const FrequencyGrid grid = make_grid(512, kFs);
  const EvalDataset held_out = build_eval_set(Family::kG, 4, 1000, kSeed, grid);
  const EvalOptions opts{.threads = ctx.threads, .timing_repeats = 0};
  const EvalRow net = evaluate(iirnet_method(model), held_out, opts).row;
  const EvalRow myw = evaluate(myw_method({.order = 4}), held_out, opts).row;
  const bool pass = net.mean_db_mse < 5.0 && net.mean_db_mse < myw.mean_db_mse;
  return {pass, "held-out G4 x1000: network mean " + num(net.mean_db_mse) + " (median " +
                    num(net.median_db_mse) + "), MYW(4) mean " + num(myw.mean_db_mse) +
                    " (median " + num(myw.median_db_mse) + "); need < 5.0 and < MYW"};
}

// ---------------------------------------------------------------------------
// 10. Order study.

Outcome order_trend(const Context& ctx) {
  const std::vector<int> orders = {4, 8, 16};
  std::map<int, std::shared_ptr<const Mlp<float>>> models;
  for (int n : orders) models[n] = train_desk_model(n, ctx.threads);
  const OrderStudy study = order_study(models, orders, orders, Family::kG, 1000, kSeed,
                                       make_grid(512, kFs), ctx.threads);
  write_order_study_markdown(std::cout, study);
  const double n16 = study.mean_db_mse[2][2];
  const double n4 = study.mean_db_mse[0][2];
  return {n16 < n4, "on G16 targets: order-16 model " + num(n16) + " vs order-4 model " +
                        num(n4) + " mean dB MSE"};
}

// ---------------------------------------------------------------------------
// 11. Runtime ratio.

Outcome runtime_ratio(const Context&) {
  const FrequencyGrid grid = make_grid(512, kFs);
  const EvalDataset data = build_eval_set(Family::kG, 16, 100, kSeed, grid);
  // Timing does not depend on the weights, so an untrained model will do.
  const auto model =
      std::make_shared<const Mlp<float>>(Mlp<float>::Initialized({512, 256, 16}, kSeed));
  const TimingStats net = time_method(iirnet_method(model), data, 1000);
  SgdConfig sgd;
  sgd.order = 16;
  sgd.steps = 100;
  const TimingStats slow = time_method(sgd_method(sgd), data, 1000);
  const double ratio = slow.mean_ms / net.mean_ms;
  return {ratio >= 50.0 && net.mean_ms <= 1.0,
          "single thread, 1000 calls each: iirnet-256 " + num(net.mean_ms) + " ms, sgd-100 " +
              num(slow.mean_ms) + " ms, ratio " + num(ratio) + " (need >= 50, iirnet <= 1 ms)"};
}

// ---------------------------------------------------------------------------
// 12. Determinism.

Outcome determinism(const Context& ctx) {
  const fs::path root = ctx.scratch / "determinism";
  auto invocations = [&](const fs::path& out) {
    const std::string o = out.string();
    return std::vector<std::vector<std::string>>{
        {"--deterministic", "--seed", "12", "--output-dir", o + "/train", "train", "--order", "4",
         "--hidden", "32", "--filters-per-epoch", "512", "--epochs", "2", "--batch-size", "32",
         "--lr", "1e-3"},
        {"--deterministic", "--seed", "12", "--output-dir", o + "/eval", "eval", "--model",
         o + "/train/model.ckpt", "--methods", "iirnet", "myw", "sgd", "--sgd-steps", "10",
         "--order", "4", "--count", "20"},
        {"--deterministic", "--seed", "12", "--output-dir", o + "/generate", "generate", "--order",
         "8", "--count", "50", "--roots", "--responses"}};
  };
  // Same output path both times; the first tree is moved aside.
  std::ostringstream sink;
  for (const char* kept : {"a", "b"}) {
    for (const auto& args : invocations(root / "run")) {
      std::vector<std::string> argv = {"iirfit"};
      argv.insert(argv.end(), args.begin(), args.end());
      const int code = cli::run(argv, sink, sink);
      if (code != cli::kExitOk) {
        return {false, args[5] + " exited with " + std::to_string(code) + ": " + sink.str()};
      }
    }
    fs::rename(root / "run", root / kept);
  }
  int files = 0, differing = 0;
  std::string first_diff;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    ++files;
    const fs::path twin = root / "b" / fs::relative(e.path(), root / "a");
    if (!fs::exists(twin) || read_text_file(e.path()) != read_text_file(twin)) {
      if (differing++ == 0) first_diff = fs::relative(e.path(), root / "a").string();
    }
  }
  int twin_files = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "b")) twin_files += e.is_regular_file();
  fs::remove_all(root);
  return {files > 0 && differing == 0 && files == twin_files,
          "train/eval/generate run twice: " + std::to_string(files) + " files, " +
              std::to_string(differing) + " differ" +
              (first_diff.empty() ? "" : " (first: " + first_diff + ")")};
}

// ---------------------------------------------------------------------------
// 13. Ingestion pipeline.

struct SineFit {
  double freq_hz;
  double amplitude;
};

// Zero-crossing frequency, then least-squares amplitude, over the middle half.
SineFit fit_sine(const ImpulseResponse& ir) {
  const auto& x = ir.samples;
  const size_t lo = x.size() / 4, hi = 3 * x.size() / 4;
  double first = -1.0, last = -1.0;
  int crossings = 0;
  for (size_t i = lo; i < hi; ++i) {
    if (x[i] < 0.0 && x[i + 1] >= 0.0) {
      const double t = i + x[i] / (x[i] - x[i + 1]);
      if (first < 0.0) first = t;
      last = t;
      ++crossings;
    }
  }
  const double f = (crossings - 1) / (last - first) * ir.sample_rate_hz;
  double cc = 0, ss = 0, cs = 0, xc = 0, xs = 0;
  for (size_t i = lo; i < hi; ++i) {
    const double w = 2.0 * pi * f * i / ir.sample_rate_hz;
    const double c = std::cos(w), s = std::sin(w);
    cc += c * c;
    ss += s * s;
    cs += c * s;
    xc += x[i] * c;
    xs += x[i] * s;
  }
  const double det = cc * ss - cs * cs;
  return {f, std::hypot((xc * ss - xs * cs) / det, (xs * cc - xc * cs) / det)};
}

Outcome ingestion(const Context&) {
  const FrequencyGrid grid = make_grid(512, kFs);
  double worst_delta = 0.0;
  for (int length : {2, 64, 512, 4096}) {
    for (int delay : {0, 1, length / 2}) {
      ImpulseResponse ir;
      ir.sample_rate_hz = kFs;
      ir.samples.assign(length, 0.0);
      ir.samples[delay] = 1.0;
      for (double v : ir_to_target(ir, grid, {}).values_db) {
        worst_delta = std::max(worst_delta, std::abs(v));
      }
    }
  }

  double worst_poly = 0.0;
  std::mt19937_64 rng(13);
  std::normal_distribution<double> coef(0.0, 10.0);
  for (int window : {5, 11, 31, 63}) {
    for (int order : {3, 4}) {
      if (order >= window) continue;
      for (int degree = 0; degree <= 3; ++degree) {
        std::vector<double> c(degree + 1);
        for (double& v : c) v = coef(rng);
        MagnitudeResponse x{grid, std::vector<double>(grid.size())};
        for (int j = 0; j < grid.size(); ++j) {
          const double t = static_cast<double>(j) / (grid.size() - 1);
          double y = 0.0;
          for (int k = degree; k >= 0; --k) y = y * t + c[k];
          x.values_db[j] = y;
        }
        const auto s = savgol_smooth(x, {window, order});
        for (int j = 0; j < grid.size(); ++j) {
          worst_poly = std::max(worst_poly, std::abs(s.values_db[j] - x.values_db[j]));
        }
      }
    }
  }

  double worst_amp_db = 0.0, worst_freq_rel = 0.0;
  for (double f : {440.0, 1000.0, 10000.0}) {
    ImpulseResponse in;
    in.sample_rate_hz = 48000.0;
    for (int i = 0; i < 48000; ++i) in.samples.push_back(0.5 * std::sin(2 * pi * f * i / 48000.0 + 0.3));
    const SineFit fit = fit_sine(resample(in, 44100.0));
    worst_amp_db = std::max(worst_amp_db, std::abs(20.0 * std::log10(fit.amplitude / 0.5)));
    worst_freq_rel = std::max(worst_freq_rel, std::abs(fit.freq_hz - f) / f);
  }
  return {worst_delta <= 1e-6 && worst_poly <= 1e-9 && worst_amp_db <= 0.1 &&
              worst_freq_rel <= 1e-4,
          "delta max " + num(worst_delta) + " dB (1e-6); Savitzky-Golay polynomial max error " +
              num(worst_poly) + " (1e-9); 48k->44.1k sinusoids: amplitude " + num(worst_amp_db) +
              " dB (0.1), frequency " + num(100 * worst_freq_rel) + " % (0.01)"};
}

}  // namespace

std::vector<Criterion> system_criteria() {
  return {
      {9, "desk-scale training", 3600.0, desk_training},
      {10, "order study trend", 0.0, order_trend},
      {11, "runtime ratio", 0.0, runtime_ratio},
      {12, "determinism", 0.0, determinism},
      {13, "ingestion pipeline", 0.0, ingestion},
  };
}

}  // namespace iirfit::acceptance
