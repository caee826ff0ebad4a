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

#include "iirfit/evalbench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include <zlib.h>

#include "iirfit/errors.h"
#include "iirfit/filter_io.h"
#include "iirfit/parallel.h"

namespace iirfit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt(double v, const char* spec = "%.6g") {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string gain_mode_name(GainMode mode) {
  return mode == GainMode::kDirect ? "direct" : "sigmoid100";
}

}  // namespace

Method iirnet_method(std::shared_ptr<const Mlp<float>> model) {
  if (!model) throw InvalidArgument("iirnet_method: null model");
  const MlpShape s = model->shape();
  Method m;
  m.name = "iirnet-" + std::to_string(s.hidden_dim);
  m.config = {{"method", "iirnet"},
              {"input_dim", s.input_dim},
              {"hidden_dim", s.hidden_dim},
              {"order", s.order}};
  m.design = [model](const MagnitudeResponse& target) -> DesignedFilter {
    return estimate(*model, target);
  };
  return m;
}

Method myw_method(const MywConfig& config) {
  Method m;
  m.name = "myw-" + std::to_string(config.order);
  m.config = {{"method", "myw"},
              {"order", config.order},
              {"acf_lags", config.acf_lags},
              {"fft_size", config.fft_size}};
  m.design = [config](const MagnitudeResponse& target) -> DesignedFilter {
    return myw_design(target, config);
  };
  return m;
}

Method sgd_method(const SgdConfig& config) {
  Method m;
  m.name = "sgd-" + std::to_string(config.steps);
  m.config = {{"method", "sgd"},
              {"order", config.order},
              {"steps", config.steps},
              {"lr", config.lr},
              {"seed", config.seed},
              {"gain_mode", gain_mode_name(config.gain_mode)},
              {"optimizer", config.optimizer == SgdOptimizer::kPlain ? "plain" : "adaptive-moment"}};
  m.design = [config](const MagnitudeResponse& target) -> DesignedFilter {
    return sgd_design(target, config).cascade;
  };
  return m;
}

MagnitudeResponse designed_response(const DesignedFilter& filter, const FrequencyGrid& grid) {
  if (const auto* c = std::get_if<FilterCascade>(&filter)) return cascade_response_db(*c, grid);
  return coeff_response_db(std::get<CoefficientFilter>(filter), grid);
}

EvalDataset build_eval_set(Family family, int order, int count, std::uint64_t seed,
                           const FrequencyGrid& grid, const SamplerOptions& options) {
  if (count < 1) throw InvalidArgument("evaluation set needs count >= 1");
  EvalDataset d;
  d.name = std::string(1, family_tag(family)) + std::to_string(order);
  d.targets.reserve(count);
  const RandomFilterSpec spec{family, order, seed};
  for (int i = 0; i < count; ++i) {
    d.targets.push_back(draw_target(spec, Stream::kEval, i, grid, options).response);
  }
  return d;
}

EvalDataset build_ingested_set(std::string name, const std::vector<ImpulseResponse>& irs,
                               const FrequencyGrid& grid, const SmoothingConfig& smoothing,
                               int threads) {
  EvalDataset d;
  d.name = std::move(name);
  d.targets.assign(irs.size(), MagnitudeResponse{grid, {}});
  parallel_for(static_cast<std::int64_t>(irs.size()), threads, [&](std::int64_t i) {
    d.targets[i] = ir_to_target(irs[i], grid, smoothing);
  });
  return d;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const double pos = p / 100.0 * (values.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - lo) * (values[hi] - values[lo]);
}

TimingStats time_method(const Method& method, const EvalDataset& dataset, int repeats,
                        int warmup) {
  if (repeats < 1) throw InvalidArgument("timing needs repeats >= 1");
  if (dataset.targets.empty()) throw InvalidArgument("timing needs a non-empty dataset");
  const size_t n = dataset.targets.size();
  for (int i = 0; i < warmup; ++i) {
    try {
      method.design(dataset.targets[i % n]);
    } catch (const std::exception&) {
    }
  }
  std::vector<double> ms(repeats);
  for (int i = 0; i < repeats; ++i) {
    const auto& target = dataset.targets[i % n];
    const auto t0 = std::chrono::steady_clock::now();
    try {
      method.design(target);
    } catch (const std::exception&) {
      // Failed designs still cost time; keep them.
    }
    ms[i] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  TimingStats s;
  s.repeats = repeats;
  double sum = 0.0;
  for (double v : ms) sum += v;
  s.mean_ms = sum / repeats;
  s.p95_ms = percentile(std::move(ms), 95.0);
  return s;
}

EvalResult evaluate(const Method& method, const EvalDataset& dataset, const EvalOptions& options) {
  EvalResult r;
  const auto n = static_cast<std::int64_t>(dataset.targets.size());
  r.records.resize(n);
  parallel_for(n, options.threads, [&](std::int64_t i) {
    const MagnitudeResponse& target = dataset.targets[i];
    FilterRecord& rec = r.records[i];
    try {
      rec.db_mse = db_mse(designed_response(method.design(target), target.grid), target);
      if (!std::isfinite(rec.db_mse)) throw NumericError("non-finite dB MSE");
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.db_mse = kNaN;
      rec.error = e.what();
    }
  });
  std::vector<double> ok;
  for (const auto& rec : r.records) {
    if (!rec.failed) ok.push_back(rec.db_mse);
  }
  EvalRow& row = r.row;
  row.method = method.name;
  row.dataset = dataset.name;
  row.count = static_cast<int>(n);
  row.failures = static_cast<int>(n - ok.size());
  double sum = 0.0;
  for (double v : ok) sum += v;  // dataset order
  row.mean_db_mse = ok.empty() ? kNaN : sum / ok.size();
  row.median_db_mse = percentile(ok, 50.0);
  row.p95_db_mse = percentile(ok, 95.0);
  if (options.timing_repeats > 0 && n > 0) {
    row.timing = time_method(method, dataset, options.timing_repeats, options.warmup);
  }
  return r;
}

std::string machine_descriptor() {
  std::string cpu = "unknown cpu";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(line.find_first_not_of(' ', colon + 1));
      break;
    }
  }
  std::string compiler = "unknown compiler";
#if defined(__clang__)
  compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
  compiler = "gcc " __VERSION__;
#endif
  return cpu + "; " + std::to_string(std::thread::hardware_concurrency()) + " hw threads; " +
         compiler;
}

std::string config_hash(const nlohmann::json& config) {
  const std::string s = config.dump();
  const uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size()));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

std::string report_csv_header() {
  return "method,dataset,count,failures,mean_db_mse,median_db_mse,p95_db_mse,mean_ms,p95_ms,"
         "machine,config_hash";
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  const std::string hash = config_hash(report.config);
  out << report_csv_header() << '\n';
  for (const auto& r : report.rows) {
    out << csv_field(r.method) << ',' << csv_field(r.dataset) << ',' << r.count << ','
        << r.failures << ',' << format_double(r.mean_db_mse) << ','
        << format_double(r.median_db_mse) << ',' << format_double(r.p95_db_mse) << ',';
    if (r.timing) out << format_double(r.timing->mean_ms) << ',' << format_double(r.timing->p95_ms);
    else out << ',';
    out << ',' << csv_field(report.machine) << ',' << hash << '\n';
  }
}

void write_report_markdown(std::ostream& out, const EvalReport& report) {
  out << "| method | dataset | count | failures | mean dB MSE | median | p95 | mean ms | p95 ms |\n"
      << "|---|---|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& r : report.rows) {
    out << "| " << r.method << " | " << r.dataset << " | " << r.count << " | " << r.failures
        << " | " << fmt(r.mean_db_mse, "%.4f") << " | " << fmt(r.median_db_mse, "%.4f") << " | "
        << fmt(r.p95_db_mse, "%.4f") << " | "
        << (r.timing ? fmt(r.timing->mean_ms, "%.4f") : "-") << " | "
        << (r.timing ? fmt(r.timing->p95_ms, "%.4f") : "-") << " |\n";
  }
  out << "\nMachine: " << report.machine << "\n\nConfig (" << config_hash(report.config)
      << "):\n\n```json\n" << report.config.dump(2) << "\n```\n";
}

OrderStudy order_study(const std::map<int, std::shared_ptr<const Mlp<float>>>& models,
                       const std::vector<int>& train_orders, const std::vector<int>& test_orders,
                       Family family, int count, std::uint64_t seed, const FrequencyGrid& grid,
                       int threads) {
  OrderStudy s;
  s.train_orders = train_orders;
  s.test_orders = test_orders;
  s.mean_db_mse.assign(train_orders.size(), std::vector<double>(test_orders.size(), kNaN));
  std::vector<EvalDataset> sets;
  for (int order : test_orders) sets.push_back(build_eval_set(family, order, count, seed, grid));
  for (size_t i = 0; i < train_orders.size(); ++i) {
    const auto it = models.find(train_orders[i]);
    if (it == models.end() || !it->second) {
      s.notices.push_back("no model for train order " + std::to_string(train_orders[i]) +
                          "; row skipped");
      continue;
    }
    const Method m = iirnet_method(it->second);
    for (size_t j = 0; j < sets.size(); ++j) {
      s.mean_db_mse[i][j] = evaluate(m, sets[j], {threads, 0, 0}).row.mean_db_mse;
    }
  }
  return s;
}

void write_order_study_markdown(std::ostream& out, const OrderStudy& study) {
  out << "| train \\ test |";
  for (int o : study.test_orders) out << ' ' << o << " |";
  out << "\n|---|";
  for (size_t j = 0; j < study.test_orders.size(); ++j) out << "---:|";
  out << '\n';
  for (size_t i = 0; i < study.train_orders.size(); ++i) {
    out << "| " << study.train_orders[i] << " |";
    for (double v : study.mean_db_mse[i]) out << ' ' << (std::isnan(v) ? "-" : fmt(v, "%.2f")) << " |";
    out << '\n';
  }
  for (const auto& n : study.notices) out << "\n" << n << '\n';
}

}  // namespace iirfit
