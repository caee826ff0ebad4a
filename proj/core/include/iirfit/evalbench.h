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

// Accuracy and runtime evaluation of the design engines. Accuracy runs in
// parallel across targets; timing is single-threaded and times the design
// call only (no dataset generation, response evaluation or I/O).

#ifndef IIRFIT_EVALBENCH_H_
#define IIRFIT_EVALBENCH_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "iirfit/designers.h"
#include "iirfit/dsp.h"
#include "iirfit/ingest.h"
#include "iirfit/mlp.h"
#include "iirfit/randfilt.h"

namespace iirfit {

using DesignedFilter = std::variant<FilterCascade, CoefficientFilter>;
using DesignFn = std::function<DesignedFilter(const MagnitudeResponse&)>;

struct Method {
  std::string name;      // "iirnet-256", "myw-16", "sgd-100", ...
  nlohmann::json config;
  DesignFn design;
};

Method iirnet_method(std::shared_ptr<const Mlp<float>> model);
Method myw_method(const MywConfig& config);
Method sgd_method(const SgdConfig& config);

MagnitudeResponse designed_response(const DesignedFilter& filter, const FrequencyGrid& grid);

struct EvalDataset {
  std::string name;  // "G16", "hrtf", ...
  std::vector<MagnitudeResponse> targets;
};

// Draws 0..count-1 of Stream::kEval, which never overlaps the training
// stream. Throws InvalidArgument if count < 1.
EvalDataset build_eval_set(Family family, int order, int count, std::uint64_t seed,
                           const FrequencyGrid& grid, const SamplerOptions& options = {});

// Runs every IR through ir_to_target.
EvalDataset build_ingested_set(std::string name, const std::vector<ImpulseResponse>& irs,
                               const FrequencyGrid& grid, const SmoothingConfig& smoothing,
                               int threads = 1);

struct FilterRecord {
  double db_mse = 0.0;
  bool failed = false;
  std::string error;
};

struct TimingStats {
  int repeats = 0;
  double mean_ms = 0.0;
  double p95_ms = 0.0;
};

struct EvalRow {
  std::string method;
  std::string dataset;
  int count = 0;
  int failures = 0;
  double mean_db_mse = 0.0;
  double median_db_mse = 0.0;
  double p95_db_mse = 0.0;
  std::optional<TimingStats> timing;  // absent in deterministic runs
};

struct EvalOptions {
  int threads = 1;
  // 0 skips timing entirely.
  int timing_repeats = 1000;
  int warmup = 10;
};

struct EvalResult {
  EvalRow row;
  std::vector<FilterRecord> records;  // in dataset order
};

// Per-filter failures (any exception from the design or response) are
// recorded and counted, not rethrown. Statistics cover the successful
// records; they are NaN when every filter failed.
EvalResult evaluate(const Method& method, const EvalDataset& dataset,
                    const EvalOptions& options = {});

// Cycles through the dataset for `warmup` untimed then `repeats` timed
// design calls on the calling thread. Throws InvalidArgument if repeats < 1
// or the dataset is empty.
TimingStats time_method(const Method& method, const EvalDataset& dataset, int repeats,
                        int warmup = 10);

// Linear interpolation between order statistics (the common "type 7").
double percentile(std::vector<double> values, double p);

struct EvalReport {
  std::string machine;
  nlohmann::json config;
  std::vector<EvalRow> rows;
};

std::string machine_descriptor();
// CRC-32 of the compact config dump, 8 hex digits.
std::string config_hash(const nlohmann::json& config);

std::string report_csv_header();
void write_report_csv(std::ostream& out, const EvalReport& report);
void write_report_markdown(std::ostream& out, const EvalReport& report);

struct OrderStudy {
  std::vector<int> train_orders;
  std::vector<int> test_orders;
  // mean_db_mse[i][j]: model trained at train_orders[i] on test_orders[j].
  std::vector<std::vector<double>> mean_db_mse;
  std::vector<std::string> notices;  // skipped rows
};

// Rows for missing models are skipped with a notice (and left as NaN).
OrderStudy order_study(const std::map<int, std::shared_ptr<const Mlp<float>>>& models,
                       const std::vector<int>& train_orders, const std::vector<int>& test_orders,
                       Family family, int count, std::uint64_t seed, const FrequencyGrid& grid,
                       int threads = 1);

void write_order_study_markdown(std::ostream& out, const OrderStudy& study);

}  // namespace iirfit

#endif  // IIRFIT_EVALBENCH_H_
