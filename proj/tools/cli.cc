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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "iirfit/checkpoint.h"
#include "iirfit/designers.h"
#include "iirfit/dsp.h"
#include "iirfit/errors.h"
#include "iirfit/evalbench.h"
#include "iirfit/filter_io.h"
#include "iirfit/ingest.h"
#include "iirfit/mlp.h"
#include "iirfit/parallel.h"
#include "iirfit/polyroots.h"
#include "iirfit/randfilt.h"
#include "svg.h"

namespace iirfit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config echo: every bound option remembers how to print itself as TOML.

std::string toml_scalar(const std::string& v) { return json(v).dump(); }
std::string toml_scalar(double v) { return format_double(v); }
std::string toml_scalar(int v) { return std::to_string(v); }
std::string toml_scalar(std::int64_t v) { return std::to_string(v); }
std::string toml_scalar(std::uint64_t v) { return std::to_string(v); }

template <typename T>
std::string toml_value(const T& v) {
  return toml_scalar(v);
}

template <typename T>
std::string toml_value(const std::vector<T>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + toml_scalar(v[i]);
  return s + "]";
}

template <typename T>
constexpr bool is_vector = false;
template <typename T>
constexpr bool is_vector<std::vector<T>> = true;

class Echo {
 public:
  template <typename T>
  CLI::Option* option(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    entries_[app].push_back({name, [&var] { return toml_value(var); }, is_vector<T>});
    return app->add_option("--" + name, var, help);
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& help) {
    entries_[app].push_back({name, [&var] { return std::string(var ? "true" : "false"); }, false});
    return app->add_flag("--" + name, var, help);
  }

  std::string render(const CLI::App* root, const CLI::App* sub) const {
    std::ostringstream s;
    s << "# iirfit " << sub->get_name() << " configuration echo\n";
    write(s, root);
    s << "\n[" << sub->get_name() << "]\n";
    write(s, sub);
    return s.str();
  }

 private:
  struct Entry {
    std::string name;
    std::function<std::string()> value;
    bool vector;
  };

  void write(std::ostringstream& s, const CLI::App* app) const {
    const auto it = entries_.find(app);
    if (it == entries_.end()) return;
    for (const Entry& e : it->second) {
      const std::string v = e.value();
      if (e.vector && v == "[]") continue;  // empty lists do not round-trip
      s << e.name << " = " << v << '\n';
    }
  }

  std::map<const CLI::App*, std::vector<Entry>> entries_;
};

// ---------------------------------------------------------------------------
// Files written by the current run; all removed if the run fails.

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  fs::path file(const std::string& name) {
    const fs::path p = dir_ / name;
    make_dirs(p.parent_path());
    files_.push_back(p);
    return p;
  }

  void discard() {
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);  // only if empty
    files_.clear();
    dirs_.clear();
  }

 private:
  void make_dirs(const fs::path& d) {
    if (d.empty() || fs::exists(d)) return;
    make_dirs(d.parent_path());
    fs::create_directory(d);
    dirs_.push_back(d);
  }

  fs::path dir_;
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
};

struct Globals {
  std::uint64_t seed = 0;
  int threads = 1;
  bool deterministic = false;
  std::string output_dir = ".";

  int workers() const { return deterministic ? 1 : std::max(1, threads); }
};

struct Run {
  const Globals& g;
  Outputs& outputs;
  std::ostream& out;
};

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

FrequencyGrid grid_from(int f_count, double fs_hz) { return make_grid(f_count, fs_hz); }

std::shared_ptr<const Mlp<float>> load_model(const std::string& path) {
  return std::make_shared<const Mlp<float>>(load_checkpoint(path).model);
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOpts {
  std::string family = "G";
  int order = 16;
  std::int64_t count = 1000;
  int grid = 512;
  double sample_rate = 44100.0;
  bool roots = false;
  bool responses = false;
};

void add_roots(std::ostream& csv, std::int64_t index, char family, const char* kind,
               const std::vector<Complex>& roots) {
  for (const Complex& r : roots) {
    csv << index << ',' << family << ',' << kind << ',' << format_double(r.real()) << ','
        << format_double(r.imag()) << '\n';
  }
}

std::vector<Complex> with_conjugates(const std::vector<Complex>& roots) {
  std::vector<Complex> out;
  for (const Complex& r : roots) {
    out.push_back(r);
    out.push_back(std::conj(r));
  }
  return out;
}

void run_generate(const GenerateOpts& o, Run& run) {
  if (o.count < 1) throw InvalidArgument("--count must be >= 1");
  DatasetManifest manifest;
  manifest.family = parse_family(o.family);
  manifest.order = o.order;
  manifest.seed = run.g.seed;
  manifest.count = o.count;
  manifest.f_count = o.grid;
  manifest.sample_rate_hz = o.sample_rate;
  SamplerOptions sampler;
  sampler.eq = manifest.eq_ranges;
  sampler.eq.sample_rate_hz = o.sample_rate;
  manifest.eq_ranges = sampler.eq;
  const FrequencyGrid grid = grid_from(o.grid, o.sample_rate);
  const RandomFilterSpec spec{manifest.family, o.order, run.g.seed};

  std::vector<TargetDraw> draws(o.count, TargetDraw{{}, MagnitudeResponse{grid, {}}, 0});
  parallel_for(o.count, run.g.workers(), [&](std::int64_t i) {
    draws[i] = draw_target(spec, Stream::kGenerate, i, grid, sampler);
  });

  write_json(run.outputs.file("manifest.json"), manifest_to_json(manifest));
  std::ostringstream filters;
  for (std::int64_t i = 0; i < o.count; ++i) {
    const SampledFilter& s = draws[i].sampled;
    json j = {{"index", i}, {"family", std::string(1, family_tag(s.family))},
              {"attempts", draws[i].attempts}};
    if (const auto* c = std::get_if<FilterCascade>(&s.filter)) j["cascade"] = cascade_to_json(*c);
    else j["coefficients"] = filter_to_json(std::get<CoefficientFilter>(s.filter));
    filters << j.dump() << '\n';
  }
  write_text_file(run.outputs.file("filters.jsonl"), filters.str());

  if (o.roots) {
    std::ostringstream csv;
    csv << "index,family,kind,re,im\n";
    for (std::int64_t i = 0; i < o.count; ++i) {
      const SampledFilter& s = draws[i].sampled;
      const char tag = family_tag(s.family);
      if (const auto* c = std::get_if<FilterCascade>(&s.filter)) {
        add_roots(csv, i, tag, "zero", with_conjugates(c->zeros));
        add_roots(csv, i, tag, "pole", with_conjugates(c->poles));
      } else {
        const auto& f = std::get<CoefficientFilter>(s.filter);
        add_roots(csv, i, tag, "zero", z_inverse_roots(f.numerator));
        add_roots(csv, i, tag, "pole", z_inverse_roots(f.denominator));
      }
    }
    write_text_file(run.outputs.file("roots.csv"), csv.str());
  }
  if (o.responses) {
    for (std::int64_t i = 0; i < o.count; ++i) {
      char name[48];
      std::snprintf(name, sizeof(name), "responses/response_%06lld.csv", static_cast<long long>(i));
      write_response_csv(run.outputs.file(name), draws[i].response);
    }
  }
  run.out << "generated " << o.count << " family-" << o.family << " order-" << o.order
          << " filters\n";
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
  std::string family = "G";
  int order = 4;
  int hidden = 256;
  int grid = 512;
  double sample_rate = 44100.0;
  std::int64_t batch_size = 128;
  std::int64_t filters_per_epoch = 20000;
  std::int64_t epochs = 10;
  double lr = 1e-5;
  std::vector<double> lr_decay = {0.8, 0.95};
  double lr_decay_factor = 0.1;
  double grad_clip = 0.9;
  double weight_decay = 1e-2;
  std::string resume;
  std::int64_t stop_step = -1;
  std::string model = "model.ckpt";
  std::string log = "train_log.csv";
};

void run_train(const TrainOpts& o, Run& run) {
  TrainConfig cfg;
  cfg.shape = {o.grid, o.hidden, o.order};
  cfg.family = parse_family(o.family);
  cfg.batch_size = o.batch_size;
  cfg.filters_per_epoch = o.filters_per_epoch;
  cfg.epochs = o.epochs;
  cfg.lr = o.lr;
  cfg.lr_decay_points = o.lr_decay;
  cfg.lr_decay_factor = o.lr_decay_factor;
  cfg.grad_clip_norm = o.grad_clip;
  cfg.adamw.weight_decay = o.weight_decay;
  cfg.sample_rate_hz = o.sample_rate;
  cfg.sampler.eq.sample_rate_hz = o.sample_rate;
  cfg.seed = run.g.seed;
  cfg.threads = run.g.workers();
  cfg.validate();

  TrainState state = initial_train_state(cfg);
  if (!o.resume.empty()) {
    Checkpoint ck = load_checkpoint(o.resume);
    if (!(ck.model.shape() == cfg.shape)) {
      throw InvalidArgument("--resume checkpoint shape does not match the configured model");
    }
    if (ck.seed != cfg.seed) {
      throw InvalidArgument("--resume checkpoint was trained with seed " + std::to_string(ck.seed));
    }
    state.model = std::move(ck.model);
    state.optimizer = std::move(ck.optimizer);
    run.out << "resuming at step " << state.optimizer.step << '\n';
  }

  std::ostringstream log;
  log << train_log_header() << '\n';
  train(cfg, state, o.stop_step, [&](const TrainLogRow& row) {
    const std::string line = format_train_log_row(row);
    log << line << '\n';
    run.out << line << '\n';
  });
  save_checkpoint(run.outputs.file(o.model).string(), {state.model, state.optimizer, cfg.seed});
  write_text_file(run.outputs.file(o.log), log.str());
  run.out << "saved " << o.model << " at step " << state.optimizer.step << " of "
          << cfg.total_steps() << '\n';
}

// ---------------------------------------------------------------------------
// fit

struct FitOpts {
  std::string method = "myw";
  int order = 16;
  std::string input;
  std::string model;
  int steps = 100;
  double lr = 5e-4;
  std::string optimizer = "plain";
  std::string gain_mode = "direct";
  bool overlay = false;
  std::string output = "filter.json";
};

SgdConfig sgd_config(int order, int steps, double lr, const std::string& optimizer,
                     const std::string& gain_mode, std::uint64_t seed) {
  SgdConfig c;
  c.order = order;
  c.steps = steps;
  c.lr = lr;
  c.seed = seed;
  c.optimizer = optimizer == "adam" ? SgdOptimizer::kAdaptiveMoment : SgdOptimizer::kPlain;
  c.gain_mode = gain_mode == "sigmoid100" ? GainMode::kSigmoid100 : GainMode::kDirect;
  return c;
}

void run_fit(const FitOpts& o, Run& run) {
  const MagnitudeResponse target = read_response_csv(o.input);
  DesignedFilter filter;
  int order = o.order;
  if (o.method == "myw") {
    filter = myw_design(target, {o.order, 0, 0});
  } else if (o.method == "sgd") {
    filter = sgd_design(target, sgd_config(o.order, o.steps, o.lr, o.optimizer, o.gain_mode,
                                           run.g.seed)).cascade;
  } else {
    if (o.model.empty()) throw InvalidArgument("--method iirnet needs --model");
    const auto model = load_model(o.model);
    order = model->shape().order;
    if (!(model->shape().input_dim == target.grid.size())) {
      throw InvalidArgument("model expects " + std::to_string(model->shape().input_dim) +
                            " grid points, target has " + std::to_string(target.grid.size()));
    }
    filter = estimate(*model, target);
  }
  const MagnitudeResponse fit = designed_response(filter, target.grid);
  const double mse = db_mse(fit, target);

  json j = std::holds_alternative<FilterCascade>(filter)
               ? cascade_to_json(std::get<FilterCascade>(filter))
               : filter_to_json(std::get<CoefficientFilter>(filter));
  write_json(run.outputs.file(o.output), j);
  write_json(run.outputs.file("fit_summary.json"),
             {{"method", o.method}, {"order", order}, {"input", o.input}, {"db_mse", mse}});
  if (o.overlay) {
    std::ostringstream csv;
    csv << "freq_hz,target_db,fit_db\n";
    for (int k = 0; k < target.grid.size(); ++k) {
      csv << format_double(target.grid.hz(k)) << ',' << format_double(target.values_db[k]) << ','
          << format_double(fit.values_db[k]) << '\n';
    }
    write_text_file(run.outputs.file("overlay.csv"), csv.str());
  }
  run.out << "db_mse " << format_double(mse) << '\n';
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOpts {
  std::vector<std::string> inputs;
  std::string synthetic;
  int count = 10;
  int channel = -1;
  int window = 63;
  int poly_order = 3;
  int grid = 512;
  double sample_rate = 44100.0;
};

void run_ingest(const IngestOpts& o, Run& run) {
  if (o.inputs.empty() == o.synthetic.empty()) {
    throw InvalidArgument("ingest needs exactly one of --input or --synthetic");
  }
  const SmoothingConfig smoothing{o.window, o.poly_order};
  smoothing.validate();
  const FrequencyGrid grid = grid_from(o.grid, o.sample_rate);

  struct Item {
    std::string name;
    ImpulseResponse ir;
  };
  std::vector<Item> items;
  if (!o.synthetic.empty()) {
    const auto irs = o.synthetic == "hrtf" ? synthetic_hrtf_set(o.count, run.g.seed, o.sample_rate)
                                           : synthetic_cabinet_set(o.count, run.g.seed, o.sample_rate);
    for (size_t i = 0; i < irs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "%s_%03zu", o.synthetic.c_str(), i);
      items.push_back({name, irs[i]});
      write_wav(run.outputs.file(std::string(name) + ".wav"), std::span(&irs[i], 1),
                WavEncoding::kFloat32);
    }
  } else {
    for (const auto& path : o.inputs) {
      const auto channels = read_wav(path);
      for (const auto& ch : channels) {
        if (o.channel >= 0 && ch.channel_index != o.channel) continue;
        items.push_back({stem_of(path) + "_ch" + std::to_string(ch.channel_index), ch});
      }
      if (o.channel >= static_cast<int>(channels.size())) {
        throw InvalidArgument(path + " has no channel " + std::to_string(o.channel));
      }
    }
  }
  std::vector<MagnitudeResponse> targets(items.size(), MagnitudeResponse{grid, {}});
  parallel_for(static_cast<std::int64_t>(items.size()), run.g.workers(), [&](std::int64_t i) {
    targets[i] = ir_to_target(items[i].ir, grid, smoothing);
  });
  for (size_t i = 0; i < items.size(); ++i) {
    write_response_csv(run.outputs.file(items[i].name + ".csv"), targets[i]);
  }
  run.out << "ingested " << items.size() << " impulse responses\n";
}

// ---------------------------------------------------------------------------
// eval and bench

struct EvalOpts {
  std::vector<std::string> models;
  std::vector<std::string> methods;
  std::string family = "G";
  int order = 16;
  int count = 1000;
  int grid = 512;
  double sample_rate = 44100.0;
  std::string dataset = "random";
  std::vector<std::string> wavs;
  int myw_order = 0;
  int sgd_order = 0;
  std::vector<int> sgd_steps = {100};
  double sgd_lr = 5e-4;
  std::string sgd_optimizer = "plain";
  int timing_repeats = 0;
  int warmup = 10;
  std::string report = "report";
  // bench only
  std::vector<std::string> order_models;  // ORDER=PATH
  std::vector<int> test_orders = {4, 8, 16, 32};
};

EvalDataset eval_dataset(const EvalOpts& o, const Run& run, const FrequencyGrid& grid) {
  const SmoothingConfig smoothing;
  if (o.dataset == "random") {
    SamplerOptions sampler;
    sampler.eq.sample_rate_hz = o.sample_rate;
    return build_eval_set(parse_family(o.family), o.order, o.count, run.g.seed, grid, sampler);
  }
  if (o.dataset == "hrtf") {
    return build_ingested_set("hrtf", synthetic_hrtf_set(o.count, run.g.seed, o.sample_rate), grid,
                              smoothing, run.g.workers());
  }
  if (o.dataset == "cabinet") {
    return build_ingested_set("cabinet", synthetic_cabinet_set(o.count, run.g.seed, o.sample_rate),
                              grid, smoothing, run.g.workers());
  }
  if (o.wavs.empty()) throw InvalidArgument("--dataset wav needs --wav files");
  std::vector<ImpulseResponse> irs;
  for (const auto& p : o.wavs) {
    for (auto& ch : read_wav(p)) irs.push_back(std::move(ch));
  }
  return build_ingested_set("wav", irs, grid, smoothing, run.g.workers());
}

void run_eval(const EvalOpts& o, Run& run, bool bench) {
  const FrequencyGrid grid = grid_from(o.grid, o.sample_rate);
  std::vector<std::string> methods = o.methods;
  if (methods.empty()) methods = {o.models.empty() ? "myw" : "iirnet"};
  if (std::count(methods.begin(), methods.end(), "iirnet") && o.models.empty()) {
    throw InvalidArgument("method iirnet needs --model");
  }
  const int repeats = run.g.deterministic ? 0 : o.timing_repeats;
  if (run.g.deterministic && o.timing_repeats > 0) {
    run.out << "deterministic mode: timing columns omitted\n";
  }

  std::vector<Method> list;
  for (const auto& m : methods) {
    if (m == "iirnet") {
      for (const auto& path : o.models) {
        Method method = iirnet_method(load_model(path));
        if (o.models.size() > 1) method.name += ":" + stem_of(path);
        method.config["model"] = path;
        list.push_back(std::move(method));
      }
    } else if (m == "myw") {
      list.push_back(myw_method({o.myw_order > 0 ? o.myw_order : o.order, 0, 0}));
    } else {
      for (int steps : o.sgd_steps) {
        list.push_back(sgd_method(sgd_config(o.sgd_order > 0 ? o.sgd_order : o.order, steps,
                                             o.sgd_lr, o.sgd_optimizer, "direct", run.g.seed)));
      }
    }
  }
  const EvalDataset dataset = eval_dataset(o, run, grid);

  EvalReport report;
  report.machine = machine_descriptor();
  report.config = {{"seed", run.g.seed},
                   {"dataset", dataset.name},
                   {"count", dataset.targets.size()},
                   {"grid", o.grid},
                   {"sample_rate_hz", o.sample_rate},
                   {"smoothing", {{"window_length", 63}, {"poly_order", 3}}},
                   {"timing_repeats", repeats},
                   {"warmup", o.warmup},
                   {"methods", json::array()}};
  for (const auto& m : list) report.config["methods"].push_back(m.config);
  for (const auto& m : list) {
    report.rows.push_back(evaluate(m, dataset, {run.g.workers(), repeats, o.warmup}).row);
    const auto& r = report.rows.back();
    run.out << r.method << " on " << r.dataset << ": mean_db_mse " << format_double(r.mean_db_mse)
            << " failures " << r.failures;
    if (r.timing) run.out << " mean_ms " << format_double(r.timing->mean_ms);
    run.out << '\n';
  }
  {
    std::ostringstream csv, md;
    write_report_csv(csv, report);
    write_report_markdown(md, report);
    write_text_file(run.outputs.file(o.report + ".csv"), csv.str());
    write_text_file(run.outputs.file(o.report + ".md"), md.str());
  }

  if (bench && !o.order_models.empty()) {
    std::map<int, std::shared_ptr<const Mlp<float>>> models;
    std::vector<int> train_orders;
    for (const auto& spec : o.order_models) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw InvalidArgument("--order-model expects ORDER=PATH");
      int order = 0;
      try {
        order = std::stoi(spec.substr(0, eq));
      } catch (const std::logic_error&) {
        throw InvalidArgument("--order-model expects ORDER=PATH, got " + spec);
      }
      train_orders.push_back(order);
      try {
        models[order] = load_model(spec.substr(eq + 1));
      } catch (const DataError& e) {
        // order_study reports the row as skipped.
        run.out << "notice: " << e.what() << '\n';
      }
    }
    const OrderStudy study = order_study(models, train_orders, o.test_orders,
                                         parse_family(o.family), o.count, run.g.seed, grid,
                                         run.g.workers());
    std::ostringstream md, csv;
    write_order_study_markdown(md, study);
    csv << "train_order,test_order,mean_db_mse\n";
    for (size_t i = 0; i < study.train_orders.size(); ++i) {
      for (size_t j = 0; j < study.test_orders.size(); ++j) {
        csv << study.train_orders[i] << ',' << study.test_orders[j] << ','
            << format_double(study.mean_db_mse[i][j]) << '\n';
      }
    }
    write_text_file(run.outputs.file("order_study.md"), md.str());
    write_text_file(run.outputs.file("order_study.csv"), csv.str());
    run.out << md.str();
  }
}

// ---------------------------------------------------------------------------
// plot

struct PlotOpts {
  std::vector<std::string> inputs;
  std::string title;
};

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path, std::string& header) {
  std::istringstream in(read_text_file(path));
  if (!std::getline(in, header)) throw DataError(path + ": empty CSV");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double cell(const std::vector<std::string>& row, size_t i, const std::string& path) {
  try {
    if (i >= row.size()) throw std::out_of_range("");
    size_t used = 0;
    const double v = std::stod(row[i], &used);
    if (used != row[i].size()) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw DataError(path + ": bad numeric cell");
  }
}

void run_plot(const PlotOpts& o, Run& run) {
  if (o.inputs.empty()) throw InvalidArgument("plot needs --input");
  for (const auto& path : o.inputs) {
    std::string header;
    const auto rows = read_csv_rows(path, header);
    const std::string title = o.title.empty() ? stem_of(path) : o.title;
    std::string svg;
    if (header == "freq_hz,mag_db" || header == "freq_hz,target_db,fit_db") {
      const bool overlay = header != "freq_hz,mag_db";
      std::vector<Series> s(overlay ? 2 : 1);
      s[0].name = overlay ? "target" : "response";
      if (overlay) s[1].name = "fit";
      for (const auto& r : rows) {
        for (size_t k = 0; k < s.size(); ++k) {
          s[k].x.push_back(cell(r, 0, path));
          s[k].y.push_back(cell(r, k + 1, path));
        }
      }
      svg = line_chart_svg(title, s);
    } else if (header == "index,family,kind,re,im") {
      std::vector<Series> s(2);
      s[0].name = "zeros";
      s[1].name = "poles";
      for (const auto& r : rows) {
        if (r.size() < 5) throw DataError(path + ": short row");
        Series& t = r[2] == "pole" ? s[1] : s[0];
        t.x.push_back(cell(r, 3, path));
        t.y.push_back(cell(r, 4, path));
      }
      if (s[1].x.empty()) s.pop_back();
      svg = scatter_svg(title, s);
    } else {
      throw DataError(path + ": unrecognized CSV header '" + header + "'");
    }
    write_text_file(run.outputs.file(stem_of(path) + ".svg"), svg);
  }
  run.out << "plotted " << o.inputs.size() << " file(s)\n";
}

// ---------------------------------------------------------------------------

int fail(std::ostream& err, const char* kind, const std::string& what, int code) {
  err << "error: " << kind << ": " << what << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Fit IIR biquad cascades to magnitude responses.", "iirfit");
  app.set_config("--config", "", "TOML config file; flags given on the command line override it");
  app.fallthrough();
  app.require_subcommand(1);
  Echo echo;

  Globals g;
  echo.option(&app, "seed", g.seed, "Master seed");
  echo.option(&app, "threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  echo.flag(&app, "deterministic", g.deterministic,
            "Single-threaded, fixed reduction order, no timing");
  echo.option(&app, "output-dir", g.output_dir, "Directory for all outputs");

  const auto methods = CLI::IsMember({"iirnet", "myw", "sgd"});
  const auto families = CLI::IsMember({"A", "B", "C", "D", "E", "F", "G"}, CLI::ignore_case);

  GenerateOpts gen;
  auto* generate = app.add_subcommand("generate", "Sample random filters from a family");
  echo.option(generate, "family", gen.family, "Family A..G")->transform(families);
  echo.option(generate, "order", gen.order, "Filter order");
  echo.option(generate, "count", gen.count, "Number of filters");
  echo.option(generate, "grid", gen.grid, "Frequency grid size F");
  echo.option(generate, "sample-rate", gen.sample_rate, "Sample rate in Hz");
  echo.flag(generate, "roots", gen.roots, "Write roots.csv (zeros and poles)");
  echo.flag(generate, "responses", gen.responses, "Write one response CSV per filter");

  TrainOpts tr;
  auto* train_cmd = app.add_subcommand("train", "Train the neural estimator on streamed filters");
  echo.option(train_cmd, "family", tr.family, "Training family A..G")->transform(families);
  echo.option(train_cmd, "order", tr.order, "Estimation order N");
  echo.option(train_cmd, "hidden", tr.hidden, "Hidden width D");
  echo.option(train_cmd, "grid", tr.grid, "Frequency grid size F (network input width)");
  echo.option(train_cmd, "sample-rate", tr.sample_rate, "Sample rate in Hz");
  echo.option(train_cmd, "batch-size", tr.batch_size, "Filters per step");
  echo.option(train_cmd, "filters-per-epoch", tr.filters_per_epoch, "Filters per epoch");
  echo.option(train_cmd, "epochs", tr.epochs, "Epochs");
  echo.option(train_cmd, "lr", tr.lr, "Initial learning rate");
  echo.option(train_cmd, "lr-decay", tr.lr_decay, "Decay points as fractions of training");
  echo.option(train_cmd, "lr-decay-factor", tr.lr_decay_factor, "Factor applied at each decay point");
  echo.option(train_cmd, "grad-clip", tr.grad_clip, "Global gradient norm clip");
  echo.option(train_cmd, "weight-decay", tr.weight_decay, "AdamW weight decay");
  echo.option(train_cmd, "resume", tr.resume, "Checkpoint to resume from");
  echo.option(train_cmd, "stop-step", tr.stop_step, "Stop before this step (-1: run to the end)");
  echo.option(train_cmd, "model", tr.model, "Checkpoint file name");
  echo.option(train_cmd, "log", tr.log, "Training log file name");

  FitOpts fit;
  auto* fit_cmd = app.add_subcommand("fit", "Design a filter for one target response");
  echo.option(fit_cmd, "method", fit.method, "iirnet, myw or sgd")->transform(methods);
  echo.option(fit_cmd, "order", fit.order, "Filter order (iirnet uses the model's)");
  echo.option(fit_cmd, "input", fit.input, "Target response CSV")->required();
  echo.option(fit_cmd, "model", fit.model, "Checkpoint for --method iirnet");
  echo.option(fit_cmd, "steps", fit.steps, "SGD steps");
  echo.option(fit_cmd, "lr", fit.lr, "SGD learning rate");
  echo.option(fit_cmd, "optimizer", fit.optimizer, "SGD optimizer")->check(CLI::IsMember({"plain", "adam"}));
  echo.option(fit_cmd, "gain-mode", fit.gain_mode, "SGD gain mode")->check(CLI::IsMember({"direct", "sigmoid100"}));
  echo.flag(fit_cmd, "overlay", fit.overlay, "Write overlay.csv (target vs fit)");
  echo.option(fit_cmd, "output", fit.output, "Filter JSON file name");

  IngestOpts ing;
  auto* ingest_cmd = app.add_subcommand("ingest", "Turn impulse responses into smoothed targets");
  echo.option(ingest_cmd, "input", ing.inputs, "WAV files");
  echo.option(ingest_cmd, "synthetic", ing.synthetic, "Use a built-in set instead: hrtf or cabinet")
      ->check(CLI::IsMember({"hrtf", "cabinet"}));
  echo.option(ingest_cmd, "count", ing.count, "Synthetic set size");
  echo.option(ingest_cmd, "channel", ing.channel, "Only this channel (-1: all)");
  echo.option(ingest_cmd, "window", ing.window, "Savitzky-Golay window length");
  echo.option(ingest_cmd, "poly-order", ing.poly_order, "Savitzky-Golay polynomial order");
  echo.option(ingest_cmd, "grid", ing.grid, "Frequency grid size F");
  echo.option(ingest_cmd, "sample-rate", ing.sample_rate, "Target sample rate in Hz");

  EvalOpts ev;
  EvalOpts bn;
  bn.timing_repeats = 1000;
  auto* eval_cmd = app.add_subcommand("eval", "Accuracy report over a dataset");
  auto* bench_cmd = app.add_subcommand("bench", "Accuracy and timing report, optional order study");
  for (auto [cmd, o] : {std::pair{eval_cmd, &ev}, std::pair{bench_cmd, &bn}}) {
    echo.option(cmd, "model", o->models, "Checkpoint(s) for iirnet");
    echo.option(cmd, "methods", o->methods, "Any of iirnet, myw, sgd")->check(methods);
    echo.option(cmd, "family", o->family, "Family A..G")->transform(families);
    echo.option(cmd, "order", o->order, "Target order");
    echo.option(cmd, "count", o->count, "Targets in the dataset");
    echo.option(cmd, "grid", o->grid, "Frequency grid size F");
    echo.option(cmd, "sample-rate", o->sample_rate, "Sample rate in Hz");
    echo.option(cmd, "dataset", o->dataset, "random, hrtf, cabinet or wav")
        ->check(CLI::IsMember({"random", "hrtf", "cabinet", "wav"}));
    echo.option(cmd, "wav", o->wavs, "WAV files for --dataset wav");
    echo.option(cmd, "myw-order", o->myw_order, "MYW order (0: --order)");
    echo.option(cmd, "sgd-order", o->sgd_order, "SGD order (0: --order)");
    echo.option(cmd, "sgd-steps", o->sgd_steps, "SGD budgets, one row each");
    echo.option(cmd, "sgd-lr", o->sgd_lr, "SGD learning rate");
    echo.option(cmd, "sgd-optimizer", o->sgd_optimizer, "plain or adam")
        ->check(CLI::IsMember({"plain", "adam"}));
    echo.option(cmd, "timing-repeats", o->timing_repeats, "Timed design calls per method (0: none)");
    echo.option(cmd, "warmup", o->warmup, "Untimed warm-up calls");
    echo.option(cmd, "report", o->report, "Report base name (.csv and .md)");
  }
  echo.option(bench_cmd, "order-model", bn.order_models, "ORDER=PATH checkpoints for the order study");
  echo.option(bench_cmd, "test-orders", bn.test_orders, "Target orders for the order study");

  PlotOpts pl;
  auto* plot_cmd = app.add_subcommand("plot", "Render response, overlay or root CSVs as SVG");
  echo.option(plot_cmd, "input", pl.inputs, "CSV files")->required();
  echo.option(plot_cmd, "title", pl.title, "Chart title (default: file stem)");

  for (auto* sub : app.get_subcommands({})) sub->configurable();

  std::vector<const char*> args;
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Outputs outputs(g.output_dir);
  Run run{g, outputs, out};
  try {
    write_text_file(outputs.file(sub->get_name() + ".config.toml"), echo.render(&app, sub));
    const std::string name = sub->get_name();
    if (name == "generate") run_generate(gen, run);
    else if (name == "train") run_train(tr, run);
    else if (name == "fit") run_fit(fit, run);
    else if (name == "ingest") run_ingest(ing, run);
    else if (name == "eval") run_eval(ev, run, false);
    else if (name == "bench") run_eval(bn, run, true);
    else run_plot(pl, run);
    return kExitOk;
  } catch (const InvalidArgument& e) {
    outputs.discard();
    return fail(err, "usage", e.what(), kExitUsage);
  } catch (const DataError& e) {
    outputs.discard();
    return fail(err, "data", e.what(), kExitData);
  } catch (const NumericError& e) {
    outputs.discard();
    return fail(err, "numeric", e.what(), kExitNumeric);
  } catch (const fs::filesystem_error& e) {
    outputs.discard();
    return fail(err, "data", e.what(), kExitData);
  } catch (const json::exception& e) {
    outputs.discard();
    return fail(err, "data", e.what(), kExitData);
  } catch (const std::exception& e) {
    outputs.discard();
    return fail(err, "internal", e.what(), 1);
  }
}

}  // namespace iirfit::cli
