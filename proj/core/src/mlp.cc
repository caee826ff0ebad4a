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

#include "iirfit/mlp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include "iirfit/errors.h"
#include "iirfit/parallel.h"

namespace iirfit {

namespace {

void check_shape(const MlpShape& s) {
  if (s.input_dim < 1 || s.hidden_dim < 1) {
    throw InvalidArgument("network dimensions must be positive");
  }
  if (s.order < 2 || s.order % 2 != 0) {
    throw InvalidArgument("network filter order must be even and >= 2");
  }
}

}  // namespace

template <typename Scalar>
typename Mlp<Scalar>::Offsets Mlp<Scalar>::layout(const MlpShape& s) {
  const std::int64_t f = s.input_dim, d = s.hidden_dim, o = s.output_dim();
  Offsets off{};
  std::int64_t at = 0;
  const std::int64_t fan_in[3] = {f, d, d};
  const std::int64_t width[3] = {d, d, o};
  for (int l = 0; l < 3; ++l) {
    off.weight[l] = at;
    at += width[l] * fan_in[l];
    off.bias[l] = at;
    at += width[l];
    if (l < 2) {
      off.gain[l] = at;
      at += d;
      off.offset[l] = at;
      at += d;
    }
  }
  return off;
}

template <typename Scalar>
ParamCounts Mlp<Scalar>::count_parameters(const MlpShape& s) {
  const std::int64_t f = s.input_dim, d = s.hidden_dim, o = s.output_dim();
  ParamCounts c;
  c.linear = d * f + d + d * d + d + o * d + o;
  c.normalization = 4 * d;
  return c;
}

template <typename Scalar>
Mlp<Scalar>::Mlp(const MlpShape& shape) : shape_(shape) {
  check_shape(shape);
  offsets_ = layout(shape);
  params_.assign(count_parameters(shape).total(), Scalar(0));
  norm_gain(0).setOnes();
  norm_gain(1).setOnes();
}

template <typename Scalar>
Mlp<Scalar> Mlp<Scalar>::Initialized(const MlpShape& shape, std::uint64_t seed) {
  Mlp model(shape);
  Rng rng = make_rng(seed, Stream::kModelInit, 0);
  for (int l = 0; l < 3; ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(model.cols(l)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    auto w = model.weight(l);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = static_cast<Scalar>(dist(rng));
  }
  return model;
}

template <typename Scalar>
int Mlp<Scalar>::rows(int l) const {
  return l < 2 ? shape_.hidden_dim : shape_.output_dim();
}

template <typename Scalar>
int Mlp<Scalar>::cols(int l) const {
  return l == 0 ? shape_.input_dim : shape_.hidden_dim;
}

template <typename Scalar>
typename Mlp<Scalar>::MatrixMap Mlp<Scalar>::weight(int l) {
  return MatrixMap(params_.data() + offsets_.weight[l], rows(l), cols(l));
}
template <typename Scalar>
typename Mlp<Scalar>::ConstMatrixMap Mlp<Scalar>::weight(int l) const {
  return ConstMatrixMap(params_.data() + offsets_.weight[l], rows(l), cols(l));
}
template <typename Scalar>
typename Mlp<Scalar>::VectorMap Mlp<Scalar>::bias(int l) {
  return VectorMap(params_.data() + offsets_.bias[l], rows(l));
}
template <typename Scalar>
typename Mlp<Scalar>::ConstVectorMap Mlp<Scalar>::bias(int l) const {
  return ConstVectorMap(params_.data() + offsets_.bias[l], rows(l));
}
template <typename Scalar>
typename Mlp<Scalar>::VectorMap Mlp<Scalar>::norm_gain(int l) {
  return VectorMap(params_.data() + offsets_.gain[l], shape_.hidden_dim);
}
template <typename Scalar>
typename Mlp<Scalar>::ConstVectorMap Mlp<Scalar>::norm_gain(int l) const {
  return ConstVectorMap(params_.data() + offsets_.gain[l], shape_.hidden_dim);
}
template <typename Scalar>
typename Mlp<Scalar>::VectorMap Mlp<Scalar>::norm_offset(int l) {
  return VectorMap(params_.data() + offsets_.offset[l], shape_.hidden_dim);
}
template <typename Scalar>
typename Mlp<Scalar>::ConstVectorMap Mlp<Scalar>::norm_offset(int l) const {
  return ConstVectorMap(params_.data() + offsets_.offset[l], shape_.hidden_dim);
}

template <typename Scalar>
typename Mlp<Scalar>::Matrix Mlp<Scalar>::forward(const Matrix& inputs,
                                                   Cache* cache) const {
  if (inputs.rows() != shape_.input_dim) {
    throw InvalidArgument("network input has " + std::to_string(inputs.rows()) +
                          " rows, expected " + std::to_string(shape_.input_dim));
  }
  const Eigen::Index batch = inputs.cols();
  const Scalar slope = static_cast<Scalar>(kLeakySlope);
  const Scalar eps = static_cast<Scalar>(kLayerNormEpsilon);
  Cache local;
  Cache& c = cache ? *cache : local;
  c.input = inputs;
  const Matrix* a = &c.input;
  for (int l = 0; l < 2; ++l) {
    Matrix z = weight(l) * (*a);
    z.colwise() += bias(l);
    c.inv_sigma[l].resize(batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const Scalar mean = z.col(b).mean();
      z.col(b).array() -= mean;
      const Scalar var = z.col(b).squaredNorm() / static_cast<Scalar>(z.rows());
      const Scalar inv = Scalar(1) / std::sqrt(var + eps);
      z.col(b) *= inv;
      c.inv_sigma[l](b) = inv;
    }
    c.xhat[l] = std::move(z);
    c.pre_act[l] = norm_gain(l).asDiagonal() * c.xhat[l];
    c.pre_act[l].colwise() += norm_offset(l);
    c.act[l] = c.pre_act[l].unaryExpr(
        [slope](Scalar v) { return v > Scalar(0) ? v : slope * v; });
    a = &c.act[l];
  }
  Matrix out = weight(2) * (*a);
  out.colwise() += bias(2);
  return out;
}

template <typename Scalar>
std::vector<double> Mlp<Scalar>::forward(std::span<const double> x) const {
  Matrix in(static_cast<Eigen::Index>(x.size()), 1);
  for (size_t i = 0; i < x.size(); ++i) in(i, 0) = static_cast<Scalar>(x[i]);
  const Matrix out = forward(in);
  std::vector<double> y(out.rows());
  for (Eigen::Index i = 0; i < out.rows(); ++i) y[i] = static_cast<double>(out(i, 0));
  return y;
}

template <typename Scalar>
std::vector<Scalar> Mlp<Scalar>::backward(const Cache& c,
                                          const Matrix& d_out) const {
  std::vector<Scalar> grad(params_.size(), Scalar(0));
  auto gw = [&](int l) { return MatrixMap(grad.data() + offsets_.weight[l], rows(l), cols(l)); };
  auto gb = [&](int l) { return VectorMap(grad.data() + offsets_.bias[l], rows(l)); };
  const Scalar slope = static_cast<Scalar>(kLeakySlope);
  const Scalar inv_d = Scalar(1) / static_cast<Scalar>(shape_.hidden_dim);

  gw(2).noalias() = d_out * c.act[1].transpose();
  gb(2) = d_out.rowwise().sum();
  Matrix d_act = weight(2).transpose() * d_out;
  for (int l = 1; l >= 0; --l) {
    // LeakyReLU
    const Matrix d_pre = d_act.binaryExpr(
        c.pre_act[l], [slope](Scalar g, Scalar v) { return v > Scalar(0) ? g : slope * g; });
    VectorMap(grad.data() + offsets_.gain[l], shape_.hidden_dim) =
        d_pre.cwiseProduct(c.xhat[l]).rowwise().sum();
    VectorMap(grad.data() + offsets_.offset[l], shape_.hidden_dim) = d_pre.rowwise().sum();
    // LayerNorm
    Matrix d_z = norm_gain(l).asDiagonal() * d_pre;
    for (Eigen::Index b = 0; b < d_z.cols(); ++b) {
      const Scalar mean_g = d_z.col(b).sum() * inv_d;
      const Scalar mean_gx = d_z.col(b).dot(c.xhat[l].col(b)) * inv_d;
      d_z.col(b) = c.inv_sigma[l](b) *
                   (d_z.col(b).array() - mean_g - c.xhat[l].col(b).array() * mean_gx).matrix();
    }
    const Matrix& a_in = l == 0 ? c.input : c.act[0];
    gw(l).noalias() = d_z * a_in.transpose();
    gb(l) = d_z.rowwise().sum();
    if (l == 1) d_act = weight(1).transpose() * d_z;
  }
  return grad;
}

template <typename Scalar>
template <typename Other>
Mlp<Other> Mlp<Scalar>::cast() const {
  Mlp<Other> out(shape_);
  for (size_t i = 0; i < params_.size(); ++i) out.params_[i] = static_cast<Other>(params_[i]);
  return out;
}

template class Mlp<float>;
template class Mlp<double>;
template Mlp<double> Mlp<float>::cast<double>() const;
template Mlp<float> Mlp<double>::cast<float>() const;
template Mlp<float> Mlp<float>::cast<float>() const;
template Mlp<double> Mlp<double>::cast<double>() const;

TrainingExample make_example(const MagnitudeResponse& target) {
  return {normalize_for_network(target), target};
}

CascadeParams output_to_params(std::span<const double> output) {
  return CascadeParams(std::vector<double>(output.begin(), output.end()));
}

template <typename Scalar>
BatchResult batch_loss_and_grad(const Mlp<Scalar>& model,
                                const LossEvaluator& evaluator,
                                std::span<const TrainingExample> batch,
                                int threads) {
  using Matrix = typename Mlp<Scalar>::Matrix;
  if (batch.empty()) throw InvalidArgument("batch must not be empty");
  const int f = model.shape().input_dim;
  const int o = model.shape().output_dim();
  const Eigen::Index n = static_cast<Eigen::Index>(batch.size());
  Matrix x(f, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    if (static_cast<int>(batch[b].input.size()) != f) {
      throw InvalidArgument("example input length does not match the network");
    }
    for (int i = 0; i < f; ++i) x(i, b) = static_cast<Scalar>(batch[b].input[i]);
  }
  typename Mlp<Scalar>::Cache cache;
  const Matrix out = model.forward(x, &cache);

  BatchResult result;
  result.example_losses.assign(n, 0.0);
  Matrix d_out(o, n);
  parallel_for(n, threads, [&](std::int64_t b) {
    std::vector<double> raw(o);
    for (int i = 0; i < o; ++i) raw[i] = static_cast<double>(out(i, b));
    const LossAndGrad lg =
        evaluator.loss_and_grad(output_to_params(raw), batch[b].target, GainMode::kSigmoid100);
    result.example_losses[b] = lg.loss;
    for (int i = 0; i < o; ++i) d_out(i, b) = static_cast<Scalar>(lg.grad[i] / n);
  });
  double sum = 0.0;
  for (double l : result.example_losses) sum += l;
  result.loss = sum / n;
  const auto g = model.backward(cache, d_out);
  result.grad.assign(g.begin(), g.end());
  return result;
}

template <typename Scalar>
double batch_loss(const Mlp<Scalar>& model, const LossEvaluator& evaluator,
                  std::span<const TrainingExample> batch) {
  double sum = 0.0;
  for (const TrainingExample& ex : batch) {
    const auto raw = model.forward(ex.input);
    sum += evaluator.loss(output_to_params(raw), ex.target, GainMode::kSigmoid100);
  }
  return sum / static_cast<double>(batch.size());
}

template <typename Scalar>
FilterCascade estimate(const Mlp<Scalar>& model, const MagnitudeResponse& target) {
  if (target.grid.size() != model.shape().input_dim ||
      static_cast<int>(target.values_db.size()) != model.shape().input_dim) {
    throw GridMismatch("target has " + std::to_string(target.values_db.size()) +
                       " points, model expects " + std::to_string(model.shape().input_dim));
  }
  const auto raw = model.forward(normalize_for_network(target));
  return params_to_cascade(output_to_params(raw), GainMode::kSigmoid100);
}

template BatchResult batch_loss_and_grad(const Mlp<float>&, const LossEvaluator&,
                                         std::span<const TrainingExample>, int);
template BatchResult batch_loss_and_grad(const Mlp<double>&, const LossEvaluator&,
                                         std::span<const TrainingExample>, int);
template double batch_loss(const Mlp<float>&, const LossEvaluator&,
                           std::span<const TrainingExample>);
template double batch_loss(const Mlp<double>&, const LossEvaluator&,
                           std::span<const TrainingExample>);
template FilterCascade estimate(const Mlp<float>&, const MagnitudeResponse&);
template FilterCascade estimate(const Mlp<double>&, const MagnitudeResponse&);

void adamw_update(std::span<float> params, std::span<const double> grad,
                  AdamWState& state, double lr, const AdamWConfig& config) {
  if (params.size() != grad.size()) {
    throw InvalidArgument("gradient length does not match the parameters");
  }
  if (state.m.size() != params.size()) state.m.assign(params.size(), 0.0f);
  if (state.v.size() != params.size()) state.v.assign(params.size(), 0.0f);
  const std::int64_t t = ++state.step;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
  const double sqrt_bc2 = std::sqrt(bc2);
  for (size_t i = 0; i < params.size(); ++i) {
    double p = params[i];
    p -= lr * config.weight_decay * p;
    const double g = grad[i];
    const double m = config.beta1 * state.m[i] + (1.0 - config.beta1) * g;
    const double v = config.beta2 * state.v[i] + (1.0 - config.beta2) * g * g;
    p -= (lr / bc1) * m / (std::sqrt(v) / sqrt_bc2 + config.epsilon);
    state.m[i] = static_cast<float>(m);
    state.v[i] = static_cast<float>(v);
    params[i] = static_cast<float>(p);
  }
}

double clip_grad_norm(std::span<double> grad, double max_norm) {
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& g : grad) g *= scale;
  }
  return norm;
}

double LrSchedule::at(std::int64_t step) const {
  double lr = initial;
  for (double p : decay_points) {
    const auto boundary = static_cast<std::int64_t>(std::ceil(p * total_steps - 1e-9));
    if (step >= boundary) lr *= decay_factor;
  }
  return lr;
}

std::int64_t TrainConfig::total_steps() const {
  return (total_filters() + batch_size - 1) / batch_size;
}

LrSchedule TrainConfig::schedule() const {
  return {lr, lr_decay_points, lr_decay_factor, total_steps()};
}

void TrainConfig::validate() const {
  check_shape(shape);
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (filters_per_epoch < 1) throw InvalidArgument("filters_per_epoch must be >= 1");
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (!(lr > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (!(lr_decay_factor > 0.0 && lr_decay_factor <= 1.0)) {
    throw InvalidArgument("lr decay factor must be in (0, 1]");
  }
  double prev = 0.0;
  for (double p : lr_decay_points) {
    if (!(p > prev && p < 1.0)) {
      throw InvalidArgument("lr decay points must be ascending in (0, 1)");
    }
    prev = p;
  }
  if (!(grad_clip_norm > 0.0)) throw InvalidArgument("grad_clip_norm must be positive");
  if (!(sample_rate_hz > 0.0)) throw InvalidArgument("sample rate must be positive");
  if (threads < 1) throw InvalidArgument("threads must be >= 1");
  const int min_order = (family == Family::kF || family == Family::kG) ? 4 : 2;
  if (shape.order < min_order) {
    throw InvalidArgument("family " + family_name(family) + " needs order >= " +
                          std::to_string(min_order));
  }
}

std::string train_log_header() { return "epoch,step,lr,mean_db_mse"; }

std::string format_train_log_row(const TrainLogRow& row) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%lld,%lld,%.6g,%.9g", static_cast<long long>(row.epoch),
                static_cast<long long>(row.step), row.lr, row.mean_db_mse);
  return buf;
}

TrainState initial_train_state(const TrainConfig& config) {
  config.validate();
  TrainState state{Mlp<float>::Initialized(config.shape, config.seed), {}};
  state.optimizer.m.assign(state.model.params().size(), 0.0f);
  state.optimizer.v.assign(state.model.params().size(), 0.0f);
  return state;
}

void train(const TrainConfig& config, TrainState& state, std::int64_t stop_step,
           const std::function<void(const TrainLogRow&)>& on_epoch) {
  config.validate();
  if (!(state.model.shape() == config.shape)) {
    throw InvalidArgument("model shape does not match the training config");
  }
  const FrequencyGrid grid = make_grid(config.shape.input_dim, config.sample_rate_hz);
  const LossEvaluator evaluator(grid);
  const LrSchedule schedule = config.schedule();
  const std::int64_t total = config.total_steps();
  const std::int64_t end = stop_step < 0 ? total : std::min(stop_step, total);
  const std::int64_t batch = config.batch_size;
  const RandomFilterSpec spec{config.family, config.shape.order, config.seed};
  auto epoch_of = [&](std::int64_t step) { return step * batch / config.filters_per_epoch; };

  std::vector<TrainingExample> examples(batch, TrainingExample{{}, {grid, {}}});
  double epoch_sum = 0.0;
  std::int64_t epoch_steps = 0;
  for (std::int64_t s = state.optimizer.step; s < end; ++s) {
    parallel_for(batch, config.threads, [&](std::int64_t b) {
      const TargetDraw d = draw_target(spec, Stream::kTrain,
                                       static_cast<std::uint64_t>(s * batch + b), grid,
                                       config.sampler);
      examples[b] = make_example(d.response);
    });
    BatchResult r;
    try {
      r = batch_loss_and_grad(state.model, evaluator, examples, config.threads);
      if (!std::isfinite(r.loss)) throw NumericError("batch loss is not finite");
    } catch (const NumericError& e) {
      std::ostringstream msg;
      msg << "non-finite training loss at step " << s << " (seed " << config.seed
          << ", train draws " << s * batch << ".." << s * batch + batch - 1
          << "): " << e.what();
      throw NumericError(msg.str());
    }
    clip_grad_norm(r.grad, config.grad_clip_norm);
    const double lr = schedule.at(s);
    adamw_update(state.model.params(), r.grad, state.optimizer, lr, config.adamw);

    epoch_sum += r.loss;
    ++epoch_steps;
    const bool last = s + 1 == total;
    if (last || epoch_of(s + 1) != epoch_of(s)) {
      if (on_epoch) on_epoch({epoch_of(s) + 1, s + 1, lr, epoch_sum / epoch_steps});
      epoch_sum = 0.0;
      epoch_steps = 0;
    }
  }
}

}  // namespace iirfit
