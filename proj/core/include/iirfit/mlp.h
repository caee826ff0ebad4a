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

// The neural estimator: a two-hidden-layer MLP from a normalized magnitude
// response to cascade parameters, plus its AdamW training loop.
//
// Network: x (F) -> [Linear(D) -> LayerNorm -> LeakyReLU(0.2)] x 2
//                -> Linear(2N + 1), no output activation.
// Output layout matches CascadeParams: [raw_gain, poles..., zeros...]; the
// gain head is read through 100 * sigmoid.
//
// All parameters live in one flat vector in this order:
//   W1 (D x F, column-major), b1, gamma1, beta1,
//   W2 (D x D),              b2, gamma2, beta2,
//   W3 (O x D),              b3.

#ifndef IIRFIT_MLP_H_
#define IIRFIT_MLP_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "iirfit/dsp.h"
#include "iirfit/grad.h"
#include "iirfit/randfilt.h"

namespace iirfit {

inline constexpr double kLeakySlope = 0.2;
// Added to the variance inside LayerNorm. Kept tiny so normalized
// activations have unit variance to ~1e-6 whenever the variance is >> 1e-10.
inline constexpr double kLayerNormEpsilon = 1e-10;

struct MlpShape {
  int input_dim = 512;   // F
  int hidden_dim = 256;  // D
  int order = 4;         // N, even

  int num_sections() const { return order / 2; }
  int output_dim() const { return 2 * order + 1; }
  bool operator==(const MlpShape&) const = default;
};

struct ParamCounts {
  std::int64_t linear = 0;         // weights and biases
  std::int64_t normalization = 0;  // LayerNorm gains and offsets
  std::int64_t total() const { return linear + normalization; }
};

template <typename Scalar>
class Mlp {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixMap = Eigen::Map<Matrix>;
  using ConstMatrixMap = Eigen::Map<const Matrix>;
  using VectorMap = Eigen::Map<Vector>;
  using ConstVectorMap = Eigen::Map<const Vector>;

  // All parameters zero except the LayerNorm gains, which are one.
  explicit Mlp(const MlpShape& shape);

  // Weights uniform in +/- 1/sqrt(fan_in), zero biases, unit norm gains.
  static Mlp Initialized(const MlpShape& shape, std::uint64_t seed);

  const MlpShape& shape() const { return shape_; }
  static ParamCounts count_parameters(const MlpShape& shape);
  std::int64_t num_parameters() const { return static_cast<std::int64_t>(params_.size()); }

  std::span<Scalar> params() { return params_; }
  std::span<const Scalar> params() const { return params_; }

  // Views into the flat parameter vector. Layer index l in {0, 1, 2}.
  MatrixMap weight(int l);
  ConstMatrixMap weight(int l) const;
  VectorMap bias(int l);
  ConstVectorMap bias(int l) const;
  VectorMap norm_gain(int l);  // l in {0, 1}
  ConstVectorMap norm_gain(int l) const;
  VectorMap norm_offset(int l);
  ConstVectorMap norm_offset(int l) const;

  // Intermediate values kept for backward().
  struct Cache {
    Matrix input;                  // F x B
    Matrix xhat[2];                // normalized pre-activations, D x B
    Vector inv_sigma[2];           // per column, length B
    Matrix pre_act[2];             // gamma * xhat + beta, D x B
    Matrix act[2];                 // LeakyReLU outputs, D x B
  };

  // Columns of `inputs` are examples. Throws InvalidArgument on a row count
  // other than F.
  Matrix forward(const Matrix& inputs, Cache* cache = nullptr) const;
  std::vector<double> forward(std::span<const double> x) const;

  // Gradient of sum_b <d_out[:, b], out[:, b]> with respect to every
  // parameter, in the flat layout.
  std::vector<Scalar> backward(const Cache& cache, const Matrix& d_out) const;

  template <typename Other>
  Mlp<Other> cast() const;

 private:
  template <typename>
  friend class Mlp;

  struct Offsets {
    std::int64_t weight[3], bias[3], gain[2], offset[2];
  };
  static Offsets layout(const MlpShape& shape);
  int rows(int l) const;
  int cols(int l) const;

  MlpShape shape_;
  Offsets offsets_;
  std::vector<Scalar> params_;
};

extern template class Mlp<float>;
extern template class Mlp<double>;

// Network input and loss target for one training example. In training the
// input is normalize_for_network(target); tests may decouple the two.
struct TrainingExample {
  std::vector<double> input;
  MagnitudeResponse target;
};

TrainingExample make_example(const MagnitudeResponse& target);

struct BatchResult {
  double loss = 0.0;                    // mean dB MSE over the batch
  std::vector<double> example_losses;
  std::vector<double> grad;             // d loss / d params (flat layout)
};

// Forward, dB-MSE loss through the cascade (sigmoid100 gain) and backward.
// Per-example losses are reduced in index order, so the result does not
// depend on `threads`.
template <typename Scalar>
BatchResult batch_loss_and_grad(const Mlp<Scalar>& model,
                                const LossEvaluator& evaluator,
                                std::span<const TrainingExample> batch,
                                int threads = 1);

template <typename Scalar>
double batch_loss(const Mlp<Scalar>& model, const LossEvaluator& evaluator,
                  std::span<const TrainingExample> batch);

// Network output interpreted as raw cascade parameters.
CascadeParams output_to_params(std::span<const double> output);

// normalize -> forward -> projection -> 100 * sigmoid gain. Throws
// GridMismatch if the target grid length differs from F.
template <typename Scalar>
FilterCascade estimate(const Mlp<Scalar>& model, const MagnitudeResponse& target);

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 1e-2;
};

struct AdamWState {
  std::vector<float> m;
  std::vector<float> v;
  std::int64_t step = 0;  // completed updates
};

// Decoupled weight decay, then the bias-corrected adaptive-moment step.
void adamw_update(std::span<float> params, std::span<const double> grad,
                  AdamWState& state, double lr, const AdamWConfig& config);

// Scales `grad` in place so its global L2 norm is at most max_norm;
// returns the norm before clipping.
double clip_grad_norm(std::span<double> grad, double max_norm);

struct LrSchedule {
  double initial = 1e-5;
  std::vector<double> decay_points = {0.8, 0.95};
  double decay_factor = 0.1;
  std::int64_t total_steps = 1;

  // Decay applies from the first step at or beyond each fraction.
  double at(std::int64_t step) const;
};

struct TrainConfig {
  MlpShape shape;
  Family family = Family::kG;
  std::int64_t batch_size = 128;
  std::int64_t filters_per_epoch = 20000;
  std::int64_t epochs = 10;
  double lr = 1e-5;
  std::vector<double> lr_decay_points = {0.8, 0.95};
  double lr_decay_factor = 0.1;
  double grad_clip_norm = 0.9;
  AdamWConfig adamw;
  double sample_rate_hz = 44100.0;
  std::uint64_t seed = 0;
  SamplerOptions sampler;
  int threads = 1;

  std::int64_t total_filters() const { return epochs * filters_per_epoch; }
  std::int64_t total_steps() const;
  LrSchedule schedule() const;
  void validate() const;  // throws InvalidArgument
};

struct TrainLogRow {
  std::int64_t epoch = 0;
  std::int64_t step = 0;  // completed steps at the end of the epoch
  double lr = 0.0;        // learning rate of the epoch's last step
  double mean_db_mse = 0.0;
};

std::string train_log_header();
std::string format_train_log_row(const TrainLogRow& row);

struct TrainState {
  Mlp<float> model;
  AdamWState optimizer;
};

TrainState initial_train_state(const TrainConfig& config);

// Runs the streamed-data training loop from state.optimizer.step up to
// `stop_step` (or to the end when stop_step < 0). Filters are drawn from
// Stream::kTrain with draw index step * batch_size + b. `on_epoch` is called
// for every completed epoch. Throws NumericError on a non-finite batch loss.
void train(const TrainConfig& config, TrainState& state,
           std::int64_t stop_step = -1,
           const std::function<void(const TrainLogRow&)>& on_epoch = {});

}  // namespace iirfit

#endif  // IIRFIT_MLP_H_
