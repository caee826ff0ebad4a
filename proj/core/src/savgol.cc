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

#include <string>

#include <Eigen/Dense>

#include "iirfit/errors.h"
#include "iirfit/ingest.h"

namespace iirfit {

void SmoothingConfig::validate() const {
  if (window_length < 1 || window_length % 2 == 0) {
    throw InvalidArgument("smoothing window must be a positive odd integer, got " +
                          std::to_string(window_length));
  }
  if (poly_order < 0 || poly_order >= window_length) {
    throw InvalidArgument("smoothing order must lie in [0, window), got " +
                          std::to_string(poly_order));
  }
}

std::vector<double> savgol_weights(int window, int order, int position) {
  if (window < 1 || order < 0 || order >= window || position < 0 || position >= window) {
    throw InvalidArgument("savgol_weights: bad window, order or position");
  }
  // Abscissae scaled to [-1, 1] keep the Vandermonde system well conditioned.
  const double c = 0.5 * (window - 1);
  const double s = c > 0.0 ? c : 1.0;
  Eigen::MatrixXd v(window, order + 1);
  for (int i = 0; i < window; ++i) {
    const double u = (i - c) / s;
    double p = 1.0;
    for (int k = 0; k <= order; ++k, p *= u) v(i, k) = p;
  }
  const Eigen::MatrixXd pinv = v.completeOrthogonalDecomposition().pseudoInverse();
  const Eigen::VectorXd w = pinv.transpose() * v.row(position).transpose();
  return {w.data(), w.data() + w.size()};
}

MagnitudeResponse savgol_smooth(const MagnitudeResponse& x, const SmoothingConfig& config) {
  config.validate();
  const int f = static_cast<int>(x.values_db.size());
  const int win = config.window_length;
  if (win > f) {
    throw InvalidArgument("smoothing window " + std::to_string(win) +
                          " exceeds response length " + std::to_string(f));
  }
  const int half = win / 2;
  MagnitudeResponse out{x.grid, std::vector<double>(f)};
  const std::vector<double> center = savgol_weights(win, config.poly_order, half);
  for (int j = 0; j < f; ++j) {
    int start = j - half;
    const std::vector<double>* w = &center;
    std::vector<double> edge;
    if (start < 0 || start + win > f) {
      start = start < 0 ? 0 : f - win;
      edge = savgol_weights(win, config.poly_order, j - start);
      w = &edge;
    }
    double acc = 0.0;
    for (int i = 0; i < win; ++i) acc += (*w)[i] * x.values_db[start + i];
    out.values_db[j] = acc;
  }
  return out;
}

}  // namespace iirfit
