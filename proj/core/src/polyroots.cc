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
#include "iirfit/polyroots.h"

#include <algorithm>
#include <string>

#include <Eigen/Eigenvalues>

#include "iirfit/errors.h"

namespace iirfit {

std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw InvalidArgument("eigenvalues: matrix must be square");
  }
  const Eigen::Index n = matrix.rows();
  if (n == 0) return {};
  if (!matrix.allFinite()) {
    throw NumericError("eigenvalues: matrix has non-finite entries");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.setMaxIterations(static_cast<Eigen::Index>(30 * n));
  solver.compute(matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalues: QR iteration did not converge for n = " +
                       std::to_string(n));
  }
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + n};
}

std::vector<std::complex<double>> polynomial_roots(
    std::span<const double> coeffs) {
  size_t degree = coeffs.size();
  while (degree > 0 && coeffs[degree - 1] == 0.0) --degree;
  if (degree <= 1) return {};
  --degree;
  size_t zeros_at_origin = 0;
  while (zeros_at_origin < degree && coeffs[zeros_at_origin] == 0.0) {
    ++zeros_at_origin;
  }
  const size_t n = degree - zeros_at_origin;
  std::vector<std::complex<double>> roots(zeros_at_origin, {0.0, 0.0});
  if (n == 0) return roots;
  const double lead = coeffs[degree];
  // Companion matrix with the monic coefficients in the first row.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (size_t j = 0; j < n; ++j) {
    companion(0, j) = -coeffs[degree - 1 - j] / lead;
  }
  for (size_t i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  const auto found = eigenvalues(companion);
  roots.insert(roots.end(), found.begin(), found.end());
  return roots;
}

std::vector<std::complex<double>> z_inverse_roots(
    std::span<const double> coeffs) {
  std::vector<double> ascending(coeffs.rbegin(), coeffs.rend());
  return polynomial_roots(ascending);
}

int count_real(std::span<const std::complex<double>> roots) {
  return static_cast<int>(std::count_if(
      roots.begin(), roots.end(),
      [](const std::complex<double>& r) { return r.imag() == 0.0; }));
}

std::vector<double> poly_from_z_inverse_roots(std::span<const std::complex<double>> roots) {
  using LComplex = std::complex<long double>;
  std::vector<LComplex> acc = {LComplex(1.0L)};
  for (const auto& r : roots) {
    const LComplex root(r.real(), r.imag());
    acc.push_back(LComplex(0.0L));
    for (size_t i = acc.size() - 1; i > 0; --i) acc[i] -= root * acc[i - 1];
  }
  std::vector<double> out(acc.size());
  for (size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<double>(acc[i].real());
  return out;
}

}  // namespace iirfit
