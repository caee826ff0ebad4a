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
#ifndef IIRFIT_POLYROOTS_H_
#define IIRFIT_POLYROOTS_H_

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace iirfit {

// Eigenvalues of a real square matrix via Hessenberg reduction and shifted
// QR iteration to real Schur form. Real eigenvalues come back with an
// imaginary part of exactly zero (1x1 Schur blocks); complex ones come in
// conjugate pairs. Throws NumericError if QR does not converge within
// 30 * n iterations.
std::vector<std::complex<double>> eigenvalues(const Eigen::MatrixXd& matrix);

// Roots of c[0] + c[1] x + ... + c[n] x^n (ascending powers) from the
// eigenvalues of the companion matrix. Trailing zero coefficients lower the
// degree; leading zero coefficients contribute roots at the origin.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs);

// Roots in z of b[0] + b[1] z^-1 + ... + b[N] z^-N, i.e. of the polynomial
// b[0] z^N + ... + b[N].
std::vector<std::complex<double>> z_inverse_roots(std::span<const double> coeffs);

// Real coefficients c[0..n] of prod_k (1 - r_k z^-1), c[0] = 1. The root
// set must be closed under conjugation; imaginary residue is dropped.
std::vector<double> poly_from_z_inverse_roots(std::span<const std::complex<double>> roots);

// Number of roots with imaginary part exactly zero.
int count_real(std::span<const std::complex<double>> roots);

}  // namespace iirfit

#endif  // IIRFIT_POLYROOTS_H_
