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

#ifndef IIRFIT_FFT_H_
#define IIRFIT_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace iirfit {

// Forward DFT X[k] = sum_n x[n] exp(-2 pi i k n / size) of a real sequence,
// zero-padded (or time-aliased, if longer) to `size`. Returns all `size` bins.
template <typename Real>
std::vector<std::complex<Real>> real_fft(std::span<const Real> x, int size);

// Inverse DFT of a full complex spectrum, keeping only the real part.
template <typename Real>
std::vector<Real> inverse_fft_real(std::span<const std::complex<Real>> spectrum);

// Smallest power of two >= n.
int next_pow2(int n);

}  // namespace iirfit

#endif  // IIRFIT_FFT_H_
