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

#include "iirfit/fft.h"

#include <unsupported/Eigen/FFT>

#include "iirfit/errors.h"

namespace iirfit {

template <typename Real>
std::vector<std::complex<Real>> real_fft(std::span<const Real> x, int size) {
  if (size < 1) throw InvalidArgument("real_fft: size must be positive");
  std::vector<Real> padded(size, Real(0));
  for (size_t n = 0; n < x.size(); ++n) padded[n % size] += x[n];
  Eigen::FFT<Real> fft;
  fft.SetFlag(Eigen::FFT<Real>::HalfSpectrum);
  std::vector<std::complex<Real>> half;
  fft.fwd(half, padded);
  // Rebuild the full spectrum from Hermitian symmetry.
  std::vector<std::complex<Real>> full(size);
  for (int k = 0; k < size; ++k) {
    full[k] = k <= size / 2 ? half[k] : std::conj(half[size - k]);
  }
  return full;
}

template <typename Real>
std::vector<Real> inverse_fft_real(
    std::span<const std::complex<Real>> spectrum) {
  Eigen::FFT<Real> fft;
  std::vector<std::complex<Real>> in(spectrum.begin(), spectrum.end());
  std::vector<std::complex<Real>> out;
  fft.inv(out, in);
  std::vector<Real> real(out.size());
  for (size_t n = 0; n < out.size(); ++n) real[n] = out[n].real();
  return real;
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

template std::vector<std::complex<double>> real_fft<double>(
    std::span<const double>, int);
template std::vector<std::complex<long double>> real_fft<long double>(
    std::span<const long double>, int);
template std::vector<double> inverse_fft_real<double>(
    std::span<const std::complex<double>>);
template std::vector<long double> inverse_fft_real<long double>(
    std::span<const std::complex<long double>>);

}  // namespace iirfit
