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

// Shared per-section energy expressions. A conjugate root pair q, conj(q)
// gives the polynomial 1 + c1 z^-1 + c2 z^-2 with c1 = -2 Re q, c2 = |q|^2,
// whose squared magnitude on the unit circle is
//   E(w) = (1 + c1 cos w + c2 cos 2w)^2 + (c1 sin w + c2 sin 2w)^2.
// Both the forward response and the analytic gradient use this form so the
// two paths agree to the last bit.

#ifndef IIRFIT_SRC_SECTION_MATH_H_
#define IIRFIT_SRC_SECTION_MATH_H_

#include <cmath>
#include <complex>
#include <numbers>

namespace iirfit::internal {

inline constexpr double kPowerToDb = 10.0;
// d(10 log10 E) / dE = kDbPerNeper / E
inline constexpr double kDbPerNeper = 10.0 / std::numbers::ln10;

struct Trig {
  explicit Trig(double omega)
      : c1(std::cos(omega)),
        s1(std::sin(omega)),
        c2(std::cos(2.0 * omega)),
        s2(std::sin(2.0 * omega)) {}
  Trig(double cos1, double sin1, double cos2, double sin2)
      : c1(cos1), s1(sin1), c2(cos2), s2(sin2) {}
  double c1, s1, c2, s2;
};

struct PairTerms {
  double re;  // 1 + c1 cos w + c2 cos 2w
  double im;  // c1 sin w + c2 sin 2w
  double energy() const { return re * re + im * im; }
  // dE/dc1 and dE/dc2
  double d_c1(const Trig& t) const { return 2.0 * (re * t.c1 + im * t.s1); }
  double d_c2(const Trig& t) const { return 2.0 * (re * t.c2 + im * t.s2); }
};

inline PairTerms pair_terms(double c1, double c2, const Trig& t) {
  return {1.0 + c1 * t.c1 + c2 * t.c2, c1 * t.s1 + c2 * t.s2};
}

inline PairTerms pair_terms(std::complex<double> q, const Trig& t) {
  return pair_terms(-2.0 * q.real(), std::norm(q), t);
}

inline double pair_energy(std::complex<double> q, const Trig& t) {
  return pair_terms(q, t).energy();
}

}  // namespace iirfit::internal

#endif  // IIRFIT_SRC_SECTION_MATH_H_
