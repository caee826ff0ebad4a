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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <variant>

#include "acceptance.h"
#include "iirfit/designers.h"
#include "iirfit/dsp.h"
#include "iirfit/evalbench.h"
#include "iirfit/grad.h"
#include "iirfit/mlp.h"
#include "iirfit/polyroots.h"
#include "iirfit/randfilt.h"

namespace iirfit::acceptance {
namespace {

using std::numbers::pi;

constexpr double kFs = 44100.0;

bool strictly_inside(const std::vector<Complex>& roots) {
  return std::all_of(roots.begin(), roots.end(),
                     [](Complex r) { return std::isfinite(std::abs(r)) && std::abs(r) < 1.0; });
}

// ---------------------------------------------------------------------------
// 1. Minimum-phase guarantee.

Outcome min_phase_guarantee(const Context&) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> log_radius(-8.0, 8.0);
  std::uniform_real_distribution<double> angle(-pi, pi);
  long bad = 0;
  double worst = 0.0;
  auto check = [&](Complex r) {
    const double m = std::abs(min_phase_project(r));
    worst = std::max(worst, m);
    if (!(m < 1.0)) ++bad;
  };
  const int kRoots = 1'000'000;
  for (int i = 0; i < kRoots; ++i) {
    // Radii spread over 16 decades, a slice of them right at |r| = 1.
    const double r = (i % 8 == 0) ? 1.0 + (angle(rng) / pi) * 1e-9
                                   : std::pow(10.0, log_radius(rng));
    check(std::polar(r, angle(rng)));
  }
  for (double big : {1e3, 1e30, 1e300, std::numeric_limits<double>::max()}) {
    check({big, 0.0});
    check({0.0, -big});
    check({-big, big});
  }

  // Network outputs: untrained and deliberately blown-up weights, ordinary
  // and extreme inputs.
  const FrequencyGrid grid = make_grid(128, kFs);
  long estimates = 0, bad_estimates = 0;
  for (int order : {4, 8, 16, 32}) {
    for (double weight_scale : {1.0, 1e3}) {
      Mlp<float> model = Mlp<float>::Initialized({grid.size(), 32, order}, 7 + order);
      for (float& p : model.params()) p *= static_cast<float>(weight_scale);
      for (int i = 0; i < 100; ++i) {
        MagnitudeResponse target{grid, std::vector<double>(grid.size())};
        if (i < 80) {
          target = draw_target({Family::kG, order, 3}, Stream::kTest, i, grid).response;
        } else {
          for (int j = 0; j < grid.size(); ++j) {
            target.values_db[j] = (i % 2 ? 1e4 : -1e4) * std::sin(0.37 * j * (i - 79));
          }
        }
        const FilterCascade c = estimate(model, target);
        ++estimates;
        const bool ok = strictly_inside(c.poles) && strictly_inside(c.zeros) &&
                        c.gain > 0.0 && c.gain < 100.0 && c.order() == order;
        if (!ok) ++bad_estimates;
      }
    }
  }
  return {bad == 0 && bad_estimates == 0,
          std::to_string(kRoots + 12) + " roots, max |projected| " + num(worst, 17) + ", " +
              std::to_string(bad) + " outside; " + std::to_string(estimates) +
              " estimates, " + std::to_string(bad_estimates) + " not strictly minimum-phase"};
}

// ---------------------------------------------------------------------------
// 2. Response consistency.

double max_abs_diff(const MagnitudeResponse& a, const MagnitudeResponse& b) {
  double m = 0.0;
  for (size_t j = 0; j < a.values_db.size(); ++j) {
    m = std::max(m, std::abs(a.values_db[j] - b.values_db[j]));
  }
  return m;
}

Outcome response_consistency(const Context&) {
  const FrequencyGrid grid = make_grid(512, kFs);
  double worst_expanded = 0.0, worst_fft = 0.0;
  int worst_order = 0;
  for (int i = 0; i < 1000; ++i) {
    const int order = 2 * (1 + i % 16);
    Rng rng = make_rng(2, Stream::kTest, i);
    const FilterCascade cascade = sample_family_c(order, rng);
    CoefficientFilter expanded = sections_from_cascade(cascade);
    expanded.sections.clear();  // evaluate the expanded polynomials only
    const auto direct = coeff_response_db(expanded, grid);
    const double e = max_abs_diff(cascade_response_db(cascade, grid), direct);
    if (e > worst_expanded) {
      worst_expanded = e;
      worst_order = order;
    }
    worst_fft = std::max(worst_fft, max_abs_diff(coeff_response_db_fft(expanded, grid), direct));
  }
  return {worst_expanded <= 1e-9 && worst_fft <= 1e-9,
          "1000 family-C cascades, orders 2..32: cascade vs expanded max " +
              num(worst_expanded) + " dB (order " + std::to_string(worst_order) +
              "), FFT vs direct max " + num(worst_fft) + " dB, bound 1e-9"};
}

// ---------------------------------------------------------------------------
// 3. Gradient correctness.

// Relative error with an absolute floor: differences below 1e-8 count as 0.
double floored_error(double analytic, double numeric) {
  const double diff = std::abs(analytic - numeric);
  if (diff <= 1e-8) return 0.0;
  return diff / std::max(std::abs(analytic), std::abs(numeric));
}

Outcome gradient_correctness(const Context&) {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> normal(0.0, 0.6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_cascade = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int sections = 1 + trial % 8;
    const GainMode mode = trial % 2 ? GainMode::kSigmoid100 : GainMode::kDirect;
    const FrequencyGrid grid = make_grid(256, kFs);
    CascadeParams p(sections);
    for (int i = 1; i < p.size(); ++i) p.values()[i] = normal(rng);
    p.raw_gain() = mode == GainMode::kDirect ? std::exp(normal(rng)) : normal(rng);
    FilterCascade c;
    c.gain = std::exp(2.0 * unit(rng) - 1.0);
    for (int k = 0; k < sections; ++k) {
      c.poles.push_back(std::polar(0.9 * std::sqrt(unit(rng)), pi * unit(rng)));
      c.zeros.push_back(std::polar(0.9 * std::sqrt(unit(rng)), pi * unit(rng)));
    }
    const auto target = cascade_response_db(c, grid);
    const auto analytic = loss_and_grad(p, target, mode).grad;
    const auto numeric = finite_diff_grad(p, target, mode, 1e-6);
    for (size_t i = 0; i < analytic.size(); ++i) {
      worst_cascade = std::max(worst_cascade, floored_error(analytic[i], numeric[i]));
    }
  }

  // Tiny network, double precision, fourth-order central differences.
  Mlp<double> model = Mlp<double>::Initialized({24, 8, 4}, 11);
  const FrequencyGrid grid = make_grid(24, kFs);
  std::vector<TrainingExample> batch;
  for (int i = 0; i < 4; ++i) {
    batch.push_back(make_example(draw_target({Family::kC, 4, 5}, Stream::kTest, i, grid).response));
  }
  const LossEvaluator eval(grid);
  const auto analytic = batch_loss_and_grad(model, eval, batch).grad;
  // Two step sizes: a LeakyReLU kink inside the stencil spoils at most one.
  double worst_network = 0.0;
  for (size_t i = 0; i < analytic.size(); ++i) {
    const double x = model.params()[i];
    auto at = [&](double v) {
      model.params()[i] = v;
      return batch_loss(model, eval, batch);
    };
    double best = std::numeric_limits<double>::infinity();
    for (double h : {2e-5, 3e-5}) {
      const double fd =
          (-at(x + 2 * h) + 8 * at(x + h) - 8 * at(x - h) + at(x - 2 * h)) / (12 * h);
      best = std::min(best, floored_error(analytic[i], fd));
    }
    model.params()[i] = x;
    worst_network = std::max(worst_network, best);
  }
  return {worst_cascade < 1e-4 && worst_network < 1e-5,
          "cascade loss: 100 configs, max rel error " + num(worst_cascade) +
              " (bound 1e-4); network " + std::to_string(analytic.size()) +
              " params, max rel error " + num(worst_network) + " (bound 1e-5)"};
}

// ---------------------------------------------------------------------------
// 4. Family B real-root fraction.

Outcome family_b_fraction(const Context&) {
  long real = 0, quadratics = 0;
  for (int i = 0; quadratics < 10'000'000; ++i) {
    Rng rng = make_rng(4, Stream::kTest, i);
    for (const Biquad& s : sample_family_b(32, rng).sections) {
      real += s.b1 * s.b1 >= 4.0 * s.b0 * s.b2;
      real += s.a1 * s.a1 >= 4.0 * s.a0 * s.a2;
      quadratics += 2;
    }
  }
  const double fraction = static_cast<double>(real) / quadratics;
  return {std::abs(fraction - 0.648) <= 0.003,
          std::to_string(quadratics) + " quadratics, real-root fraction " + num(fraction, 6) +
              " (target 0.648 +/- 0.003)"};
}

// ---------------------------------------------------------------------------
// 5. Family E real-eigenvalue counts.

Outcome family_e_counts(const Context&) {
  // 20000 trials rather than the minimum 2000: at 2000 the standard error
  // (~0.03 at N=16) is large enough that the verdict swings with the seed.
  const int trials = 20000;
  bool pass = true;
  std::string detail = std::to_string(trials) + " trials each:";
  for (int n : {16, 32, 64}) {
    long total = 0;
    for (int t = 0; t < trials; ++t) {
      Rng rng = make_rng(5, Stream::kTest, static_cast<std::uint64_t>(n) * 100000 + t);
      total += count_real(characteristic_roots(n, rng, 1.0 / std::sqrt(n)));
    }
    const double mean = static_cast<double>(total) / trials;
    const double law = std::sqrt(2.0 * n / pi);
    const double rel = (mean - law) / law;
    pass = pass && std::abs(rel) <= 0.10;
    char buf[128];
    std::snprintf(buf, sizeof(buf), " N=%d mean %.3f vs %.3f (%+.1f%%);", n, mean, law, 100 * rel);
    detail += buf;
  }
  return {pass, detail + " bound 10%"};
}

// ---------------------------------------------------------------------------
// 6. Family A real-root count.

Outcome family_a_count(const Context&) {
  // 0.626: Monte-Carlo pilot, docs/pilots.md.
  const double expected = 2.0 / pi * std::log(32.0) + 0.626;
  const int draws = 100'000;
  long total = 0;
  for (int i = 0; i < draws; ++i) {
    Rng rng = make_rng(6, Stream::kTest, i);
    total += count_real(z_inverse_roots(sample_family_a(32, rng).numerator));
  }
  const double mean = static_cast<double>(total) / draws;
  return {std::abs(mean - expected) <= 0.2,
          std::to_string(draws) + " degree-32 draws, mean real roots " + num(mean, 5) +
              " vs " + num(expected, 5) + " +/- 0.2"};
}

// ---------------------------------------------------------------------------
// 7. MYW oracle recovery.

bool stable_min_phase(const CoefficientFilter& f) {
  return strictly_inside(z_inverse_roots(f.denominator)) &&
         strictly_inside(z_inverse_roots(f.numerator));
}

Outcome myw_recovery(const Context&) {
  const FrequencyGrid grid = make_grid(512, kFs);
  // Pole pairs (radius, angle / pi); the last two are real pole pairs.
  struct Ar2 {
    Complex p1, p2;
  };
  const std::vector<Ar2> cases = {
      {std::polar(0.9, 0.3 * pi), std::polar(0.9, -0.3 * pi)},
      {std::polar(0.5, 0.7 * pi), std::polar(0.5, -0.7 * pi)},
      {std::polar(0.97, 0.1 * pi), std::polar(0.97, -0.1 * pi)},
      {{0.8, 0.0}, {-0.4, 0.0}},
      {{0.6, 0.0}, {0.3, 0.0}},
  };
  double worst_coef = 0.0;
  for (const Ar2& c : cases) {
    const double a1 = -(c.p1 + c.p2).real();
    const double a2 = (c.p1 * c.p2).real();
    CoefficientFilter ar;
    ar.numerator = {1.0};
    ar.denominator = {1.0, a1, a2};
    const auto fit = myw_design(coeff_response_db(ar, grid), {.order = 2});
    const double a0 = fit.denominator[0];
    worst_coef = std::max({worst_coef, std::abs(fit.denominator[1] / a0 - a1),
                           std::abs(fit.denominator[2] / a0 - a2)});
  }

  double worst_flat = 0.0;
  for (double level : {0.0, 6.0, -20.0}) {
    const MagnitudeResponse flat{grid, std::vector<double>(grid.size(), level)};
    for (int order : {2, 8, 16}) {
      const auto r = coeff_response_db(myw_design(flat, {.order = order}), grid);
      for (double v : r.values_db) worst_flat = std::max(worst_flat, std::abs(v - level));
    }
  }

  int designs = 0, unstable = 0;
  for (Family f : {Family::kA, Family::kB, Family::kC, Family::kD, Family::kE, Family::kF,
                   Family::kG}) {
    for (int i = 0; i < 100; ++i) {
      const int order = 4 + 2 * (i % 7);
      const auto target = draw_target({f, order, 7}, Stream::kTest, i, grid).response;
      ++designs;
      if (!stable_min_phase(myw_design(target, {.order = order}))) ++unstable;
    }
  }
  // Hostile targets: a step, a deep notch, alternating spikes.
  for (int k = 0; k < 3; ++k) {
    MagnitudeResponse t{grid, std::vector<double>(grid.size())};
    for (int j = 0; j < grid.size(); ++j) {
      t.values_db[j] = k == 0 ? (j < 200 ? 20.0 : -60.0)
                     : k == 1 ? (j == 300 ? -120.0 : 0.0)
                              : (j % 2 ? 40.0 : -40.0);
    }
    ++designs;
    if (!stable_min_phase(myw_design(t, {.order = 16}))) ++unstable;
  }
  return {worst_coef <= 1e-2 && worst_flat <= 0.5 && unstable == 0,
          "AR(2) max coefficient error " + num(worst_coef) + " (bound 1e-2); flat max error " +
              num(worst_flat) + " dB (bound 0.5); " + std::to_string(unstable) + " of " +
              std::to_string(designs) + " designs not stable/minimum-phase"};
}

// ---------------------------------------------------------------------------
// 8. SGD budget ordering.

Outcome sgd_ordering(const Context& ctx) {
  const FrequencyGrid grid = make_grid(512, kFs);
  const EvalDataset suite = build_eval_set(Family::kG, 16, 50, 8, grid);
  std::vector<double> means;
  std::string detail = "G16 suite of 50:";
  for (int steps : {10, 100, 1000}) {
    SgdConfig cfg;
    cfg.order = 16;
    cfg.steps = steps;
    const EvalResult r =
        evaluate(sgd_method(cfg), suite, {.threads = ctx.threads, .timing_repeats = 0});
    means.push_back(r.row.mean_db_mse);
    detail += " sgd(" + std::to_string(steps) + ")=" + num(r.row.mean_db_mse);
    if (r.row.failures > 0) detail += " [" + std::to_string(r.row.failures) + " failed]";
  }
  const bool ordered = means[0] > means[1] && means[1] > means[2];

  // Easy order-2 self-targets: one biquad with roots well inside the circle.
  double worst = 0.0, total = 0.0;
  const int easy = 20;
  for (int i = 0; i < easy; ++i) {
    Rng rng = make_rng(8, Stream::kTest, i);
    std::uniform_real_distribution<double> radius(0.1, 0.8), angle(0.0, pi), gain(0.5, 2.0);
    FilterCascade c;
    c.gain = gain(rng);
    c.poles = {std::polar(radius(rng), angle(rng))};
    c.zeros = {std::polar(radius(rng), angle(rng))};
    const auto target = cascade_response_db(c, grid);
    SgdConfig cfg;
    cfg.order = 2;
    cfg.steps = 1000;
    const auto fit = sgd_design(target, cfg);
    const double e = db_mse(cascade_response_db(fit.cascade, grid), target);
    worst = std::max(worst, e);
    total += e;
  }
  return {ordered && worst < 1.0,
          detail + (ordered ? " (strictly decreasing)" : " (NOT decreasing)") +
              "; order-2 self-targets sgd(1000) mean " + num(total / easy) + ", max " +
              num(worst) + " (bound 1.0)"};
}

}  // namespace

std::string num(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::vector<Criterion> numeric_criteria() {
  return {
      {1, "minimum-phase guarantee", 10.0, min_phase_guarantee},
      {2, "response consistency", 30.0, response_consistency},
      {3, "gradient correctness", 60.0, gradient_correctness},
      {4, "family B real-root fraction", 60.0, family_b_fraction},
      {5, "family E real-eigenvalue counts", 600.0, family_e_counts},
      {6, "family A real-root count", 600.0, family_a_count},
      {7, "MYW oracle recovery", 0.0, myw_recovery},
      {8, "SGD budget ordering", 0.0, sgd_ordering},
  };
}

}  // namespace iirfit::acceptance
