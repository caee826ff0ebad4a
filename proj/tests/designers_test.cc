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

#include "iirfit/designers.h"

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "iirfit/errors.h"
#include "iirfit/polyroots.h"
#include "iirfit/randfilt.h"

namespace iirfit {
namespace {

const FrequencyGrid kGrid = make_grid(512, 44100.0);

MagnitudeResponse ar2_target() {
  CoefficientFilter f;
  f.numerator = {1.0, 0.0, 0.0};
  f.denominator = {1.0, -1.2, 0.72};
  return coeff_response_db(f, kGrid);
}

TEST(MywTest, RecoversAr2Denominator) {
  const CoefficientFilter f = myw_design(ar2_target(), {2, 0, 0});
  ASSERT_EQ(f.denominator.size(), 3u);
  EXPECT_NEAR(f.denominator[0], 1.0, 1e-12);
  EXPECT_NEAR(f.denominator[1], -1.2, 1e-2);
  EXPECT_NEAR(f.denominator[2], 0.72, 1e-2);
  EXPECT_LT(db_mse(coeff_response_db(f, kGrid), ar2_target()), 1e-3);
}

TEST(MywTest, FlatTargets) {
  for (double level : {0.0, 6.0, -20.0}) {
    const MagnitudeResponse flat{kGrid, std::vector<double>(512, level)};
    const CoefficientFilter f = myw_design(flat, {16, 0, 0});
    EXPECT_EQ(f.order(), 16);
    for (double v : coeff_response_db(f, kGrid).values_db) EXPECT_NEAR(v, level, 0.5);
  }
}

TEST(MywTest, StableAndMinimumPhaseOnRandomTargets) {
  for (int i = 0; i < 200; ++i) {
    const auto d = draw_target({Family::kG, 16, 7}, Stream::kTest, i, kGrid);
    const CoefficientFilter f = myw_design(d.response, {16, 0, 0});
    for (const auto& r : z_inverse_roots(f.denominator)) {
      ASSERT_LT(std::abs(r), 1.0) << "draw " << i << " family " << family_name(d.sampled.family);
    }
    for (const auto& r : z_inverse_roots(f.numerator)) {
      ASSERT_LE(std::abs(r), 1.0 + 1e-6) << "draw " << i;
    }
    const double mse = db_mse(coeff_response_db(f, kGrid), d.response);
    EXPECT_TRUE(std::isfinite(mse));
  }
}

TEST(MywTest, Errors) {
  MagnitudeResponse bad{kGrid, std::vector<double>(512, 0.0)};
  bad.values_db[7] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(myw_design(bad, {4, 0, 0}), InvalidArgument);
  const MagnitudeResponse flat{kGrid, std::vector<double>(512, 0.0)};
  EXPECT_THROW(myw_design(flat, {3, 0, 0}), InvalidArgument);
  EXPECT_THROW(myw_design(flat, {4, 4, 0}), InvalidArgument);
  EXPECT_THROW(myw_design(flat, {4, 0, 512}), InvalidArgument);
}

TEST(SgdTest, EasyOrderTwoTargets) {
  for (int i = 0; i < 10; ++i) {
    Rng rng = make_rng(21, Stream::kTest, i);
    const FilterCascade c = sample_family_c(2, rng);
    const MagnitudeResponse t = cascade_response_db(c, kGrid);
    SgdConfig cfg;
    cfg.order = 2;
    cfg.steps = 1000;
    cfg.seed = i;
    const SgdResult r = sgd_design(t, cfg);
    EXPECT_LT(r.best_loss, 1.0) << "target " << i;
    EXPECT_NEAR(db_mse(cascade_response_db(r.cascade, kGrid), t), r.best_loss, 1e-9);
  }
}

TEST(SgdTest, BudgetOrdering) {
  double sums[3] = {0, 0, 0};
  const int budgets[3] = {10, 100, 1000};
  for (int i = 0; i < 10; ++i) {
    const auto d = draw_target({Family::kG, 16, 8}, Stream::kTest, i, kGrid);
    for (int b = 0; b < 3; ++b) {
      SgdConfig cfg;
      cfg.steps = budgets[b];
      cfg.seed = i;
      sums[b] += sgd_design(d.response, cfg).best_loss;
    }
  }
  EXPECT_LT(sums[2], sums[1]);
  EXPECT_LT(sums[1], sums[0]);
}

TEST(SgdTest, TraceContract) {
  const auto d = draw_target({Family::kC, 4, 9}, Stream::kTest, 0, kGrid);
  SgdConfig cfg;
  cfg.order = 4;
  cfg.steps = 1;
  const SgdResult one = sgd_design(d.response, cfg);
  EXPECT_EQ(one.loss_trace.size(), 2u);
  cfg.steps = 0;
  EXPECT_THROW(sgd_design(d.response, cfg), InvalidArgument);
  cfg.steps = 300;
  cfg.lr = -1.0;
  EXPECT_THROW(sgd_design(d.response, cfg), InvalidArgument);
  cfg.lr = 5e-4;
  const SgdResult r = sgd_design(d.response, cfg);
  ASSERT_EQ(r.best_trace.size(), 301u);
  for (size_t i = 1; i < r.best_trace.size(); ++i) EXPECT_LE(r.best_trace[i], r.best_trace[i - 1]);
  EXPECT_EQ(r.best_trace.back(), r.best_loss);
  // The trace prefix does not depend on the budget.
  EXPECT_EQ(r.loss_trace[0], one.loss_trace[0]);
  EXPECT_EQ(r.loss_trace[1], one.loss_trace[1]);
}

TEST(SgdTest, Deterministic) {
  const auto d = draw_target({Family::kG, 8, 10}, Stream::kTest, 3, kGrid);
  for (SgdOptimizer opt : {SgdOptimizer::kPlain, SgdOptimizer::kAdaptiveMoment}) {
    SgdConfig cfg;
    cfg.order = 8;
    cfg.steps = 200;
    cfg.optimizer = opt;
    cfg.gain_mode = GainMode::kSigmoid100;
    const SgdResult a = sgd_design(d.response, cfg);
    const SgdResult b = sgd_design(d.response, cfg);
    EXPECT_EQ(a.loss_trace, b.loss_trace);
    EXPECT_EQ(a.cascade.poles, b.cascade.poles);
    for (const Complex& p : a.cascade.poles) EXPECT_LT(std::abs(p), 1.0);
  }
}

TEST(SgdTest, AdaptiveMomentImproves) {
  const auto d = draw_target({Family::kG, 8, 11}, Stream::kTest, 0, kGrid);
  SgdConfig cfg;
  cfg.order = 8;
  cfg.steps = 300;
  cfg.lr = 1e-2;
  cfg.optimizer = SgdOptimizer::kAdaptiveMoment;
  const SgdResult r = sgd_design(d.response, cfg);
  EXPECT_LT(r.best_loss, r.loss_trace.front());
}

}  // namespace
}  // namespace iirfit
