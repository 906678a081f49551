// Copyright 2026 The adaptmerge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "adaptmerge/irl.h"
#include "adaptmerge/mapping_model.h"
#include "test_support.h"

namespace adaptmerge {
namespace {

constexpr int kCases = 1000;

using testing::BruteRegret;
using testing::NearlyGeneric;
using testing::RandomContext;
using testing::RandomPayoff;

WeightVector RandomSimplex(Rng& rng) { return WeightVector::FromFirst(rng.Uniform()); }

FeatureMatrix RandomFeatures(Rng& rng, Player p) {
  FeatureMatrix f;
  f.player = p;
  for (auto& row : f.cells) {
    for (auto& cell : row) cell = {rng.Uniform(-1, 2), rng.Uniform(-1, 2)};
  }
  return f;
}

int PureEquilibria(const PayoffMatrix& u0, const PayoffMatrix& u1) {
  int n = 0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const bool row_best = u0.u[j][k] >= u0.u[1 - j][k];
      const bool col_best = u1.u[j][k] >= u1.u[j][1 - k];
      n += row_best && col_best ? 1 : 0;
    }
  }
  return n;
}

TEST(SimplexProperty, ProjectionMatchesClosedFormAndIsIdempotent) {
  Rng rng(101);
  for (int i = 0; i < kCases; ++i) {
    const Feature raw{rng.Uniform(-5, 5), rng.Uniform(-5, 5)};
    const WeightVector w = ProjectToSimplex(raw);
    ASSERT_TRUE(w.OnSimplex());
    const double oracle = std::clamp((raw[0] - raw[1] + 1.0) / 2.0, 0.0, 1.0);
    ASSERT_NEAR(w.w1, oracle, 1e-12);
    const WeightVector again = ProjectToSimplex({w.w1, w.w2});
    ASSERT_NEAR(again.w1, w.w1, 1e-15);
  }
}

TEST(SimplexProperty, GradientStepsStayOnSimplex) {
  Rng rng(102);
  for (int i = 0; i < kCases; ++i) {
    const WeightVector w = RandomSimplex(rng);
    const Feature g{rng.Uniform(-3, 3), rng.Uniform(-3, 3)};
    const double step = rng.Uniform(1e-3, 2.0);
    for (auto dir : {UpdateDirection::kFeatureMatching, UpdateDirection::kLiteral}) {
      ASSERT_TRUE(GradientStep(w, g, step, dir).OnSimplex());
    }
  }
}

TEST(SimplexProperty, OptimizerIteratesStayOnSimplex) {
  Rng rng(103);
  IrlConfig cfg;
  cfg.max_iters = 60;
  for (int i = 0; i < kCases; ++i) {
    cfg.init0 = RandomSimplex(rng);
    cfg.init1 = RandomSimplex(rng);
    const Demonstration d{RandomContext(rng), ActionFromIndex(rng.UniformInt(0, 1)),
                          ActionFromIndex(rng.UniformInt(0, 1))};
    std::vector<IrlIterate> trace;
    const IrlResult r = OptimizeWeights(d, {}, cfg, {}, &trace);
    ASSERT_TRUE(r.lambda0.OnSimplex());
    ASSERT_TRUE(r.lambda1.OnSimplex());
    ASSERT_LE(r.iterations, cfg.max_iters);
    for (const auto& it : trace) {
      ASSERT_TRUE(it.lambda0.OnSimplex());
      ASSERT_TRUE(it.lambda1.OnSimplex());
    }
  }
}

TEST(PosteriorProperty, PosteriorsAreDistributions) {
  Rng rng(104);
  std::vector<MappingModel> models;
  for (int m = 0; m < 5; ++m) {
    std::vector<MappingSample> s;
    const int bins = 2 + m * 3;
    for (int i = 0; i < 200; ++i) {
      MappingSample x;
      x.obs = {rng.Uniform(0, 4), rng.Uniform(-5, 5), rng.Uniform(0, 60), rng.Uniform(0, 150),
               rng.Uniform(0, 35)};
      x.lambda0 = RandomSimplex(rng);
      x.lambda1 = RandomSimplex(rng);
      s.push_back(x);
    }
    models.push_back(TrainMapping(s, bins));
  }
  for (int i = 0; i < kCases; ++i) {
    const MappingModel& model = models[static_cast<std::size_t>(i) % models.size()];
    const double scale = std::pow(10.0, rng.Uniform(-1, 3));
    const EnvironmentObservation o{rng.Uniform(-1, 1) * scale, rng.Uniform(-1, 1) * scale,
                                   rng.Uniform(-1, 1) * scale, rng.Uniform(-1, 1) * scale,
                                   rng.Uniform(-1, 1) * scale};
    const WeightInference w = InferWeights(model, o);
    for (const auto* post : {&w.posterior0, &w.posterior1}) {
      ASSERT_EQ(static_cast<int>(post->size()), model.bins);
      ASSERT_NEAR(std::accumulate(post->begin(), post->end(), 0.0), 1.0, 1e-9);
      for (double p : *post) ASSERT_GE(p, 0.0);
    }
    ASSERT_TRUE(w.lambda0.OnSimplex());
    ASSERT_TRUE(w.lambda1.OnSimplex());
    ASSERT_GE(w.lambda0.w1, model.bin_centers.front() - 1e-12);
    ASSERT_LE(w.lambda0.w1, model.bin_centers.back() + 1e-12);
  }
}

TEST(PayoffProperty, LinearInWeights) {
  Rng rng(105);
  for (int i = 0; i < kCases; ++i) {
    const FeatureMatrix f = RandomFeatures(rng, Player::kP0);
    const WeightVector a = RandomSimplex(rng);
    const WeightVector b = RandomSimplex(rng);
    const double t = rng.Uniform();
    const WeightVector mix{t * a.w1 + (1 - t) * b.w1, t * a.w2 + (1 - t) * b.w2};
    const PayoffMatrix ua = BuildPayoffs(f, a);
    const PayoffMatrix ub = BuildPayoffs(f, b);
    const PayoffMatrix um = BuildPayoffs(f, mix);
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        ASSERT_NEAR(um.u[j][k], t * ua.u[j][k] + (1 - t) * ub.u[j][k], 1e-12);
        ASSERT_NEAR(ua.u[j][k], a.w1 * f.cells[j][k][0] + a.w2 * f.cells[j][k][1], 1e-12);
      }
    }
  }
}

TEST(EquilibriumProperty, SolverOutputIsEpsilonNash) {
  Rng rng(106);
  for (int i = 0; i < kCases; ++i) {
    const PayoffMatrix u0 = RandomPayoff(rng, Player::kP0);
    const PayoffMatrix u1 = RandomPayoff(rng, Player::kP1);
    const EquilibriumSolution s = SolveEquilibrium(u0, u1);
    ASSERT_GE(s.sigma0.p, 0.0);
    ASSERT_LE(s.sigma0.p, 1.0);
    ASSERT_GE(s.sigma1.p, 0.0);
    ASSERT_LE(s.sigma1.p, 1.0);
    const auto r = BruteRegret(u0, u1, s.sigma0.p, s.sigma1.p);
    ASSERT_LE(r[0], 1e-9);
    ASSERT_LE(r[1], 1e-9);
    ASSERT_NEAR(EquilibriumObjective(s.sigma0, s.sigma1, u0, u1, s.v0, s.v1), 0.0, 1e-9);
  }
}

TEST(EquilibriumProperty, PositiveScalingInvariantOnUniqueEquilibria) {
  Rng rng(107);
  int checked = 0;
  while (checked < kCases) {
    const PayoffMatrix u0 = RandomPayoff(rng, Player::kP0);
    const PayoffMatrix u1 = RandomPayoff(rng, Player::kP1);
    if (!NearlyGeneric(u0, u1, 1e-3) || PureEquilibria(u0, u1) == 2) continue;
    const double c0 = std::pow(10.0, rng.Uniform(-3, 3));
    const double c1 = std::pow(10.0, rng.Uniform(-3, 3));
    PayoffMatrix s0 = u0;
    PayoffMatrix s1 = u1;
    for (auto& row : s0.u) {
      for (double& x : row) x *= c0;
    }
    for (auto& row : s1.u) {
      for (double& x : row) x *= c1;
    }
    const EquilibriumSolution a = SolveEquilibrium(u0, u1);
    const EquilibriumSolution b = SolveEquilibrium(s0, s1);
    ASSERT_NEAR(a.sigma0.p, b.sigma0.p, 1e-9);
    ASSERT_NEAR(a.sigma1.p, b.sigma1.p, 1e-9);
    ASSERT_NEAR(b.v0, c0 * a.v0, 1e-9 * std::max(1.0, c0));
    ++checked;
  }
}

TEST(KinematicsProperty, PredictedGapNonNegativeAndActionsOrdered) {
  Rng rng(108);
  for (int i = 0; i < kCases; ++i) {
    const KinematicContext c = RandomContext(rng);
    const auto [f0, f1] = BuildFeatureMatrices(c, {});
    for (const auto& row : f1.cells) {
      for (const auto& cell : row) ASSERT_GE(cell[1], 0.0);
    }
    const double up = FeasibleAcceleration(c.a0, c.jerk0_mag, c.horizon, ActionLabel::kNYield);
    const double down = FeasibleAcceleration(c.a0, c.jerk0_mag, c.horizon, ActionLabel::kYield);
    ASSERT_GE(up, down);
    ASSERT_GE(FeasibleSpeed(c.v0, up, c.horizon), FeasibleSpeed(c.v0, down, c.horizon));
    ASSERT_GE(PredictedGap(c.gap_init, rng.Uniform(0, 40), rng.Uniform(0, 40),
                           rng.Uniform(-4, 3), rng.Uniform(-4, 3), c.horizon),
              0.0);
  }
}

TEST(DecisionProperty, ThresholdOnNYieldProbability) {
  Rng rng(109);
  for (int i = 0; i < kCases; ++i) {
    const double p = rng.Uniform();
    const double q = rng.Uniform();
    if (p > q) {
      ASSERT_TRUE(Decide({q}) != ActionLabel::kNYield || Decide({p}) == ActionLabel::kNYield);
    }
    ASSERT_EQ(Decide({p}), p > 0.5 + 1e-12 ? ActionLabel::kNYield : ActionLabel::kYield);
  }
}

}  // namespace
}  // namespace adaptmerge
