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

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "adaptmerge/mapping_model.h"
#include "adaptmerge/synthetic.h"
#include "test_support.h"

namespace adaptmerge {
namespace {

EnvironmentObservation Obs(double d01_y, double dv, double d01_x, double d_ahead, double v1) {
  EnvironmentObservation o;
  o.d01_y = d01_y;
  o.dv01_x = dv;
  o.d01_x = d01_x;
  o.d_ahead = d_ahead;
  o.v1_x = v1;
  return o;
}

struct Cluster {
  EnvironmentObservation center;
  double lambda0;
  double lambda1;
};

const Cluster kTight{Obs(3.75, 1.0, 9.0, 40.0, 29.0), 0.95, 0.65};
const Cluster kOpen{Obs(3.75, -0.5, 45.0, 120.0, 30.0), 0.35, 0.25};

MappingSample Draw(Rng& rng, const Cluster& c) {
  MappingSample s;
  s.obs = Obs(c.center.d01_y + rng.Uniform(-0.1, 0.1), c.center.dv01_x + rng.Uniform(-0.4, 0.4),
              c.center.d01_x + rng.Uniform(-2, 2), c.center.d_ahead + rng.Uniform(-5, 5),
              c.center.v1_x + rng.Uniform(-1, 1));
  s.lambda0 = WeightVector::FromFirst(c.lambda0);
  s.lambda1 = WeightVector::FromFirst(c.lambda1);
  return s;
}

std::vector<MappingSample> TwoRegimes(Rng& rng, int per_cluster) {
  std::vector<MappingSample> out;
  for (int i = 0; i < per_cluster; ++i) {
    out.push_back(Draw(rng, kTight));
    out.push_back(Draw(rng, kOpen));
  }
  return out;
}

TEST(DiscretizeWeightTest, Examples) {
  EXPECT_EQ(DiscretizeWeight(0.0, 10), 0);
  EXPECT_EQ(DiscretizeWeight(1.0, 10), 9);
  EXPECT_EQ(DiscretizeWeight(0.55, 10), 5);
  EXPECT_DOUBLE_EQ(BinCenter(5, 10), 0.55);
  EXPECT_THROW(DiscretizeWeight(1.01, 10), std::invalid_argument);
  EXPECT_THROW(DiscretizeWeight(-0.01, 10), std::invalid_argument);
  EXPECT_THROW(DiscretizeWeight(0.5, 1), std::invalid_argument);
}

TEST(TrainMappingTest, AddOneSmoothedPrior) {
  Rng rng(1);
  std::vector<MappingSample> s;
  for (int i = 0; i < 100; ++i) {
    MappingSample m = Draw(rng, kTight);
    m.lambda0 = WeightVector::FromFirst(0.75);
    s.push_back(m);
  }
  const MappingModel model = TrainMapping(s, 10);
  EXPECT_NEAR(model.h1.prior[7], 101.0 / 110.0, 1e-15);
  for (int b = 0; b < 10; ++b) {
    if (b != 7) {
      EXPECT_NEAR(model.h1.prior[b], 1.0 / 110.0, 1e-15);
    }
  }
  EXPECT_NO_THROW(model.Validate());
}

TEST(TrainMappingTest, SingleRegimeInfersItsBin) {
  Rng rng(2);
  std::vector<MappingSample> s;
  for (int i = 0; i < 100; ++i) {
    MappingSample m = Draw(rng, kTight);
    m.lambda0 = WeightVector::FromFirst(0.75);
    s.push_back(m);
  }
  const MappingModel model = TrainMapping(s, 10);
  for (int i = 0; i < 50; ++i) {
    const auto w = InferWeights(model, Draw(rng, kOpen).obs);
    EXPECT_NEAR(w.lambda0.w1, 0.75, 0.05);
  }
}

TEST(TrainMappingTest, EmptyBinsUseGlobalStatistics) {
  Rng rng(3);
  const MappingModel model = TrainMapping(TwoRegimes(rng, 20), 10);
  for (const auto& g : model.h1.emissions[0]) {
    EXPECT_NEAR(g.mean, 0.0, 1e-12);
    EXPECT_NEAR(g.var, 1.0, 1e-12);
  }
}

TEST(TrainMappingTest, TooFewSamplesSaysReduceBins) {
  Rng rng(4);
  const auto s = TwoRegimes(rng, 2);
  try {
    TrainMapping(s, 10);
    FAIL() << "expected an error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("reduce the bin count"), std::string::npos);
  }
}

TEST(TrainMappingTest, ConstantDimensionKeepsUnitScale) {
  Rng rng(5);
  std::vector<MappingSample> s = TwoRegimes(rng, 10);
  for (auto& m : s) m.obs.d01_y = 3.75;
  const MappingModel model = TrainMapping(s, 10);
  EXPECT_EQ(model.obs_std[EnvironmentObservation::kD01Y], 1.0);
  for (const auto& row : model.h1.emissions) {
    for (const auto& g : row) EXPECT_GE(g.var, model.variance_floor);
  }
}

TEST(InferWeightsTest, TwoRegimesSeparate) {
  Rng rng(6);
  const MappingModel model = TrainMapping(TwoRegimes(rng, 150), 10);
  const auto tight = InferWeights(model, kTight.center);
  EXPECT_GT(tight.posterior0[DiscretizeWeight(kTight.lambda0, 10)], 0.9);
  EXPECT_NEAR(tight.lambda0.w1, kTight.lambda0, 0.05);
  EXPECT_NEAR(tight.lambda1.w1, kTight.lambda1, 0.05);
  const auto open = InferWeights(model, kOpen.center);
  EXPECT_GT(open.posterior0[DiscretizeWeight(kOpen.lambda0, 10)], 0.9);
  EXPECT_NEAR(open.lambda0.w1, kOpen.lambda0, 0.05);
  EXPECT_NEAR(open.lambda1.w1, kOpen.lambda1, 0.05);

  int own = 0;
  for (int i = 0; i < 100; ++i) {
    const MappingSample held = Draw(rng, i % 2 ? kTight : kOpen);
    const auto w = InferWeights(model, held.obs);
    const int want = DiscretizeWeight(held.lambda0.w1, 10);
    own += w.posterior0[want] > 0.9 ? 1 : 0;
  }
  EXPECT_EQ(own, 100);
}

TEST(InferWeightsTest, UniformModelGivesMidpoint) {
  const MappingModel model = UniformMappingModel(10);
  const auto w = InferWeights(model, Obs(1, 2, 3, 4, 5));
  EXPECT_NEAR(w.lambda0.w1, 0.5, 1e-12);
  EXPECT_NEAR(w.lambda1.w1, 0.5, 1e-12);
  for (double p : w.posterior0) EXPECT_NEAR(p, 0.1, 1e-12);
}

TEST(InferWeightsTest, FarOutlierStaysNormalized) {
  Rng rng(7);
  const MappingModel model = TrainMapping(TwoRegimes(rng, 30), 10);
  const auto w = InferWeights(model, Obs(1e4, -1e4, 1e5, 0, 1e3));
  EXPECT_NEAR(std::accumulate(w.posterior0.begin(), w.posterior0.end(), 0.0), 1.0, 1e-9);
  EXPECT_NEAR(std::accumulate(w.posterior1.begin(), w.posterior1.end(), 0.0), 1.0, 1e-9);
  EXPECT_TRUE(w.lambda0.OnSimplex());
}

TEST(MappingModelTest, StandardizationReproducesTrainingStatistics) {
  Rng rng(8);
  const auto s = TwoRegimes(rng, 40);
  const MappingModel model = TrainMapping(s, 10);
  std::array<double, EnvironmentObservation::kDims> mean{};
  for (const auto& m : s) {
    const auto z = model.Standardize(m.obs);
    for (int k = 0; k < EnvironmentObservation::kDims; ++k) mean[k] += z[k];
  }
  for (double v : mean) EXPECT_NEAR(v / static_cast<double>(s.size()), 0.0, 1e-12);
}

TEST(MappingModelTest, ValidateCatchesCorruption) {
  MappingModel m = UniformMappingModel(4);
  EXPECT_NO_THROW(m.Validate());
  m.h1.prior[0] += 0.1;
  EXPECT_THROW(m.Validate(), std::invalid_argument);
  m = UniformMappingModel(4);
  m.h2.emissions[1][0].var = 1e-9;
  EXPECT_THROW(m.Validate(), std::invalid_argument);
  m = UniformMappingModel(4);
  m.obs_std[2] = 0;
  EXPECT_THROW(m.Validate(), std::invalid_argument);
}

KinematicContext Context() {
  KinematicContext c;
  c.gap_init = 15;
  c.gap_ahead = 50;
  c.v0 = 28;
  c.v1 = 27;
  return c;
}

TEST(AdaptiveDecideTest, ComposesInferenceAndDirectGame) {
  Rng rng(9);
  const MappingModel model = TrainMapping(TwoRegimes(rng, 100), 10);
  const NormalizationConstants norms;
  const KinematicContext ctx = Context();
  const auto w = InferWeights(model, kTight.center);
  const auto [f0, f1] = BuildFeatureMatrices(ctx, norms);
  const auto direct = SolveEquilibrium(BuildPayoffs(f0, w.lambda0), BuildPayoffs(f1, w.lambda1));
  const auto d = AdaptiveDecide(model, ctx, kTight.center, norms);
  EXPECT_EQ(d.equilibrium.sigma0, direct.sigma0);
  EXPECT_EQ(d.equilibrium.sigma1, direct.sigma1);
  EXPECT_EQ(d.lambda0, w.lambda0);
  EXPECT_EQ(d.q0, Decide(direct.sigma0));
}

TEST(AdaptiveDecideTest, UniformModelMatchesMidpointWeights) {
  const MappingModel model = UniformMappingModel(10);
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    const KinematicContext ctx = testing::RandomContext(rng);
    const auto a = AdaptiveDecide(model, ctx, Obs(1, 0, 10, 50, 20), {});
    const auto b = DecideWithWeights(ctx, {0.5, 0.5}, {0.5, 0.5}, {});
    EXPECT_EQ(a.q0, b.q0);
    EXPECT_EQ(a.q1, b.q1);
    EXPECT_NEAR(a.equilibrium.sigma0.p, b.equilibrium.sigma0.p, 1e-9);
  }
}

TEST(AdaptiveDecideTest, DegenerateFlagPropagates) {
  KinematicContext ctx = Context();
  ctx.v1 = ctx.v0;
  ctx.jerk0_mag = 0;
  ctx.jerk1_mag = 0;
  const auto d = AdaptiveDecide(UniformMappingModel(), ctx, Obs(1, 0, 10, 50, 20), {});
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.q0, ActionLabel::kYield);
}

}  // namespace
}  // namespace adaptmerge
