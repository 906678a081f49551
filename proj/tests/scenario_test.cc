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
#include <stdexcept>

#include "adaptmerge/scenario.h"

namespace adaptmerge {
namespace {

TEST(FeasibleAccelerationTest, NYieldRaisesByJerkTimesHorizon) {
  EXPECT_DOUBLE_EQ(FeasibleAcceleration(0.0, 1.0, 1.0, ActionLabel::kNYield, {-4, 3}), 1.0);
}

TEST(FeasibleAccelerationTest, YieldLowersByJerkTimesHorizon) {
  EXPECT_DOUBLE_EQ(FeasibleAcceleration(0.0, 1.0, 1.0, ActionLabel::kYield, {-4, 3}), -1.0);
}

TEST(FeasibleAccelerationTest, ZeroJerkKeepsAcceleration) {
  EXPECT_DOUBLE_EQ(FeasibleAcceleration(0.5, 0.0, 2.0, ActionLabel::kYield, {-4, 3}), 0.5);
}

TEST(FeasibleAccelerationTest, ClampsToBounds) {
  EXPECT_DOUBLE_EQ(FeasibleAcceleration(2.5, 1.0, 1.0, ActionLabel::kNYield, {-4, 3}), 3.0);
  EXPECT_DOUBLE_EQ(FeasibleAcceleration(-3.5, 1.0, 1.0, ActionLabel::kYield, {-4, 3}), -4.0);
}

TEST(FeasibleAccelerationTest, InvertedBoundsRejected) {
  EXPECT_THROW(FeasibleAcceleration(0.0, 1.0, 1.0, ActionLabel::kYield, {3, -4}),
               std::invalid_argument);
}

TEST(FeasibleSpeedTest, Examples) {
  EXPECT_DOUBLE_EQ(FeasibleSpeed(30, 1, 1), 31.0);
  EXPECT_DOUBLE_EQ(FeasibleSpeed(25, 0, 5), 25.0);
  EXPECT_DOUBLE_EQ(FeasibleSpeed(1, -4, 1), 0.0);
}

TEST(PredictedGapTest, Examples) {
  EXPECT_DOUBLE_EQ(PredictedGap(20, 30, 25, 0, 0, 1), 17.5);
  EXPECT_DOUBLE_EQ(PredictedGap(15, 22, 22, 0.3, 0.3, 4.0), 15.0);
  EXPECT_DOUBLE_EQ(PredictedGap(20, 30, 25, -1, 1, 2), 19.0);
}

TEST(PredictedGapTest, FlooredAtZero) {
  EXPECT_EQ(PredictedGap(1.0, 30, 10, 2, -2, 2), 0.0);
}

TEST(PredictedGapTest, UsesMagnitudeOfInitialGap) {
  EXPECT_DOUBLE_EQ(PredictedGap(-12, 20, 20, 0, 0, 1), 12.0);
}

TEST(KinematicContextTest, ValidatesEveryField) {
  KinematicContext ok;
  EXPECT_TRUE(ok.IsValid());
  KinematicContext c = ok;
  c.gap_init = -1;
  EXPECT_FALSE(c.IsValid());
  c = ok;
  c.v1 = -0.1;
  EXPECT_THROW(c.Validate(), std::invalid_argument);
  c = ok;
  c.jerk0_mag = -1;
  EXPECT_FALSE(c.IsValid());
  c = ok;
  c.horizon = 0;
  EXPECT_FALSE(c.IsValid());
  c = ok;
  c.a0 = std::nan("");
  EXPECT_FALSE(c.IsValid());
}

TEST(NormalizationConstantsTest, RejectsNonPositive) {
  NormalizationConstants n;
  EXPECT_NO_THROW(n.Validate());
  n.v_norm = 0;
  EXPECT_THROW(n.Validate(), std::invalid_argument);
}

TEST(ActionLabelTest, RoundTripsThroughText) {
  EXPECT_EQ(ParseActionLabel(ToString(ActionLabel::kYield)), ActionLabel::kYield);
  EXPECT_EQ(ParseActionLabel(ToString(ActionLabel::kNYield)), ActionLabel::kNYield);
  EXPECT_THROW(ParseActionLabel("yield"), std::invalid_argument);
  EXPECT_EQ(ActionIndex(ActionLabel::kNYield), 0);
  EXPECT_EQ(ActionFromIndex(1), ActionLabel::kYield);
}

}  // namespace
}  // namespace adaptmerge
