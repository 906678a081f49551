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

#pragma once

#include <array>
#include <string_view>
#include <utility>

#include "adaptmerge/scenario.h"

namespace adaptmerge {

enum class Player { kP0 = 0, kP1 = 1 };

/// Reward weights of one player, kept on the unit simplex.
struct WeightVector {
  double w1 = 0.5;
  double w2 = 0.5;

  static WeightVector FromFirst(double w1) { return {w1, 1.0 - w1}; }
  bool OnSimplex(double tol = 1e-9) const;
  bool operator==(const WeightVector&) const = default;
};

using Feature = std::array<double, 2>;

/// Per joint action (row = P0's action, column = P1's action) feature
/// 2-vectors for one player. Index 0 is NYield, index 1 is Yield.
struct FeatureMatrix {
  std::array<std::array<Feature, 2>, 2> cells{};
  Player player = Player::kP0;

  const Feature& at(ActionLabel q0, ActionLabel q1) const {
    return cells[ActionIndex(q0)][ActionIndex(q1)];
  }
};

struct PayoffMatrix {
  std::array<std::array<double, 2>, 2> u{};
  Player player = Player::kP0;
};

/// Probability `p` of action index 0 (NYield); Yield gets 1 - p.
struct MixedStrategy {
  double p = 0.5;

  double prob(int index) const { return index == 0 ? p : 1.0 - p; }
  static MixedStrategy Pure(ActionLabel a) {
    return {a == ActionLabel::kNYield ? 1.0 : 0.0};
  }
  bool operator==(const MixedStrategy&) const = default;
};

enum class EquilibriumKind { kPureDominant, kPureBestResponse, kMixedInterior, kDegenerate };

std::string_view ToString(EquilibriumKind k);

struct EquilibriumSolution {
  MixedStrategy sigma0;
  MixedStrategy sigma1;
  double v0 = 0.0;
  double v1 = 0.0;
  EquilibriumKind kind = EquilibriumKind::kDegenerate;
};

/// Feature matrices for P0 and P1 over all four joint actions.
///
///   rho0 = [gap / (v0 * t_norm), v0_des / v_norm]
///   rho1 = [gap_ahead / (v1 * t_norm), gap / d_norm]
///
/// `gap` is the predicted gap of the joint action; v0 and v1 are the current
/// speeds floored at kMinFeatureSpeed.
std::pair<FeatureMatrix, FeatureMatrix> BuildFeatureMatrices(
    const KinematicContext& ctx, const NormalizationConstants& norms,
    const AccelBounds& bounds = {});

inline constexpr double kMinFeatureSpeed = 0.1;  // m/s

PayoffMatrix BuildPayoffs(const FeatureMatrix& features, const WeightVector& weights);

/// sigma0 * U * sigma1^T.
double ExpectedPayoff(const PayoffMatrix& u, MixedStrategy sigma0, MixedStrategy sigma1);

/// Mixed-strategy Nash equilibrium of the 2x2 bimatrix game by support
/// enumeration.
///
/// A unique pure equilibrium is returned as is. When the game has two pure
/// equilibria (coordination structure) the interior mixed equilibrium is
/// returned instead, so that neither pure profile is arbitrarily favoured.
/// A player whose two actions pay the same against every opponent action is
/// degenerate: it gets the uniform strategy and kind is kDegenerate.
EquilibriumSolution SolveEquilibrium(const PayoffMatrix& u0, const PayoffMatrix& u1);

/// Program objective sigma0 U0 sigma1^T - v0 + sigma0 U1 sigma1^T - v1. Zero
/// at an equilibrium whose values are the expected payoffs.
double EquilibriumObjective(MixedStrategy sigma0, MixedStrategy sigma1, const PayoffMatrix& u0,
                            const PayoffMatrix& u1, double v0, double v1);

/// Best unilateral pure-deviation gain of each player at (sigma0, sigma1).
struct DeviationGain {
  double p0 = 0.0;
  double p1 = 0.0;
};
DeviationGain MaxDeviationGain(MixedStrategy sigma0, MixedStrategy sigma1,
                               const PayoffMatrix& u0, const PayoffMatrix& u1);

/// Most likely action; an exact tie resolves to Yield.
ActionLabel Decide(MixedStrategy sigma);

}  // namespace adaptmerge
