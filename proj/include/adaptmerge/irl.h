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

#include <optional>
#include <span>
#include <vector>

#include "adaptmerge/game.h"
#include "adaptmerge/scenario.h"

namespace adaptmerge {

/// One demonstrated joint action at a single timestep.
struct Demonstration {
  KinematicContext ctx;
  ActionLabel action0 = ActionLabel::kYield;
  ActionLabel action1 = ActionLabel::kYield;
};

/// Sign applied to the feature gradient g = empirical - expected.
enum class UpdateDirection {
  /// lambda <- lambda + step * g. Moves the equilibrium's expected features
  /// toward the demonstrated ones; this is the default.
  kFeatureMatching,
  /// lambda <- lambda - step * g. Drives the weights away from the
  /// demonstration and only terminates through max_iters unless the initial
  /// weights already reproduce it.
  kLiteral,
};

struct IrlConfig {
  double step = 0.1;
  double tol = 1e-3;
  int max_iters = 500;
  WeightVector init0{0.5, 0.5};
  WeightVector init1{0.5, 0.5};
  UpdateDirection direction = UpdateDirection::kFeatureMatching;

  void Validate() const;
};

/// Sum over joint actions of sigma0(j) * sigma1(k) * f^{jk}.
Feature ExpectedFeatures(const FeatureMatrix& features, MixedStrategy sigma0,
                         MixedStrategy sigma1);

/// The feature cell selected by the demonstrated joint action.
Feature EmpiricalFeatures(const FeatureMatrix& features, const Demonstration& demo);

/// Euclidean projection of `raw` onto {w >= 0, w1 + w2 = 1}.
WeightVector ProjectToSimplex(const Feature& raw);

/// One projected gradient update of `weights`.
WeightVector GradientStep(const WeightVector& weights, const Feature& gradient, double step,
                          UpdateDirection direction);

struct FeatureGradients {
  Feature g0{};
  Feature g1{};
  double norm0 = 0.0;
  double norm1 = 0.0;
  EquilibriumSolution equilibrium;
};

/// Gradients of both players at the given weights for precomputed features.
FeatureGradients ComputeGradients(const FeatureMatrix& f0, const FeatureMatrix& f1,
                                  const WeightVector& lambda0, const WeightVector& lambda1,
                                  const Demonstration& demo);

struct IrlResult {
  WeightVector lambda0;
  WeightVector lambda1;
  int iterations = 0;
  bool converged = false;
  double grad_norm0 = 0.0;
  double grad_norm1 = 0.0;
};

struct IrlIterate {
  WeightVector lambda0;
  WeightVector lambda1;
  double grad_norm0;
  double grad_norm1;
};

/// Expected-feature matching for one timestep. Iterates while either
/// player's gradient norm exceeds cfg.tol, up to cfg.max_iters gradient
/// evaluations. Non-convergence is reported, never thrown. If `trace` is
/// given, every evaluated iterate is appended to it.
IrlResult OptimizeWeights(const Demonstration& demo, const NormalizationConstants& norms,
                          const IrlConfig& cfg, const AccelBounds& bounds = {},
                          std::vector<IrlIterate>* trace = nullptr);

/// Centered moving average of per-timestep weights over `window` samples
/// (window 1 returns the input). The result stays on the simplex.
std::vector<std::pair<WeightVector, WeightVector>> AverageOverWindow(
    std::span<const std::pair<WeightVector, WeightVector>> weights, int window);

}  // namespace adaptmerge
