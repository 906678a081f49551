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
#include <span>
#include <string>
#include <vector>

#include "adaptmerge/game.h"
#include "adaptmerge/observation.h"
#include "adaptmerge/scenario.h"

namespace adaptmerge {

struct Gaussian {
  double mean = 0.0;
  double var = 1.0;

  bool operator==(const Gaussian&) const = default;
};

/// Discrete weight latent with per-bin Gaussian emissions over a subset of
/// observation dimensions (standardized).
struct LatentModel {
  std::string name;
  std::vector<int> dims;                         // EnvironmentObservation::Dim values
  std::vector<double> prior;                     // [bin]
  std::vector<std::vector<Gaussian>> emissions;  // [bin][dim position]

  bool operator==(const LatentModel&) const = default;
};

/// Observation -> weight mapping. H1 explains P0's weight from ego-relative
/// geometry {d01_y, dv01_x, d01_x}; H2 explains P1's weight from the ramp
/// vehicle's constraints {d_ahead, v1_x, dv01_x}. The two latents are
/// independent naive-Bayes classifiers over uniform weight bins.
struct MappingModel {
  int bins = 10;
  std::vector<double> bin_centers;
  std::array<double, EnvironmentObservation::kDims> obs_mean{};
  std::array<double, EnvironmentObservation::kDims> obs_std{};
  double variance_floor = 1e-4;
  LatentModel h1;
  LatentModel h2;

  void Validate() const;
  std::array<double, EnvironmentObservation::kDims> Standardize(
      const EnvironmentObservation& obs) const;

  bool operator==(const MappingModel&) const = default;
};

inline constexpr double kDefaultVarianceFloor = 1e-4;
inline constexpr int kDefaultBins = 10;

/// Uniform bin of w1 in [0, 1]; w1 == 1 maps to the last bin.
int DiscretizeWeight(double w1, int bins);
double BinCenter(int bin, int bins);

struct MappingSample {
  EnvironmentObservation obs;
  WeightVector lambda0;
  WeightVector lambda1;
};

/// Fits priors (add-one smoothing) and per-bin Gaussian emissions by maximum
/// likelihood. Empty bins fall back to the global statistics.
MappingModel TrainMapping(std::span<const MappingSample> samples, int bins = kDefaultBins,
                          double variance_floor = kDefaultVarianceFloor);

/// Model with uniform priors and identical standard-normal emissions.
MappingModel UniformMappingModel(int bins = kDefaultBins);

struct WeightInference {
  WeightVector lambda0;
  WeightVector lambda1;
  std::vector<double> posterior0;
  std::vector<double> posterior1;
};

/// Posterior over each latent's bins; the point estimate is the posterior
/// mean of the bin centers.
WeightInference InferWeights(const MappingModel& model, const EnvironmentObservation& obs);

struct AdaptiveDecision {
  EquilibriumSolution equilibrium;
  ActionLabel q0 = ActionLabel::kYield;
  ActionLabel q1 = ActionLabel::kYield;
  WeightVector lambda0;
  WeightVector lambda1;
  bool degenerate = false;
};

/// Decision for given weights: payoffs, equilibrium, most likely actions.
AdaptiveDecision DecideWithWeights(const KinematicContext& ctx, const WeightVector& lambda0,
                                   const WeightVector& lambda1,
                                   const NormalizationConstants& norms,
                                   const AccelBounds& bounds = {});

/// Online decision: infer weights from `obs`, then DecideWithWeights.
AdaptiveDecision AdaptiveDecide(const MappingModel& model, const KinematicContext& ctx,
                                const EnvironmentObservation& obs,
                                const NormalizationConstants& norms,
                                const AccelBounds& bounds = {});

}  // namespace adaptmerge
