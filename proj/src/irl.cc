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

#include "adaptmerge/irl.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaptmerge {

namespace {

double Norm(const Feature& g) { return std::hypot(g[0], g[1]); }

Feature Sub(const Feature& a, const Feature& b) { return {a[0] - b[0], a[1] - b[1]}; }

}  // namespace

void IrlConfig::Validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("irl: step must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("irl: tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("irl: max_iters must be >= 1");
  if (!init0.OnSimplex() || !init1.OnSimplex()) {
    throw std::invalid_argument("irl: initial weights must lie on the simplex");
  }
}

Feature ExpectedFeatures(const FeatureMatrix& features, MixedStrategy sigma0,
                         MixedStrategy sigma1) {
  Feature out{0.0, 0.0};
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const double w = sigma0.prob(j) * sigma1.prob(k);
      out[0] += w * features.cells[j][k][0];
      out[1] += w * features.cells[j][k][1];
    }
  }
  return out;
}

Feature EmpiricalFeatures(const FeatureMatrix& features, const Demonstration& demo) {
  return features.at(demo.action0, demo.action1);
}

WeightVector ProjectToSimplex(const Feature& raw) {
  if (!std::isfinite(raw[0]) || !std::isfinite(raw[1])) {
    throw std::invalid_argument("simplex projection of non-finite vector");
  }
  // The simplex is the segment w1 + w2 = 1; move along its normal, then clamp.
  const double w1 = std::clamp(0.5 * (raw[0] - raw[1] + 1.0), 0.0, 1.0);
  return {w1, 1.0 - w1};
}

WeightVector GradientStep(const WeightVector& weights, const Feature& gradient, double step,
                          UpdateDirection direction) {
  const double sign = direction == UpdateDirection::kFeatureMatching ? 1.0 : -1.0;
  return ProjectToSimplex(
      {weights.w1 + sign * step * gradient[0], weights.w2 + sign * step * gradient[1]});
}

FeatureGradients ComputeGradients(const FeatureMatrix& f0, const FeatureMatrix& f1,
                                  const WeightVector& lambda0, const WeightVector& lambda1,
                                  const Demonstration& demo) {
  FeatureGradients out;
  out.equilibrium = SolveEquilibrium(BuildPayoffs(f0, lambda0), BuildPayoffs(f1, lambda1));
  const auto& eq = out.equilibrium;
  out.g0 = Sub(EmpiricalFeatures(f0, demo), ExpectedFeatures(f0, eq.sigma0, eq.sigma1));
  out.g1 = Sub(EmpiricalFeatures(f1, demo), ExpectedFeatures(f1, eq.sigma0, eq.sigma1));
  out.norm0 = Norm(out.g0);
  out.norm1 = Norm(out.g1);
  return out;
}

IrlResult OptimizeWeights(const Demonstration& demo, const NormalizationConstants& norms,
                          const IrlConfig& cfg, const AccelBounds& bounds,
                          std::vector<IrlIterate>* trace) {
  cfg.Validate();
  const auto [f0, f1] = BuildFeatureMatrices(demo.ctx, norms, bounds);

  IrlResult result;
  WeightVector lambda0 = cfg.init0;
  WeightVector lambda1 = cfg.init1;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const FeatureGradients g = ComputeGradients(f0, f1, lambda0, lambda1, demo);
    if (trace) trace->push_back({lambda0, lambda1, g.norm0, g.norm1});
    result.iterations = it;
    result.grad_norm0 = g.norm0;
    result.grad_norm1 = g.norm1;
    if (g.norm0 <= cfg.tol && g.norm1 <= cfg.tol) {
      result.converged = true;
      break;
    }
    lambda0 = GradientStep(lambda0, g.g0, cfg.step, cfg.direction);
    lambda1 = GradientStep(lambda1, g.g1, cfg.step, cfg.direction);
  }
  if (!result.converged) {
    // Report the residual at the weights actually returned.
    const FeatureGradients g = ComputeGradients(f0, f1, lambda0, lambda1, demo);
    result.grad_norm0 = g.norm0;
    result.grad_norm1 = g.norm1;
  }
  result.lambda0 = lambda0;
  result.lambda1 = lambda1;
  return result;
}

std::vector<std::pair<WeightVector, WeightVector>> AverageOverWindow(
    std::span<const std::pair<WeightVector, WeightVector>> weights, int window) {
  if (window < 1) throw std::invalid_argument("averaging window must be >= 1");
  std::vector<std::pair<WeightVector, WeightVector>> out;
  out.reserve(weights.size());
  const int n = static_cast<int>(weights.size());
  const int half = (window - 1) / 2;
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i - half + window - 1);
    double s0 = 0.0;
    double s1 = 0.0;
    for (int t = lo; t <= hi; ++t) {
      s0 += weights[t].first.w1;
      s1 += weights[t].second.w1;
    }
    const double count = hi - lo + 1;
    out.emplace_back(WeightVector::FromFirst(s0 / count), WeightVector::FromFirst(s1 / count));
  }
  return out;
}

}  // namespace adaptmerge
