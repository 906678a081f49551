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

#include "adaptmerge/mapping_model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace adaptmerge {

namespace {

constexpr double kMinStd = 1e-12;

using Dim = EnvironmentObservation::Dim;

LatentModel MakeLatent(std::string name, std::vector<int> dims, int bins) {
  LatentModel m;
  m.name = std::move(name);
  m.dims = std::move(dims);
  m.prior.assign(bins, 1.0 / bins);
  m.emissions.assign(bins, std::vector<Gaussian>(m.dims.size(), Gaussian{0.0, 1.0}));
  return m;
}

LatentModel FitLatent(std::string name, std::vector<int> dims, int bins, double var_floor,
                      const std::vector<std::array<double, EnvironmentObservation::kDims>>& z,
                      const std::vector<int>& bin_of) {
  LatentModel m = MakeLatent(std::move(name), std::move(dims), bins);
  const std::size_t n = z.size();
  const std::size_t d = m.dims.size();

  std::vector<double> count(bins, 0.0);
  std::vector<std::vector<double>> sum(bins, std::vector<double>(d, 0.0));
  std::vector<double> global_sum(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    count[bin_of[i]] += 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      sum[bin_of[i]][k] += z[i][m.dims[k]];
      global_sum[k] += z[i][m.dims[k]];
    }
  }
  std::vector<Gaussian> global(d);
  for (std::size_t k = 0; k < d; ++k) global[k].mean = global_sum[k] / n;
  std::vector<std::vector<double>> sq(bins, std::vector<double>(d, 0.0));
  std::vector<double> global_sq(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const int b = bin_of[i];
    for (std::size_t k = 0; k < d; ++k) {
      const double x = z[i][m.dims[k]];
      const double db = x - sum[b][k] / count[b];
      const double dg = x - global[k].mean;
      sq[b][k] += db * db;
      global_sq[k] += dg * dg;
    }
  }
  for (std::size_t k = 0; k < d; ++k) global[k].var = std::max(var_floor, global_sq[k] / n);

  for (int b = 0; b < bins; ++b) {
    m.prior[b] = (count[b] + 1.0) / (static_cast<double>(n) + bins);
    for (std::size_t k = 0; k < d; ++k) {
      if (count[b] == 0.0) {
        m.emissions[b][k] = global[k];
      } else {
        m.emissions[b][k] = {sum[b][k] / count[b], std::max(var_floor, sq[b][k] / count[b])};
      }
    }
  }
  return m;
}

std::vector<double> Posterior(const LatentModel& m,
                              const std::array<double, EnvironmentObservation::kDims>& z) {
  const std::size_t bins = m.prior.size();
  std::vector<double> logp(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    double lp = std::log(m.prior[b]);
    for (std::size_t k = 0; k < m.dims.size(); ++k) {
      const Gaussian& g = m.emissions[b][k];
      const double r = z[m.dims[k]] - g.mean;
      lp += -0.5 * (std::log(2.0 * std::numbers::pi * g.var) + r * r / g.var);
    }
    logp[b] = lp;
  }
  const double mx = *std::max_element(logp.begin(), logp.end());
  double total = 0.0;
  for (double& v : logp) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : logp) v /= total;
  return logp;
}

double PosteriorMean(const std::vector<double>& post, const std::vector<double>& centers) {
  double w = 0.0;
  for (std::size_t b = 0; b < post.size(); ++b) w += post[b] * centers[b];
  return std::clamp(w, 0.0, 1.0);
}

}  // namespace

int DiscretizeWeight(double w1, int bins) {
  if (bins < 2) throw std::invalid_argument("discretize: need at least 2 bins");
  if (!(w1 >= 0.0 && w1 <= 1.0)) throw std::invalid_argument("discretize: weight outside [0, 1]");
  return std::min(bins - 1, static_cast<int>(std::floor(w1 * bins)));
}

double BinCenter(int bin, int bins) { return (bin + 0.5) / bins; }

void MappingModel::Validate() const {
  if (bins < 2) throw std::invalid_argument("mapping model: bins must be >= 2");
  if (static_cast<int>(bin_centers.size()) != bins) {
    throw std::invalid_argument("mapping model: bin_centers size mismatch");
  }
  for (const LatentModel* m : {&h1, &h2}) {
    if (static_cast<int>(m->prior.size()) != bins ||
        static_cast<int>(m->emissions.size()) != bins) {
      throw std::invalid_argument("mapping model: latent " + m->name + " has wrong bin count");
    }
    double total = 0.0;
    for (double p : m->prior) {
      if (!(p > 0.0)) throw std::invalid_argument("mapping model: non-positive prior");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("mapping model: priors of " + m->name + " do not sum to 1");
    }
    for (int d : m->dims) {
      if (d < 0 || d >= EnvironmentObservation::kDims) {
        throw std::invalid_argument("mapping model: bad observation dimension");
      }
    }
    for (const auto& row : m->emissions) {
      if (row.size() != m->dims.size()) {
        throw std::invalid_argument("mapping model: emission size mismatch");
      }
      for (const Gaussian& g : row) {
        if (!(g.var >= variance_floor) || !std::isfinite(g.mean)) {
          throw std::invalid_argument("mapping model: emission variance below floor");
        }
      }
    }
  }
  for (double s : obs_std) {
    if (!(s > 0.0)) throw std::invalid_argument("mapping model: non-positive standardization");
  }
}

std::array<double, EnvironmentObservation::kDims> MappingModel::Standardize(
    const EnvironmentObservation& obs) const {
  auto z = obs.AsArray();
  for (int k = 0; k < EnvironmentObservation::kDims; ++k) z[k] = (z[k] - obs_mean[k]) / obs_std[k];
  return z;
}

MappingModel UniformMappingModel(int bins) {
  if (bins < 2) throw std::invalid_argument("mapping model: bins must be >= 2");
  MappingModel m;
  m.bins = bins;
  for (int b = 0; b < bins; ++b) m.bin_centers.push_back(BinCenter(b, bins));
  m.obs_mean.fill(0.0);
  m.obs_std.fill(1.0);
  m.h1 = MakeLatent("H1", {Dim::kD01Y, Dim::kDv01X, Dim::kD01X}, bins);
  m.h2 = MakeLatent("H2", {Dim::kDAhead, Dim::kV1X, Dim::kDv01X}, bins);
  return m;
}

MappingModel TrainMapping(std::span<const MappingSample> samples, int bins,
                          double variance_floor) {
  if (bins < 2) throw std::invalid_argument("train mapping: bins must be >= 2");
  if (static_cast<int>(samples.size()) < bins) {
    throw std::invalid_argument("train mapping: " + std::to_string(samples.size()) +
                                " samples is fewer than " + std::to_string(bins) +
                                " bins; reduce the bin count");
  }
  MappingModel m = UniformMappingModel(bins);
  m.variance_floor = variance_floor;
  const double n = static_cast<double>(samples.size());

  for (const auto& s : samples) {
    if (!s.lambda0.OnSimplex() || !s.lambda1.OnSimplex()) {
      throw std::invalid_argument("train mapping: sample weights off the simplex");
    }
    const auto x = s.obs.AsArray();
    for (int k = 0; k < EnvironmentObservation::kDims; ++k) {
      if (!std::isfinite(x[k])) throw std::invalid_argument("train mapping: non-finite observation");
      m.obs_mean[k] += x[k];
    }
  }
  for (double& v : m.obs_mean) v /= n;
  std::array<double, EnvironmentObservation::kDims> ss{};
  for (const auto& s : samples) {
    const auto x = s.obs.AsArray();
    for (int k = 0; k < EnvironmentObservation::kDims; ++k) {
      ss[k] += (x[k] - m.obs_mean[k]) * (x[k] - m.obs_mean[k]);
    }
  }
  for (int k = 0; k < EnvironmentObservation::kDims; ++k) {
    const double sd = std::sqrt(ss[k] / n);
    m.obs_std[k] = sd > kMinStd ? sd : 1.0;
  }

  std::vector<std::array<double, EnvironmentObservation::kDims>> z;
  std::vector<int> bin0;
  std::vector<int> bin1;
  z.reserve(samples.size());
  for (const auto& s : samples) {
    z.push_back(m.Standardize(s.obs));
    bin0.push_back(DiscretizeWeight(std::clamp(s.lambda0.w1, 0.0, 1.0), bins));
    bin1.push_back(DiscretizeWeight(std::clamp(s.lambda1.w1, 0.0, 1.0), bins));
  }
  m.h1 = FitLatent("H1", m.h1.dims, bins, variance_floor, z, bin0);
  m.h2 = FitLatent("H2", m.h2.dims, bins, variance_floor, z, bin1);
  return m;
}

WeightInference InferWeights(const MappingModel& model, const EnvironmentObservation& obs) {
  const auto z = model.Standardize(obs);
  WeightInference out;
  out.posterior0 = Posterior(model.h1, z);
  out.posterior1 = Posterior(model.h2, z);
  out.lambda0 = WeightVector::FromFirst(PosteriorMean(out.posterior0, model.bin_centers));
  out.lambda1 = WeightVector::FromFirst(PosteriorMean(out.posterior1, model.bin_centers));
  return out;
}

AdaptiveDecision DecideWithWeights(const KinematicContext& ctx, const WeightVector& lambda0,
                                   const WeightVector& lambda1,
                                   const NormalizationConstants& norms,
                                   const AccelBounds& bounds) {
  const auto [f0, f1] = BuildFeatureMatrices(ctx, norms, bounds);
  AdaptiveDecision d;
  d.lambda0 = lambda0;
  d.lambda1 = lambda1;
  d.equilibrium = SolveEquilibrium(BuildPayoffs(f0, lambda0), BuildPayoffs(f1, lambda1));
  d.q0 = Decide(d.equilibrium.sigma0);
  d.q1 = Decide(d.equilibrium.sigma1);
  d.degenerate = d.equilibrium.kind == EquilibriumKind::kDegenerate;
  return d;
}

AdaptiveDecision AdaptiveDecide(const MappingModel& model, const KinematicContext& ctx,
                                const EnvironmentObservation& obs,
                                const NormalizationConstants& norms,
                                const AccelBounds& bounds) {
  const WeightInference w = InferWeights(model, obs);
  return DecideWithWeights(ctx, w.lambda0, w.lambda1, norms, bounds);
}

}  // namespace adaptmerge
