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

#include "adaptmerge/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace adaptmerge {

namespace {

constexpr double kRelTieTol = 1e-12;
constexpr double kTieBreakTol = 1e-12;

double Scale(const PayoffMatrix& m) {
  double s = 0.0;
  for (const auto& row : m.u) {
    for (double x : row) s = std::max(s, std::abs(x));
  }
  return s;
}

// Row advantage of NYield over Yield for P0 against each P1 column, and the
// column advantage for P1 against each P0 row.
struct Advantages {
  std::array<double, 2> p0;  // u0[0][k] - u0[1][k]
  std::array<double, 2> p1;  // u1[j][0] - u1[j][1]
  double tol0;
  double tol1;
};

Advantages ComputeAdvantages(const PayoffMatrix& u0, const PayoffMatrix& u1) {
  Advantages a;
  for (int k = 0; k < 2; ++k) a.p0[k] = u0.u[0][k] - u0.u[1][k];
  for (int j = 0; j < 2; ++j) a.p1[j] = u1.u[j][0] - u1.u[j][1];
  a.tol0 = kRelTieTol * Scale(u0);
  a.tol1 = kRelTieTol * Scale(u1);
  return a;
}

bool IsZero(double x, double tol) { return std::abs(x) <= tol; }

// Best response probability of NYield given an advantage of NYield over Yield.
double BestResponse(double advantage, double tol) {
  if (advantage > tol) return 1.0;
  if (advantage < -tol) return 0.0;
  return 0.5;
}

bool StrictlyDominant(const std::array<double, 2>& adv, double tol) {
  return (adv[0] > tol && adv[1] > tol) || (adv[0] < -tol && adv[1] < -tol);
}

EquilibriumSolution Finish(MixedStrategy s0, MixedStrategy s1, EquilibriumKind kind,
                           const PayoffMatrix& u0, const PayoffMatrix& u1) {
  EquilibriumSolution sol;
  sol.sigma0 = s0;
  sol.sigma1 = s1;
  sol.v0 = ExpectedPayoff(u0, s0, s1);
  sol.v1 = ExpectedPayoff(u1, s0, s1);
  sol.kind = kind;
  return sol;
}

}  // namespace

bool WeightVector::OnSimplex(double tol) const {
  return std::isfinite(w1) && std::isfinite(w2) && w1 >= -tol && w2 >= -tol &&
         std::abs(w1 + w2 - 1.0) <= tol;
}

std::string_view ToString(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::kPureDominant:
      return "PureDominant";
    case EquilibriumKind::kPureBestResponse:
      return "PureBestResponse";
    case EquilibriumKind::kMixedInterior:
      return "MixedInterior";
    case EquilibriumKind::kDegenerate:
      return "Degenerate";
  }
  return "Degenerate";
}

std::pair<FeatureMatrix, FeatureMatrix> BuildFeatureMatrices(const KinematicContext& ctx,
                                                             const NormalizationConstants& norms,
                                                             const AccelBounds& bounds) {
  ctx.Validate();
  norms.Validate();
  FeatureMatrix f0{.player = Player::kP0};
  FeatureMatrix f1{.player = Player::kP1};
  const double v0_floor = std::max(ctx.v0, kMinFeatureSpeed);
  const double v1_floor = std::max(ctx.v1, kMinFeatureSpeed);
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const ActionLabel q0 = ActionFromIndex(j);
      const ActionLabel q1 = ActionFromIndex(k);
      const double a0_des = FeasibleAcceleration(ctx.a0, ctx.jerk0_mag, ctx.horizon, q0, bounds);
      const double a1_des = FeasibleAcceleration(ctx.a1, ctx.jerk1_mag, ctx.horizon, q1, bounds);
      const double v0_des = FeasibleSpeed(ctx.v0, a0_des, ctx.horizon);
      const double v1_des = FeasibleSpeed(ctx.v1, a1_des, ctx.horizon);
      const double gap = PredictedGap(ctx.gap_init, v0_des, v1_des, a0_des, a1_des, ctx.horizon);
      f0.cells[j][k] = {gap / (v0_floor * norms.t_norm), v0_des / norms.v_norm};
      f1.cells[j][k] = {ctx.gap_ahead / (v1_floor * norms.t_norm), gap / norms.d_norm};
    }
  }
  return {f0, f1};
}

PayoffMatrix BuildPayoffs(const FeatureMatrix& features, const WeightVector& weights) {
  PayoffMatrix m{.player = features.player};
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const Feature& f = features.cells[j][k];
      m.u[j][k] = weights.w1 * f[0] + weights.w2 * f[1];
    }
  }
  return m;
}

double ExpectedPayoff(const PayoffMatrix& u, MixedStrategy sigma0, MixedStrategy sigma1) {
  double v = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) v += sigma0.prob(j) * u.u[j][k] * sigma1.prob(k);
  }
  return v;
}

EquilibriumSolution SolveEquilibrium(const PayoffMatrix& u0, const PayoffMatrix& u1) {
  for (const PayoffMatrix* m : {&u0, &u1}) {
    for (const auto& row : m->u) {
      for (double x : row) {
        if (!std::isfinite(x)) throw std::invalid_argument("payoff matrix has non-finite entry");
      }
    }
  }
  const Advantages adv = ComputeAdvantages(u0, u1);
  const bool degenerate0 = IsZero(adv.p0[0], adv.tol0) && IsZero(adv.p0[1], adv.tol0);
  const bool degenerate1 = IsZero(adv.p1[0], adv.tol1) && IsZero(adv.p1[1], adv.tol1);

  if (degenerate0 || degenerate1) {
    MixedStrategy s0{0.5};
    MixedStrategy s1{0.5};
    if (degenerate0 && !degenerate1) {
      // P1 best-responds to the uniform P0.
      s1.p = BestResponse(0.5 * (adv.p1[0] + adv.p1[1]), adv.tol1);
    } else if (degenerate1 && !degenerate0) {
      s0.p = BestResponse(0.5 * (adv.p0[0] + adv.p0[1]), adv.tol0);
    }
    return Finish(s0, s1, EquilibriumKind::kDegenerate, u0, u1);
  }

  struct Profile {
    int j;
    int k;
  };
  std::vector<Profile> pure;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      // Row j is a best response to column k and vice versa.
      const double row_gain = j == 0 ? adv.p0[k] : -adv.p0[k];
      const double col_gain = k == 0 ? adv.p1[j] : -adv.p1[j];
      if (row_gain >= -adv.tol0 && col_gain >= -adv.tol1) pure.push_back({j, k});
    }
  }

  const auto pure_solution = [&](const Profile& pr) {
    const bool dominant =
        StrictlyDominant(adv.p0, adv.tol0) || StrictlyDominant(adv.p1, adv.tol1);
    return Finish(MixedStrategy::Pure(ActionFromIndex(pr.j)),
                  MixedStrategy::Pure(ActionFromIndex(pr.k)),
                  dominant ? EquilibriumKind::kPureDominant : EquilibriumKind::kPureBestResponse,
                  u0, u1);
  };

  if (pure.size() == 1) return pure_solution(pure.front());

  // Interior candidate from the indifference conditions: sigma1 makes P0
  // indifferent between rows, sigma0 makes P1 indifferent between columns.
  const double den0 = adv.p0[1] - adv.p0[0];
  const double den1 = adv.p1[1] - adv.p1[0];
  const bool interior_exists = std::abs(den0) > adv.tol0 && std::abs(den1) > adv.tol1;
  if (interior_exists) {
    const double q = adv.p0[1] / den0;
    const double p = adv.p1[1] / den1;
    constexpr double kSlack = 1e-12;
    if (p >= -kSlack && p <= 1.0 + kSlack && q >= -kSlack && q <= 1.0 + kSlack) {
      return Finish(MixedStrategy{std::clamp(p, 0.0, 1.0)}, MixedStrategy{std::clamp(q, 0.0, 1.0)},
                    EquilibriumKind::kMixedInterior, u0, u1);
    }
  }

  if (!pure.empty()) {
    // Non-generic ties: payoff-dominant pure profile, enumeration order breaks ties.
    const Profile* best = &pure.front();
    double best_sum = u0.u[best->j][best->k] + u1.u[best->j][best->k];
    for (const Profile& pr : pure) {
      const double s = u0.u[pr.j][pr.k] + u1.u[pr.j][pr.k];
      if (s > best_sum + kTieBreakTol) {
        best = &pr;
        best_sum = s;
      }
    }
    return pure_solution(*best);
  }

  // Unreachable for finite games: no pure equilibrium implies both
  // indifference denominators are nonzero.
  throw std::logic_error("support enumeration found no equilibrium");
}

double EquilibriumObjective(MixedStrategy sigma0, MixedStrategy sigma1, const PayoffMatrix& u0,
                            const PayoffMatrix& u1, double v0, double v1) {
  double z = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const double w = sigma0.prob(j) * sigma1.prob(k);
      z += w * u0.u[j][k] + w * u1.u[j][k];
    }
  }
  return z - v0 - v1;
}

DeviationGain MaxDeviationGain(MixedStrategy sigma0, MixedStrategy sigma1, const PayoffMatrix& u0,
                               const PayoffMatrix& u1) {
  const double v0 = ExpectedPayoff(u0, sigma0, sigma1);
  const double v1 = ExpectedPayoff(u1, sigma0, sigma1);
  double best0 = -std::numeric_limits<double>::infinity();
  double best1 = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < 2; ++a) {
    const MixedStrategy pure = MixedStrategy::Pure(ActionFromIndex(a));
    best0 = std::max(best0, ExpectedPayoff(u0, pure, sigma1));
    best1 = std::max(best1, ExpectedPayoff(u1, sigma0, pure));
  }
  return {best0 - v0, best1 - v1};
}

ActionLabel Decide(MixedStrategy sigma) {
  if (std::abs(sigma.p - 0.5) <= 1e-12) return ActionLabel::kYield;
  return sigma.p > 0.5 ? ActionLabel::kNYield : ActionLabel::kYield;
}

}  // namespace adaptmerge
