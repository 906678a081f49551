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

#include "adaptmerge/scenario.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adaptmerge {

std::string_view ToString(ActionLabel a) {
  return a == ActionLabel::kNYield ? "NYield" : "Yield";
}

ActionLabel ParseActionLabel(std::string_view s) {
  if (s == "NYield") return ActionLabel::kNYield;
  if (s == "Yield") return ActionLabel::kYield;
  throw std::invalid_argument("unknown action label '" + std::string(s) + "'");
}

bool KinematicContext::IsValid() const {
  const double all[] = {gap_init, gap_ahead, v0, v1, a0, a1, jerk0_mag, jerk1_mag, horizon};
  for (double x : all) {
    if (!std::isfinite(x)) return false;
  }
  return gap_init >= 0.0 && gap_ahead >= 0.0 && v0 >= 0.0 && v1 >= 0.0 &&
         jerk0_mag >= 0.0 && jerk1_mag >= 0.0 && horizon > 0.0;
}

void KinematicContext::Validate() const {
  const double all[] = {gap_init, gap_ahead, v0, v1, a0, a1, jerk0_mag, jerk1_mag, horizon};
  for (double x : all) {
    if (!std::isfinite(x)) throw std::invalid_argument("kinematic context: non-finite value");
  }
  if (gap_init < 0.0) throw std::invalid_argument("kinematic context: gap_init < 0");
  if (gap_ahead < 0.0) throw std::invalid_argument("kinematic context: gap_ahead < 0");
  if (v0 < 0.0 || v1 < 0.0) throw std::invalid_argument("kinematic context: negative speed");
  if (jerk0_mag < 0.0 || jerk1_mag < 0.0) {
    throw std::invalid_argument("kinematic context: negative jerk magnitude");
  }
  if (horizon <= 0.0) throw std::invalid_argument("kinematic context: horizon <= 0");
}

void NormalizationConstants::Validate() const {
  if (!(t_norm > 0.0) || !(v_norm > 0.0) || !(d_norm > 0.0)) {
    throw std::invalid_argument("normalization constants must be strictly positive");
  }
}

double FeasibleAcceleration(double a_current, double jerk_mag, double horizon,
                            ActionLabel action, const AccelBounds& bounds) {
  if (bounds.min > bounds.max) {
    throw std::invalid_argument("acceleration bounds: min > max");
  }
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be > 0");
  if (jerk_mag < 0.0) throw std::invalid_argument("jerk magnitude must be >= 0");
  const double step = jerk_mag * horizon;
  const double raw = action == ActionLabel::kNYield ? a_current + step : a_current - step;
  return std::clamp(raw, bounds.min, bounds.max);
}

double FeasibleSpeed(double v_current, double a_des, double horizon) {
  return std::max(0.0, v_current + a_des * horizon);
}

double PredictedGap(double gap_init, double v0_des, double v1_des, double a0_des,
                    double a1_des, double horizon) {
  const double gap = std::abs(gap_init) +
                     0.5 * (std::abs(v1_des) - std::abs(v0_des)) * horizon +
                     0.5 * (a1_des - a0_des) * horizon * horizon;
  return std::max(0.0, gap);
}

}  // namespace adaptmerge
