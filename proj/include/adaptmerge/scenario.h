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

#include <string_view>

namespace adaptmerge {

/// Longitudinal interaction action of one vehicle in a merging conflict.
///
/// Matrix index convention used everywhere in this library: index 0 is
/// NYield, index 1 is Yield.
enum class ActionLabel { kNYield = 0, kYield = 1 };

inline constexpr int ActionIndex(ActionLabel a) { return static_cast<int>(a); }
inline constexpr ActionLabel ActionFromIndex(int i) {
  return i == 0 ? ActionLabel::kNYield : ActionLabel::kYield;
}

std::string_view ToString(ActionLabel a);
/// Accepts "Yield" / "NYield"; throws std::invalid_argument otherwise.
ActionLabel ParseActionLabel(std::string_view s);

struct AccelBounds {
  double min = -4.0;  // m/s^2
  double max = 3.0;   // m/s^2
};

/// Physical state of the interacting pair at one timestep. P0 is the
/// main-road vehicle, P1 the ramp vehicle.
struct KinematicContext {
  double gap_init = 0.0;   // m, bumper gap P0 -> P1
  double gap_ahead = 0.0;  // m, P1 to preceding vehicle or ramp end
  double v0 = 0.0;         // m/s
  double v1 = 0.0;         // m/s
  double a0 = 0.0;         // m/s^2
  double a1 = 0.0;         // m/s^2
  double jerk0_mag = 1.0;  // m/s^3
  double jerk1_mag = 1.0;  // m/s^3
  double horizon = 1.0;    // s

  bool IsValid() const;
  /// Throws std::invalid_argument naming the first violated invariant.
  void Validate() const;
  bool operator==(const KinematicContext&) const = default;
};

struct NormalizationConstants {
  double t_norm = 5.0;    // s
  double v_norm = 33.33;  // m/s
  double d_norm = 100.0;  // m

  void Validate() const;
};

/// Acceleration reachable within `horizon` under `action`, clamped to
/// `bounds`. NYield raises the acceleration by jerk*horizon, Yield lowers it.
double FeasibleAcceleration(double a_current, double jerk_mag, double horizon,
                            ActionLabel action, const AccelBounds& bounds = {});

/// Speed after applying `a_des` for `horizon`; floored at standstill.
double FeasibleSpeed(double v_current, double a_des, double horizon);

/// Predicted bumper gap after `horizon`. The velocity term keeps its 0.5
/// coefficient. Floored at 0; a zero result means predicted contact.
double PredictedGap(double gap_init, double v0_des, double v1_des,
                    double a0_des, double a1_des, double horizon);

}  // namespace adaptmerge
