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

namespace adaptmerge {

/// Environment variables observed at one timestep; they feed the mapping
/// model. Groups: {d01_y, dv01_x} lateral/relative motion, {d01_x}
/// longitudinal gap, {d_ahead, dv01_x, v1_x} ramp-vehicle constraints.
struct EnvironmentObservation {
  double d01_y = 0.0;    // m, lateral gap between P0 and P1
  double dv01_x = 0.0;   // m/s, longitudinal speed of P1 minus that of P0
  double d01_x = 0.0;    // m, longitudinal bumper gap
  double d_ahead = 0.0;  // m, free distance ahead of P1
  double v1_x = 0.0;     // m/s, P1 longitudinal speed

  static constexpr int kDims = 5;
  enum Dim { kD01Y = 0, kDv01X = 1, kD01X = 2, kDAhead = 3, kV1X = 4 };

  std::array<double, kDims> AsArray() const { return {d01_y, dv01_x, d01_x, d_ahead, v1_x}; }

  bool operator==(const EnvironmentObservation&) const = default;
};

}  // namespace adaptmerge
