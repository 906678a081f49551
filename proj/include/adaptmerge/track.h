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

#include <cstdint>
#include <optional>
#include <vector>

namespace adaptmerge {

/// One recorded sample of a vehicle.
struct TrackPoint {
  std::int64_t frame = 0;
  double x = 0.0;  // m, longitudinal
  double y = 0.0;  // m, lateral
  double vx = 0.0;
  double vy = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  int lane_id = 0;
  // Precomputed lane-change probability, when the recording provides one.
  std::optional<double> lc_prob;

  bool operator==(const TrackPoint&) const = default;
};

/// Samples of one vehicle ordered by strictly increasing frame.
using Track = std::vector<TrackPoint>;

}  // namespace adaptmerge
