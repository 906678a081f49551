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
#include <random>
#include <string>
#include <vector>

#include "adaptmerge/data_io.h"
#include "adaptmerge/game.h"

namespace adaptmerge {

/// Seeded generator with platform-independent output (std::mt19937_64 is
/// fully specified; the conversions below avoid library distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Uniform integer in [lo, hi].
  int UniformInt(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(Next() % span);
  }
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Driving regime of a synthetic merge: planted weights plus the initial
/// state distribution it is sampled from.
struct SyntheticRegime {
  std::string name;
  WeightVector lambda0;
  WeightVector lambda1;
  Range gap;      // m, bumper gap ego -> ramp vehicle
  Range d_ahead;  // m, ramp vehicle -> lead vehicle
  Range v0;       // m/s
  Range dv;       // m/s, v1 - v0
};

/// open: large gaps, assertive weights; tight: short gaps, yielding ego;
/// mixed: mid gaps with the ego weight near its decision threshold.
std::vector<SyntheticRegime> DefaultRegimes();

struct SyntheticConfig {
  int pairs = 188;
  std::uint64_t seed = 20240501;
  std::vector<SyntheticRegime> regimes = DefaultRegimes();
  double frame_rate = 25.0;
  int frame_stride = 200;      // frames between consecutive pairs
  int lc_start_min = 60;       // frame offset at which the ramp vehicle steers
  int lc_start_max = 90;
  int tail_frames = 60;        // frames recorded after the lane change starts
  int decision_tail = 5;       // frames after the start still driven by the game
  double vehicle_length = 4.5;
  double lateral_speed = 1.0;  // m/s during the lane change
  Range jerk{0.3, 0.6};        // m/s^3
  double accel_cap = 2.8;      // m/s^2
  double accel_floor = -3.5;   // m/s^2
  NormalizationConstants norms;
};

struct SyntheticScene {
  Scene scene;
  // Per pair: regime index and the (ego, ramp, lead) track ids.
  std::vector<int> regime_of_pair;
  std::vector<int> ego_ids;
  std::vector<int> ramp_ids;
  std::vector<int> lead_ids;
};

/// One main-road lane beside one ramp lane. Each pair is time-separated from
/// the next; both vehicles accelerate according to the equilibrium action of
/// the game built from the regime's planted weights at every frame.
SyntheticScene GenerateSyntheticScene(const SyntheticConfig& cfg);

}  // namespace adaptmerge
