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
#include <span>
#include <string>
#include <vector>

#include "adaptmerge/data_io.h"
#include "adaptmerge/observation.h"
#include "adaptmerge/scenario.h"
#include "adaptmerge/track.h"

namespace adaptmerge {

/// Raised when a pair of tracks cannot be turned into an interaction sequence.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Logistic stand-in for a learned lane-change intent model.
struct LaneChangeHeuristic {
  double o_half = 0.9375;  // m, offset at which a still vehicle reaches 0.5
  double o_scale = 0.3;    // m
  double vy_scale = 0.2;   // m/s
};

/// Where the jerk magnitude of the kinematic context comes from.
enum class JerkSource {
  kNominal,   // CalibrationConfig::nominal_jerk for both vehicles
  kMeasured,  // |smoothed jerk| of the recording
};

struct CalibrationConfig {
  int smooth_window = 5;        // frames; 1 disables smoothing
  double vehicle_length = 4.5;  // m, subtracted from center distances
  double horizon = 1.0;         // s, prediction horizon of the context
  double nominal_jerk = 1.0;    // m/s^3
  JerkSource jerk_source = JerkSource::kNominal;
  LaneChangeHeuristic lane_change;
};

/// Negative acceleration yields; otherwise a positive jerk is non-yielding
/// and anything else yields.
ActionLabel LabelBehavior(double ax, double jerk);

/// Centered moving average; the window shrinks at the ends.
std::vector<double> MovingAverage(std::span<const double> values, int window);

/// Jerk from central differences (one-sided at the ends) of the optionally
/// smoothed acceleration. Throws CalibrationError with fewer than 2 samples.
std::vector<double> JerkSeries(std::span<const double> ax, double dt, int smooth_window = 1);

/// Monotone nondecreasing in both arguments, strictly inside (0, 1).
double LaneChangeProbability(double lateral_offset_toward_target, double vy_toward_target,
                             const LaneChangeHeuristic& h = {});

struct InteractionWindow {
  std::size_t end_index = 0;
  bool complete = false;
};

/// First index where prob > 0.5 and the ramp vehicle is not overtaken.
/// Falls back to the last index with complete = false.
InteractionWindow DetectInteractionWindow(std::span<const double> prob,
                                          const std::vector<bool>& overtaken);

struct SequenceFrame {
  std::int64_t frame = 0;
  KinematicContext ctx;
  EnvironmentObservation obs;
  ActionLabel label0 = ActionLabel::kYield;
  ActionLabel label1 = ActionLabel::kYield;
  // Longitudinal positions along the travel direction, used for replay.
  double s0 = 0.0;
  double s1 = 0.0;

  bool operator==(const SequenceFrame&) const = default;
};

/// One calibrated merging conflict, P0 = ego (main road), P1 = other (ramp).
struct InteractionSequence {
  int ego_id = 0;
  int other_id = 0;
  std::vector<SequenceFrame> frames;
  std::int64_t end_frame = 0;
  bool complete = false;
  double dt = 0.04;  // s between frames

  void Validate() const;
  bool operator==(const InteractionSequence&) const = default;
};

InteractionSequence CalibrateSequence(const Track& ego, const Track& other, const Track* lead,
                                      std::optional<double> ramp_end_x,
                                      const RecordingMeta& meta, const CalibrationConfig& cfg);

struct SceneCalibration {
  std::vector<InteractionSequence> sequences;
  std::vector<std::string> skipped;  // one reason per rejected pair
};

/// ExtractPairs followed by CalibrateSequence on every pair.
SceneCalibration CalibrateScene(const Scene& scene, const CalibrationConfig& cfg);

}  // namespace adaptmerge
