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
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adaptmerge/track.h"

namespace adaptmerge {

/// Raised for malformed input files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RecordingMeta {
  double frame_rate = 25.0;              // Hz
  std::vector<double> lane_markings;     // lateral positions, strictly increasing
  std::vector<int> ramp_lane_ids;
  std::optional<double> ramp_end_x;      // m
  int x_direction = 1;                   // +1 or -1

  void Validate() const;
  /// Lateral center of lane `lane_id`, where lane k (1-based) spans
  /// lane_markings[k-1]..lane_markings[k]. Empty when out of range.
  std::optional<double> LaneCenter(int lane_id) const;
  bool IsRampLane(int lane_id) const;

  bool operator==(const RecordingMeta&) const = default;
};

struct Scene {
  RecordingMeta meta;
  std::map<int, Track> tracks;

  bool operator==(const Scene&) const = default;
};

/// Parses the tracks CSV. Required columns: frame, id, x, y, xVelocity,
/// yVelocity, xAcceleration, yAcceleration, laneId. Optional: lcProb (an
/// empty cell means "not provided"). Extra columns are ignored and rows are
/// normalized by (id, frame).
std::map<int, Track> ParseTracksCsv(std::string_view text);

RecordingMeta ParseMetaJson(std::string_view text);
std::string SerializeMetaJson(const RecordingMeta& meta);

/// Writes tracks back to CSV such that ParseTracksCsv reproduces them exactly.
std::string SerializeTracksCsv(const std::map<int, Track>& tracks);

Scene LoadScene(const std::filesystem::path& tracks_path, const std::filesystem::path& meta_path);
void SaveScene(const Scene& scene, const std::filesystem::path& tracks_path,
               const std::filesystem::path& meta_path);

struct VehiclePair {
  int ego_id = 0;    // main-road vehicle P0
  int other_id = 0;  // ramp vehicle P1
  std::optional<int> lead_id;
  std::int64_t merge_frame = 0;
  int overlap_frames = 0;

  bool operator==(const VehiclePair&) const = default;
};

struct PairingReport {
  std::vector<VehiclePair> pairs;
  int ramp_vehicles = 0;
  int skipped_no_partner = 0;
  int skipped_short_overlap = 0;
};

/// Pairs each ramp vehicle with the nearest main-road vehicle behind it in
/// the target lane at its merge-approach frame (the last frame spent in a
/// ramp lane). The lead is the nearest main-road vehicle ahead in that lane.
PairingReport ExtractPairs(const Scene& scene);

const TrackPoint* FindFrame(const Track& track, std::int64_t frame);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view content);

}  // namespace adaptmerge
