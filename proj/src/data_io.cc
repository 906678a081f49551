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

#include "adaptmerge/data_io.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace adaptmerge {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 9> kRequiredColumns = {
    "frame", "id", "x", "y", "xVelocity", "yVelocity", "xAcceleration", "yAcceleration", "laneId"};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      break;
    }
    out.push_back(Trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::optional<double> ToDouble(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string FormatDouble(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

void RecordingMeta::Validate() const {
  if (!(frame_rate > 0.0)) throw DataError("meta: frame_rate must be > 0");
  for (std::size_t i = 1; i < lane_markings.size(); ++i) {
    if (!(lane_markings[i] > lane_markings[i - 1])) {
      throw DataError("meta: lane_markings must be strictly increasing");
    }
  }
  if (x_direction != 1 && x_direction != -1) throw DataError("meta: x_direction must be +1 or -1");
}

std::optional<double> RecordingMeta::LaneCenter(int lane_id) const {
  if (lane_id < 1 || static_cast<std::size_t>(lane_id) >= lane_markings.size()) {
    return std::nullopt;
  }
  return 0.5 * (lane_markings[lane_id - 1] + lane_markings[lane_id]);
}

bool RecordingMeta::IsRampLane(int lane_id) const {
  return std::find(ramp_lane_ids.begin(), ramp_lane_ids.end(), lane_id) != ramp_lane_ids.end();
}

std::map<int, Track> ParseTracksCsv(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.push_back(text.substr(start, end - start));
      start = end + 1;
    }
  }
  // Skip leading blank lines; a UTF-8 BOM is tolerated on the header.
  std::size_t header_idx = 0;
  while (header_idx < lines.size() && Trim(lines[header_idx]).empty()) ++header_idx;
  if (header_idx == lines.size()) throw DataError("tracks: empty file");
  std::string_view header_line = lines[header_idx];
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
  const auto header = SplitCommas(header_line);

  std::array<std::size_t, kRequiredColumns.size()> col{};
  for (std::size_t c = 0; c < kRequiredColumns.size(); ++c) {
    const auto it = std::find(header.begin(), header.end(), kRequiredColumns[c]);
    if (it == header.end()) {
      throw DataError("tracks: missing column " + std::string(kRequiredColumns[c]));
    }
    col[c] = static_cast<std::size_t>(it - header.begin());
  }
  std::optional<std::size_t> lc_col;
  if (const auto it = std::find(header.begin(), header.end(), "lcProb"); it != header.end()) {
    lc_col = static_cast<std::size_t>(it - header.begin());
  }

  std::map<int, Track> tracks;
  std::set<std::pair<int, std::int64_t>> seen;
  for (std::size_t li = header_idx + 1; li < lines.size(); ++li) {
    if (Trim(lines[li]).empty()) continue;
    const std::size_t row = li + 1;  // 1-based line number in the file
    const auto cells = SplitCommas(lines[li]);
    const auto cell_value = [&](std::size_t idx, std::string_view name) -> double {
      if (idx >= cells.size()) {
        throw DataError("tracks: row " + std::to_string(row) + ": missing value for column " +
                        std::string(name));
      }
      const auto v = ToDouble(cells[idx]);
      if (!v) {
        throw DataError("tracks: row " + std::to_string(row) + ": non-numeric value '" +
                        std::string(cells[idx]) + "' in column " + std::string(name));
      }
      return *v;
    };
    const auto integral = [&](std::size_t idx, std::string_view name) -> std::int64_t {
      const double v = cell_value(idx, name);
      if (v != std::floor(v) || std::abs(v) > 9.0e15) {
        throw DataError("tracks: row " + std::to_string(row) + ": non-integer value in column " +
                        std::string(name));
      }
      return static_cast<std::int64_t>(v);
    };

    TrackPoint p;
    p.frame = integral(col[0], "frame");
    const auto id = static_cast<int>(integral(col[1], "id"));
    p.x = cell_value(col[2], "x");
    p.y = cell_value(col[3], "y");
    p.vx = cell_value(col[4], "xVelocity");
    p.vy = cell_value(col[5], "yVelocity");
    p.ax = cell_value(col[6], "xAcceleration");
    p.ay = cell_value(col[7], "yAcceleration");
    p.lane_id = static_cast<int>(integral(col[8], "laneId"));
    if (lc_col && *lc_col < cells.size() && !cells[*lc_col].empty()) {
      p.lc_prob = cell_value(*lc_col, "lcProb");
    }
    if (!seen.emplace(id, p.frame).second) {
      throw DataError("tracks: row " + std::to_string(row) + ": duplicate (id, frame) = (" +
                      std::to_string(id) + ", " + std::to_string(p.frame) + ")");
    }
    tracks[id].push_back(p);
  }
  if (tracks.empty()) throw DataError("tracks: empty file");
  for (auto& [id, track] : tracks) {
    std::sort(track.begin(), track.end(),
              [](const TrackPoint& a, const TrackPoint& b) { return a.frame < b.frame; });
  }
  return tracks;
}

RecordingMeta ParseMetaJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("meta: ") + e.what());
  }
  RecordingMeta meta;
  try {
    meta.frame_rate = j.at("frame_rate").get<double>();
    meta.lane_markings = j.at("lane_markings").get<std::vector<double>>();
    meta.ramp_lane_ids = j.at("ramp_lane_ids").get<std::vector<int>>();
    if (j.contains("ramp_end_x") && !j["ramp_end_x"].is_null()) {
      meta.ramp_end_x = j["ramp_end_x"].get<double>();
    }
    meta.x_direction = j.value("x_direction", 1);
  } catch (const json::exception& e) {
    throw DataError(std::string("meta: ") + e.what());
  }
  meta.Validate();
  return meta;
}

std::string SerializeMetaJson(const RecordingMeta& meta) {
  json j;
  j["frame_rate"] = meta.frame_rate;
  j["lane_markings"] = meta.lane_markings;
  j["ramp_lane_ids"] = meta.ramp_lane_ids;
  j["ramp_end_x"] = meta.ramp_end_x ? json(*meta.ramp_end_x) : json(nullptr);
  j["x_direction"] = meta.x_direction;
  return j.dump(2) + "\n";
}

std::string SerializeTracksCsv(const std::map<int, Track>& tracks) {
  bool any_lc = false;
  for (const auto& [id, track] : tracks) {
    for (const auto& p : track) any_lc = any_lc || p.lc_prob.has_value();
  }
  std::ostringstream out;
  out << "frame,id,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId";
  if (any_lc) out << ",lcProb";
  out << '\n';
  for (const auto& [id, track] : tracks) {
    for (const auto& p : track) {
      out << p.frame << ',' << id << ',' << FormatDouble(p.x) << ',' << FormatDouble(p.y) << ','
          << FormatDouble(p.vx) << ',' << FormatDouble(p.vy) << ',' << FormatDouble(p.ax) << ','
          << FormatDouble(p.ay) << ',' << p.lane_id;
      if (any_lc) {
        out << ',';
        if (p.lc_prob) out << FormatDouble(*p.lc_prob);
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

Scene LoadScene(const std::filesystem::path& tracks_path, const std::filesystem::path& meta_path) {
  Scene scene;
  scene.meta = ParseMetaJson(ReadFile(meta_path));
  scene.tracks = ParseTracksCsv(ReadFile(tracks_path));
  return scene;
}

void SaveScene(const Scene& scene, const std::filesystem::path& tracks_path,
               const std::filesystem::path& meta_path) {
  WriteFile(tracks_path, SerializeTracksCsv(scene.tracks));
  WriteFile(meta_path, SerializeMetaJson(scene.meta));
}

const TrackPoint* FindFrame(const Track& track, std::int64_t frame) {
  const auto it = std::lower_bound(track.begin(), track.end(), frame,
                                   [](const TrackPoint& p, std::int64_t f) { return p.frame < f; });
  if (it == track.end() || it->frame != frame) return nullptr;
  return &*it;
}

PairingReport ExtractPairs(const Scene& scene) {
  const RecordingMeta& meta = scene.meta;
  const double dir = meta.x_direction;
  PairingReport report;

  for (const auto& [ramp_id, ramp_track] : scene.tracks) {
    if (ramp_track.empty() || !meta.IsRampLane(ramp_track.front().lane_id)) continue;
    ++report.ramp_vehicles;

    // Merge-approach frame: last sample still inside a ramp lane.
    std::size_t last_ramp = 0;
    std::optional<int> target_lane;
    for (std::size_t i = 0; i < ramp_track.size(); ++i) {
      if (meta.IsRampLane(ramp_track[i].lane_id)) {
        last_ramp = i;
      } else {
        target_lane = ramp_track[i].lane_id;
        break;
      }
    }
    const TrackPoint& at_merge = ramp_track[last_ramp];
    const auto in_target = [&](int lane) {
      if (meta.IsRampLane(lane)) return false;
      if (target_lane) return lane == *target_lane;
      return std::abs(lane - at_merge.lane_id) == 1;
    };

    std::optional<int> behind_id;
    std::optional<int> ahead_id;
    double behind_dist = std::numeric_limits<double>::infinity();
    double ahead_dist = std::numeric_limits<double>::infinity();
    for (const auto& [cand_id, cand_track] : scene.tracks) {
      if (cand_id == ramp_id || cand_track.empty()) continue;
      if (meta.IsRampLane(cand_track.front().lane_id)) continue;
      const TrackPoint* p = FindFrame(cand_track, at_merge.frame);
      if (!p || !in_target(p->lane_id)) continue;
      const double d = (at_merge.x - p->x) * dir;  // > 0: candidate is behind
      if (d >= 0.0) {
        if (d < behind_dist) {
          behind_dist = d;
          behind_id = cand_id;
        }
      } else if (-d < ahead_dist) {
        ahead_dist = -d;
        ahead_id = cand_id;
      }
    }
    if (!behind_id) {
      ++report.skipped_no_partner;
      continue;
    }
    const Track& ego_track = scene.tracks.at(*behind_id);
    int overlap = 0;
    for (const auto& p : ramp_track) {
      if (FindFrame(ego_track, p.frame)) ++overlap;
    }
    if (overlap < 2) {
      ++report.skipped_short_overlap;
      continue;
    }
    report.pairs.push_back({*behind_id, ramp_id, ahead_id, at_merge.frame, overlap});
  }
  return report;
}

}  // namespace adaptmerge
