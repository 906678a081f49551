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

#include "adaptmerge/config.h"

#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

#include "adaptmerge/data_io.h"
#include "json.hpp"

namespace adaptmerge {

namespace {

using json = nlohmann::ordered_json;

void RejectUnknown(const json& j, std::string_view section, std::set<std::string> known) {
  if (!j.is_object()) {
    throw std::invalid_argument("config: section '" + std::string(section) + "' must be an object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw std::invalid_argument("config: unknown key '" + key + "' in section '" +
                                  std::string(section) + "'");
    }
  }
}

template <typename T>
void Maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

WeightVector WeightsFrom(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 2) throw std::invalid_argument("config: weight vectors have 2 components");
  return {v[0], v[1]};
}

}  // namespace

void ToolConfig::Validate() const {
  norms.Validate();
  if (bounds.min > bounds.max) throw std::invalid_argument("config: bounds.min > bounds.max");
  irl.Validate();
  if (weight_window < 1) throw std::invalid_argument("config: irl.window must be >= 1");
  if (calibration.smooth_window < 1) {
    throw std::invalid_argument("config: calibration.smooth_window must be >= 1");
  }
  if (!(calibration.horizon > 0.0)) throw std::invalid_argument("config: horizon must be > 0");
  if (calibration.nominal_jerk < 0.0) throw std::invalid_argument("config: nominal_jerk < 0");
  if (bins < 2) throw std::invalid_argument("config: mapping.bins must be >= 2");
  if (replay.dt_sim && !(*replay.dt_sim > 0.0)) {
    throw std::invalid_argument("config: replay.dt_sim must be > 0");
  }
}

ToolConfig ParseToolConfig(std::string_view json_text, ToolConfig cfg) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  try {
    RejectUnknown(j, "<root>", {"norms", "bounds", "irl", "calibration", "mapping", "replay"});
    if (j.contains("norms")) {
      const json& n = j["norms"];
      RejectUnknown(n, "norms", {"t_norm", "v_norm", "d_norm"});
      Maybe(n, "t_norm", cfg.norms.t_norm);
      Maybe(n, "v_norm", cfg.norms.v_norm);
      Maybe(n, "d_norm", cfg.norms.d_norm);
    }
    if (j.contains("bounds")) {
      const json& b = j["bounds"];
      RejectUnknown(b, "bounds", {"min", "max"});
      Maybe(b, "min", cfg.bounds.min);
      Maybe(b, "max", cfg.bounds.max);
    }
    if (j.contains("irl")) {
      const json& i = j["irl"];
      RejectUnknown(i, "irl",
                    {"step", "tol", "max_iters", "init0", "init1", "direction", "window"});
      Maybe(i, "step", cfg.irl.step);
      Maybe(i, "tol", cfg.irl.tol);
      Maybe(i, "max_iters", cfg.irl.max_iters);
      if (i.contains("init0")) cfg.irl.init0 = WeightsFrom(i["init0"]);
      if (i.contains("init1")) cfg.irl.init1 = WeightsFrom(i["init1"]);
      if (i.contains("direction")) {
        const auto d = i["direction"].get<std::string>();
        if (d == "feature_matching") {
          cfg.irl.direction = UpdateDirection::kFeatureMatching;
        } else if (d == "literal") {
          cfg.irl.direction = UpdateDirection::kLiteral;
        } else {
          throw std::invalid_argument("config: irl.direction must be feature_matching or literal");
        }
      }
      Maybe(i, "window", cfg.weight_window);
    }
    if (j.contains("calibration")) {
      const json& c = j["calibration"];
      RejectUnknown(c, "calibration",
                    {"smooth_window", "vehicle_length", "horizon", "nominal_jerk", "jerk_source",
                     "lane_change"});
      Maybe(c, "smooth_window", cfg.calibration.smooth_window);
      Maybe(c, "vehicle_length", cfg.calibration.vehicle_length);
      Maybe(c, "horizon", cfg.calibration.horizon);
      Maybe(c, "nominal_jerk", cfg.calibration.nominal_jerk);
      if (c.contains("jerk_source")) {
        const auto s = c["jerk_source"].get<std::string>();
        if (s == "nominal") {
          cfg.calibration.jerk_source = JerkSource::kNominal;
        } else if (s == "measured") {
          cfg.calibration.jerk_source = JerkSource::kMeasured;
        } else {
          throw std::invalid_argument("config: calibration.jerk_source must be nominal or measured");
        }
      }
      if (c.contains("lane_change")) {
        const json& l = c["lane_change"];
        RejectUnknown(l, "calibration.lane_change", {"o_half", "o_scale", "vy_scale"});
        Maybe(l, "o_half", cfg.calibration.lane_change.o_half);
        Maybe(l, "o_scale", cfg.calibration.lane_change.o_scale);
        Maybe(l, "vy_scale", cfg.calibration.lane_change.vy_scale);
      }
    }
    if (j.contains("mapping")) {
      const json& m = j["mapping"];
      RejectUnknown(m, "mapping", {"bins"});
      Maybe(m, "bins", cfg.bins);
    }
    if (j.contains("replay")) {
      const json& r = j["replay"];
      RejectUnknown(r, "replay", {"dt_sim", "safety_gap", "ego_jerk", "vehicle_length"});
      if (r.contains("dt_sim")) {
        cfg.replay.dt_sim =
            r["dt_sim"].is_null() ? std::nullopt : std::optional<double>(r["dt_sim"].get<double>());
      }
      Maybe(r, "safety_gap", cfg.replay.safety_gap);
      Maybe(r, "ego_jerk", cfg.replay.ego_jerk);
      Maybe(r, "vehicle_length", cfg.replay.vehicle_length);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  // Replay bounds follow the game's acceleration bounds.
  cfg.replay.bounds = cfg.bounds;
  cfg.Validate();
  return cfg;
}

std::string DumpToolConfig(const ToolConfig& cfg) {
  json j;
  j["norms"] = {{"t_norm", cfg.norms.t_norm}, {"v_norm", cfg.norms.v_norm},
                {"d_norm", cfg.norms.d_norm}};
  j["bounds"] = {{"min", cfg.bounds.min}, {"max", cfg.bounds.max}};
  j["irl"] = {{"step", cfg.irl.step},
              {"tol", cfg.irl.tol},
              {"max_iters", cfg.irl.max_iters},
              {"init0", {cfg.irl.init0.w1, cfg.irl.init0.w2}},
              {"init1", {cfg.irl.init1.w1, cfg.irl.init1.w2}},
              {"direction", cfg.irl.direction == UpdateDirection::kFeatureMatching
                                ? "feature_matching"
                                : "literal"},
              {"window", cfg.weight_window}};
  j["calibration"] = {
      {"smooth_window", cfg.calibration.smooth_window},
      {"vehicle_length", cfg.calibration.vehicle_length},
      {"horizon", cfg.calibration.horizon},
      {"nominal_jerk", cfg.calibration.nominal_jerk},
      {"jerk_source", cfg.calibration.jerk_source == JerkSource::kNominal ? "nominal" : "measured"},
      {"lane_change",
       {{"o_half", cfg.calibration.lane_change.o_half},
        {"o_scale", cfg.calibration.lane_change.o_scale},
        {"vy_scale", cfg.calibration.lane_change.vy_scale}}}};
  j["mapping"] = {{"bins", cfg.bins}};
  j["replay"] = {{"dt_sim", cfg.replay.dt_sim ? json(*cfg.replay.dt_sim) : json(nullptr)},
                 {"safety_gap", cfg.replay.safety_gap},
                 {"ego_jerk", cfg.replay.ego_jerk},
                 {"vehicle_length", cfg.replay.vehicle_length}};
  return j.dump(2) + "\n";
}

ToolConfig LoadToolConfig(const std::optional<std::filesystem::path>& path) {
  std::optional<std::filesystem::path> source = path;
  if (!source) {
    if (const char* env = std::getenv(std::string(kConfigEnvVar).c_str()); env && *env) {
      source = env;
    }
  }
  if (!source) {
    ToolConfig cfg;
    cfg.Validate();
    return cfg;
  }
  return ParseToolConfig(ReadFile(*source));
}

}  // namespace adaptmerge
