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

#include <filesystem>
#include <optional>
#include <string_view>

#include "adaptmerge/calibration.h"
#include "adaptmerge/eval.h"
#include "adaptmerge/irl.h"
#include "adaptmerge/scenario.h"

namespace adaptmerge {

/// Every tunable of the tool. All fields have defaults; a config file only
/// needs to mention what it overrides.
struct ToolConfig {
  NormalizationConstants norms;
  AccelBounds bounds;
  IrlConfig irl;
  int weight_window = 1;
  CalibrationConfig calibration;
  int bins = 10;
  ReplayConfig replay;

  void Validate() const;
};

inline constexpr std::string_view kConfigEnvVar = "ADAPTMERGE_CONFIG";

/// Overrides `base` with whatever the JSON document sets. Unknown keys are
/// rejected so typos do not pass silently.
ToolConfig ParseToolConfig(std::string_view json_text, ToolConfig base = {});
std::string DumpToolConfig(const ToolConfig& cfg);

/// Explicit path if given, else the ADAPTMERGE_CONFIG environment variable,
/// else defaults.
ToolConfig LoadToolConfig(const std::optional<std::filesystem::path>& path);

}  // namespace adaptmerge
