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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaptmerge/calibration.h"
#include "adaptmerge/eval.h"
#include "adaptmerge/mapping_model.h"
#include "adaptmerge/pipeline.h"
#include "json.hpp"

namespace adaptmerge {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kModelFormat = "adaptmerge.mapping_model";
inline constexpr int kModelFormatVersion = 1;

Json ToJson(const KinematicContext& c);
Json ToJson(const EnvironmentObservation& o);
Json ToJson(const InteractionSequence& s);
Json ToJson(const WeightRecord& r);
Json ToJson(const DecisionRecord& r);
Json ToJson(const EvalReport& r);
Json ToJson(const MappingModel& m);

KinematicContext ContextFromJson(const Json& j);
EnvironmentObservation ObservationFromJson(const Json& j);
InteractionSequence SequenceFromJson(const Json& j);
WeightRecord WeightRecordFromJson(const Json& j);
DecisionRecord DecisionRecordFromJson(const Json& j);
/// Checks the format tag and version, then MappingModel::Validate.
MappingModel ModelFromJson(const Json& j);

/// One compact JSON document per line.
template <typename T>
std::string ToJsonl(std::span<const T> items) {
  std::string out;
  for (const auto& item : items) {
    out += ToJson(item).dump();
    out += '\n';
  }
  return out;
}

/// Parses JSON lines; blank lines are skipped. Parse errors name the line.
std::vector<Json> ParseJsonl(std::string_view text);

std::vector<InteractionSequence> SequencesFromJsonl(std::string_view text);
std::vector<WeightRecord> WeightRecordsFromJsonl(std::string_view text);
std::vector<DecisionRecord> DecisionRecordsFromJsonl(std::string_view text);

/// Plot-ready table: one row per record with both strategies and labels.
std::string RecordsToCsv(std::span<const DecisionRecord> records);

}  // namespace adaptmerge
