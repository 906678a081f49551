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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaptmerge/calibration.h"
#include "adaptmerge/config.h"
#include "adaptmerge/eval.h"
#include "adaptmerge/irl.h"
#include "adaptmerge/mapping_model.h"

namespace adaptmerge {

/// Error carrying the pipeline stage it came from; what() is prefixed with
/// "<stage>: ".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Optimal weights of one timestep together with the observation they were
/// recovered under; the training sample format of the mapping model.
struct WeightRecord {
  int ego_id = 0;
  int other_id = 0;
  std::int64_t frame = 0;
  EnvironmentObservation obs;
  WeightVector lambda0;
  WeightVector lambda1;
  int iterations = 0;
  bool converged = false;
  double grad_norm0 = 0.0;
  double grad_norm1 = 0.0;
};

/// Per-timestep weight optimization over a sequence, then a centered
/// moving average over `cfg.weight_window` timesteps.
std::vector<WeightRecord> OptimizeSequence(const InteractionSequence& seq, const ToolConfig& cfg);

std::vector<MappingSample> ToMappingSamples(std::span<const WeightRecord> records);

/// OptimizeSequence on every sequence, then TrainMapping on the result.
MappingModel TrainFromSequences(std::span<const InteractionSequence> sequences,
                                const ToolConfig& cfg);

/// DecideSequence on every sequence, concatenated.
std::vector<DecisionRecord> DecideAll(const MappingModel& model,
                                      std::span<const InteractionSequence> sequences,
                                      const ToolConfig& cfg);

struct ExperimentConfig {
  ToolConfig tool;
  // Training recording; ignored when `model_path` is set.
  std::filesystem::path train_tracks;
  std::filesystem::path train_meta;
  std::optional<std::filesystem::path> model_path;
  std::filesystem::path test_tracks;
  std::filesystem::path test_meta;
  // Outputs are written here when non-empty: report.json, records.jsonl,
  // plot.csv and model.json.
  std::filesystem::path out_dir;
  bool replay = true;
  std::vector<std::pair<WeightVector, WeightVector>> baselines;
};

struct ExperimentResult {
  EvalReport report;
  MappingModel model;
  std::vector<DecisionRecord> records;
  std::size_t train_sequences = 0;
  std::size_t test_sequences = 0;
};

/// load -> pair -> calibrate -> (train or load mapping) -> adaptive decide
/// -> metrics. Errors are rethrown as StageError.
ExperimentResult RunExperiment(const ExperimentConfig& cfg);

/// Decision records plus optional fixed-weight baselines and replay.
EvalReport EvaluateRecords(std::span<const DecisionRecord> records, const ToolConfig& cfg,
                           std::span<const std::pair<WeightVector, WeightVector>> baselines = {});

/// Replays every sequence with the adaptive policy and reports violations.
EvalReport ReplaySequences(std::span<const InteractionSequence> sequences,
                           const MappingModel& model, const ToolConfig& cfg);

}  // namespace adaptmerge
