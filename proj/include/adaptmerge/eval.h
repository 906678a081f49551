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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptmerge/calibration.h"
#include "adaptmerge/game.h"
#include "adaptmerge/mapping_model.h"
#include "adaptmerge/scenario.h"

namespace adaptmerge {

/// Model output for one timestep next to the calibrated human labels. The
/// context is kept so that baselines can be recomputed from records alone.
struct DecisionRecord {
  int ego_id = 0;
  int other_id = 0;
  std::int64_t frame = 0;
  MixedStrategy sigma0;
  MixedStrategy sigma1;
  ActionLabel q0 = ActionLabel::kYield;
  ActionLabel q1 = ActionLabel::kYield;
  ActionLabel label0 = ActionLabel::kYield;
  ActionLabel label1 = ActionLabel::kYield;
  WeightVector lambda0;
  WeightVector lambda1;
  bool degenerate = false;
  KinematicContext ctx;

  bool operator==(const DecisionRecord&) const = default;
};

enum class Which { kEgo, kOther, kBoth };

struct MatchCount {
  std::size_t matches = 0;
  std::size_t points = 0;
};

/// Matches between predicted and demonstrated labels. kBoth counts each
/// vehicle-timestep as its own point.
MatchCount CountMatches(std::span<const DecisionRecord> records, Which which);

/// matches / points; throws std::invalid_argument on empty input.
double SimilarityRate(std::span<const DecisionRecord> records, Which which);
double SimilarityRate(std::size_t matches, std::size_t points);

/// Ratio as a percentage with two decimals, e.g. "83.12%".
std::string FormatPercent(double ratio);

/// Ego action source for closed-loop replay.
using EgoPolicy =
    std::function<ActionLabel(const KinematicContext& ctx, const EnvironmentObservation& obs)>;

EgoPolicy ConstantPolicy(ActionLabel action);
EgoPolicy FixedWeightPolicy(WeightVector lambda0, WeightVector lambda1,
                            NormalizationConstants norms, AccelBounds bounds = {});
/// The model is copied into the policy.
EgoPolicy AdaptivePolicy(MappingModel model, NormalizationConstants norms,
                         AccelBounds bounds = {});

struct ReplayConfig {
  std::optional<double> dt_sim;  // s; defaults to the sequence frame period
  double safety_gap = 0.0;       // m; a step with gap <= safety_gap violates
  double ego_jerk = 1.0;         // m/s^3
  double vehicle_length = 4.5;   // m
  AccelBounds bounds;
};

struct ReplayStep {
  double t = 0.0;
  double s0 = 0.0;
  double v0 = 0.0;
  double a0 = 0.0;
  double s1 = 0.0;
  double v1 = 0.0;
  double gap = 0.0;  // signed bumper gap, other ahead of ego is positive
  ActionLabel action = ActionLabel::kYield;
};

struct ReplayResult {
  std::vector<ReplayStep> trajectory;
  int violations = 0;
  double min_gap = 0.0;
};

/// Ego follows the policy through bounded jerk-limited acceleration changes
/// while the other vehicle replays its recording (linearly interpolated).
ReplayResult ClosedLoopReplay(const InteractionSequence& seq, const EgoPolicy& policy,
                              const ReplayConfig& cfg = {});

/// Decisions on every frame with constant weights.
std::vector<DecisionRecord> FixedWeightBaseline(const InteractionSequence& seq,
                                                const WeightVector& lambda0,
                                                const WeightVector& lambda1,
                                                const NormalizationConstants& norms,
                                                const AccelBounds& bounds = {});

/// Same as FixedWeightBaseline but driven by existing records' contexts.
std::vector<DecisionRecord> RecomputeWithWeights(std::span<const DecisionRecord> records,
                                                 const WeightVector& lambda0,
                                                 const WeightVector& lambda1,
                                                 const NormalizationConstants& norms,
                                                 const AccelBounds& bounds = {});

/// Adaptive decisions on every frame of a sequence.
std::vector<DecisionRecord> DecideSequence(const MappingModel& model,
                                           const InteractionSequence& seq,
                                           const NormalizationConstants& norms,
                                           const AccelBounds& bounds = {});

struct SequenceSummary {
  int ego_id = 0;
  int other_id = 0;
  std::size_t points = 0;
  std::size_t matches = 0;
  double similarity = 0.0;
  bool dynamic = false;  // a demonstrated label changes within the sequence
  std::optional<int> violations;
};

struct RateSummary {
  std::size_t sequences = 0;
  std::size_t points = 0;
  std::size_t matches = 0;
  double similarity = 0.0;
};

struct BaselineSummary {
  WeightVector lambda0;
  WeightVector lambda1;
  std::size_t points = 0;
  std::size_t matches = 0;
  double similarity = 0.0;
};

struct EvalReport {
  std::size_t sequences = 0;
  std::size_t points = 0;
  std::size_t matches = 0;
  double similarity = 0.0;
  MatchCount ego;
  MatchCount other;
  RateSummary dynamic_subset;
  bool replayed = false;
  std::size_t violations = 0;  // sequences with at least one violating step
  double violation_rate = 0.0;
  std::vector<SequenceSummary> per_sequence;
  std::vector<BaselineSummary> baselines;

  /// Throws std::logic_error if the count/ratio invariants do not hold.
  void CheckInvariants() const;
};

/// Groups records by (ego_id, other_id) in order of first appearance.
std::vector<std::vector<DecisionRecord>> GroupBySequence(std::span<const DecisionRecord> records);

/// Similarity metrics over all vehicle-timesteps. `replays`, when given, is
/// aligned with the grouped sequences and fills the safety fields.
EvalReport BuildReport(std::span<const DecisionRecord> records,
                       std::span<const ReplayResult> replays = {});

}  // namespace adaptmerge
