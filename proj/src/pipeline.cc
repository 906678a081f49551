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

#include "adaptmerge/pipeline.h"

#include <utility>

#include "adaptmerge/data_io.h"
#include "adaptmerge/serialization.h"

namespace adaptmerge {

namespace {

template <typename F>
auto InStage(const std::string& stage, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

std::vector<InteractionSequence> CalibrateOrThrow(const Scene& scene, const ToolConfig& cfg,
                                                  const char* which) {
  SceneCalibration cal = CalibrateScene(scene, cfg.calibration);
  if (cal.sequences.empty()) {
    std::string msg = std::string("no sequences after calibration of the ") + which + " recording";
    if (!cal.skipped.empty()) msg += " (" + cal.skipped.front() + ")";
    throw StageError("calibrate", msg);
  }
  return std::move(cal.sequences);
}

void AddBaselines(EvalReport& rep, std::span<const DecisionRecord> records, const ToolConfig& cfg,
                  std::span<const std::pair<WeightVector, WeightVector>> baselines) {
  for (const auto& [l0, l1] : baselines) {
    const auto base = RecomputeWithWeights(records, l0, l1, cfg.norms, cfg.bounds);
    const MatchCount c = CountMatches(base, Which::kBoth);
    rep.baselines.push_back({l0, l1, c.points, c.matches, SimilarityRate(c.matches, c.points)});
  }
}

}  // namespace

std::vector<WeightRecord> OptimizeSequence(const InteractionSequence& seq, const ToolConfig& cfg) {
  seq.Validate();
  std::vector<WeightRecord> out;
  std::vector<std::pair<WeightVector, WeightVector>> raw;
  out.reserve(seq.frames.size());
  for (const auto& f : seq.frames) {
    const Demonstration demo{f.ctx, f.label0, f.label1};
    const IrlResult r = OptimizeWeights(demo, cfg.norms, cfg.irl, cfg.bounds);
    WeightRecord w;
    w.ego_id = seq.ego_id;
    w.other_id = seq.other_id;
    w.frame = f.frame;
    w.obs = f.obs;
    w.lambda0 = r.lambda0;
    w.lambda1 = r.lambda1;
    w.iterations = r.iterations;
    w.converged = r.converged;
    w.grad_norm0 = r.grad_norm0;
    w.grad_norm1 = r.grad_norm1;
    out.push_back(w);
    raw.emplace_back(r.lambda0, r.lambda1);
  }
  if (cfg.weight_window > 1) {
    const auto avg = AverageOverWindow(raw, cfg.weight_window);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i].lambda0 = avg[i].first;
      out[i].lambda1 = avg[i].second;
    }
  }
  return out;
}

std::vector<MappingSample> ToMappingSamples(std::span<const WeightRecord> records) {
  std::vector<MappingSample> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.obs, r.lambda0, r.lambda1});
  return out;
}

MappingModel TrainFromSequences(std::span<const InteractionSequence> sequences,
                                const ToolConfig& cfg) {
  std::vector<WeightRecord> records;
  for (const auto& seq : sequences) {
    auto r = OptimizeSequence(seq, cfg);
    records.insert(records.end(), r.begin(), r.end());
  }
  const auto samples = ToMappingSamples(records);
  return TrainMapping(samples, cfg.bins);
}

std::vector<DecisionRecord> DecideAll(const MappingModel& model,
                                      std::span<const InteractionSequence> sequences,
                                      const ToolConfig& cfg) {
  std::vector<DecisionRecord> out;
  for (const auto& seq : sequences) {
    auto r = DecideSequence(model, seq, cfg.norms, cfg.bounds);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

EvalReport EvaluateRecords(std::span<const DecisionRecord> records, const ToolConfig& cfg,
                           std::span<const std::pair<WeightVector, WeightVector>> baselines) {
  EvalReport rep = BuildReport(records);
  AddBaselines(rep, records, cfg, baselines);
  return rep;
}

EvalReport ReplaySequences(std::span<const InteractionSequence> sequences,
                           const MappingModel& model, const ToolConfig& cfg) {
  std::vector<DecisionRecord> records = DecideAll(model, sequences, cfg);
  std::vector<ReplayResult> replays;
  const EgoPolicy policy = AdaptivePolicy(model, cfg.norms, cfg.bounds);
  ReplayConfig rc = cfg.replay;
  rc.bounds = cfg.bounds;
  for (const auto& seq : sequences) replays.push_back(ClosedLoopReplay(seq, policy, rc));
  return BuildReport(records, replays);
}

ExperimentResult RunExperiment(const ExperimentConfig& cfg) {
  InStage("config", [&] {
    cfg.tool.Validate();
    return 0;
  });
  ExperimentResult res;

  if (cfg.model_path) {
    res.model =
        InStage("load", [&] { return ModelFromJson(Json::parse(ReadFile(*cfg.model_path))); });
  } else {
    const Scene train =
        InStage("load", [&] { return LoadScene(cfg.train_tracks, cfg.train_meta); });
    const auto seqs =
        InStage("calibrate", [&] { return CalibrateOrThrow(train, cfg.tool, "training"); });
    res.train_sequences = seqs.size();
    res.model = InStage("train-map", [&] { return TrainFromSequences(seqs, cfg.tool); });
  }

  const Scene test = InStage("load", [&] { return LoadScene(cfg.test_tracks, cfg.test_meta); });
  const auto test_seqs =
      InStage("calibrate", [&] { return CalibrateOrThrow(test, cfg.tool, "test"); });
  res.test_sequences = test_seqs.size();

  res.records = InStage("decide", [&] { return DecideAll(res.model, test_seqs, cfg.tool); });

  std::vector<ReplayResult> replays;
  if (cfg.replay) {
    replays = InStage("replay", [&] {
      std::vector<ReplayResult> out;
      const EgoPolicy policy = AdaptivePolicy(res.model, cfg.tool.norms, cfg.tool.bounds);
      ReplayConfig rc = cfg.tool.replay;
      rc.bounds = cfg.tool.bounds;
      for (const auto& seq : test_seqs) out.push_back(ClosedLoopReplay(seq, policy, rc));
      return out;
    });
  }

  res.report = InStage("evaluate", [&] {
    EvalReport rep = BuildReport(res.records, replays);
    AddBaselines(rep, res.records, cfg.tool, cfg.baselines);
    return rep;
  });

  if (!cfg.out_dir.empty()) {
    InStage("write", [&] {
      WriteFile(cfg.out_dir / "report.json", ToJson(res.report).dump(2) + "\n");
      WriteFile(cfg.out_dir / "records.jsonl", ToJsonl<DecisionRecord>(res.records));
      WriteFile(cfg.out_dir / "plot.csv", RecordsToCsv(res.records));
      WriteFile(cfg.out_dir / "model.json", ToJson(res.model).dump(2) + "\n");
      return 0;
    });
  }
  return res;
}

}  // namespace adaptmerge
