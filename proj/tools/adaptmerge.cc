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

// Command-line front end: one subcommand per pipeline stage.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adaptmerge/config.h"
#include "adaptmerge/data_io.h"
#include "adaptmerge/pipeline.h"
#include "adaptmerge/serialization.h"
#include "adaptmerge/synthetic.h"

namespace fs = std::filesystem;
using namespace adaptmerge;

namespace {

using WeightPair = std::pair<WeightVector, WeightVector>;

WeightPair ParseBaseline(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw std::invalid_argument("baseline '" + text + "': non-numeric component '" + item + "'");
    }
    v.push_back(x);
  }
  if (v.size() != 4) {
    throw std::invalid_argument("baseline '" + text + "' must be w1,w2,w1,w2");
  }
  WeightPair p{{v[0], v[1]}, {v[2], v[3]}};
  if (!p.first.OnSimplex() || !p.second.OnSimplex()) {
    throw std::invalid_argument("baseline '" + text + "' is not on the simplex");
  }
  return p;
}

std::vector<WeightPair> ParseBaselines(const std::vector<std::string>& texts) {
  std::vector<WeightPair> out;
  for (const auto& t : texts) out.push_back(ParseBaseline(t));
  return out;
}

MappingModel LoadModel(const fs::path& path) {
  return ModelFromJson(Json::parse(ReadFile(path)));
}

void WriteReport(const fs::path& path, const EvalReport& rep) {
  WriteFile(path, ToJson(rep).dump(2) + "\n");
}

void PrintSummary(const EvalReport& rep) {
  std::printf("sequences %zu  points %zu  matches %zu  similarity %s\n", rep.sequences, rep.points,
              rep.matches, FormatPercent(rep.similarity).c_str());
  if (rep.replayed) {
    std::printf("violations %zu/%zu  violation rate %s\n", rep.violations, rep.sequences,
                FormatPercent(rep.violation_rate).c_str());
  }
  for (const auto& b : rep.baselines) {
    std::printf("baseline [%g,%g] [%g,%g]  similarity %s\n", b.lambda0.w1, b.lambda0.w2,
                b.lambda1.w1, b.lambda1.w2, FormatPercent(b.similarity).c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Game-theoretic merge decision engine"};
  app.require_subcommand(1);
  std::optional<std::string> config_path;
  app.add_option("--config", config_path, "JSON config file (else $ADAPTMERGE_CONFIG)");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Tracks -> interaction sequences");
  std::string tracks, meta, out;
  std::optional<int> smooth_window;
  calibrate->add_option("--tracks", tracks)->required();
  calibrate->add_option("--meta", meta)->required();
  calibrate->add_option("--out", out)->required();
  calibrate->add_option("--smooth-window", smooth_window);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Sequences -> per-timestep weights");
  std::string sequences;
  std::optional<double> step, tol;
  std::optional<int> max_iters, window;
  optimize->add_option("--sequences", sequences)->required();
  optimize->add_option("--out", out)->required();
  optimize->add_option("--step", step);
  optimize->add_option("--tol", tol);
  optimize->add_option("--max-iters", max_iters);
  optimize->add_option("--window", window, "Centered averaging window in timesteps");

  // train-map
  auto* train = app.add_subcommand("train-map", "Weights -> mapping model");
  std::string weights;
  std::optional<int> bins;
  train->add_option("--weights", weights)->required();
  train->add_option("--out", out)->required();
  train->add_option("--bins", bins);

  // decide
  auto* decide = app.add_subcommand("decide", "Adaptive decisions on sequences");
  std::string model;
  std::optional<std::string> plot;
  decide->add_option("--model", model)->required();
  decide->add_option("--sequences", sequences)->required();
  decide->add_option("--out", out)->required();
  decide->add_option("--plot", plot, "Also write a plot-ready CSV");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Decision records -> similarity report");
  std::string records;
  std::vector<std::string> baselines;
  evaluate->add_option("--records", records)->required();
  evaluate->add_option("--out", out)->required();
  evaluate->add_option("--baseline", baselines, "Fixed weights w1,w2,w1,w2 (repeatable)");

  // replay
  auto* replay = app.add_subcommand("replay", "Closed-loop replay -> safety report");
  std::optional<double> safety_gap, dt_sim;
  replay->add_option("--sequences", sequences)->required();
  replay->add_option("--model", model)->required();
  replay->add_option("--safety-gap", safety_gap);
  replay->add_option("--dt-sim", dt_sim);
  replay->add_option("--out", out)->required();

  // synthesize
  auto* synthesize = app.add_subcommand("synthesize", "Write a synthetic recording");
  int pairs = 188;
  std::uint64_t seed = SyntheticConfig{}.seed;
  synthesize->add_option("--tracks", tracks)->required();
  synthesize->add_option("--meta", meta)->required();
  synthesize->add_option("--pairs", pairs)->check(CLI::NonNegativeNumber);
  synthesize->add_option("--seed", seed);

  // run
  auto* run = app.add_subcommand("run", "Full pipeline from recordings to report");
  ExperimentConfig exp;
  std::string model_in;
  bool no_replay = false;
  run->add_option("--train-tracks", exp.train_tracks);
  run->add_option("--train-meta", exp.train_meta);
  run->add_option("--model", model_in, "Use this model instead of training");
  run->add_option("--test-tracks", exp.test_tracks)->required();
  run->add_option("--test-meta", exp.test_meta)->required();
  run->add_option("--out-dir", exp.out_dir)->required();
  run->add_option("--baseline", baselines, "Fixed weights w1,w2,w1,w2 (repeatable)");
  run->add_flag("--no-replay", no_replay);

  CLI11_PARSE(app, argc, argv);

  std::string stage = app.get_subcommands().front()->get_name();
  try {
    ToolConfig cfg = [&] {
      try {
        return LoadToolConfig(config_path ? std::optional<fs::path>(*config_path) : std::nullopt);
      } catch (const std::exception& e) {
        throw StageError("config", e.what());
      }
    }();

    if (app.got_subcommand(calibrate)) {
      if (smooth_window) cfg.calibration.smooth_window = *smooth_window;
      cfg.Validate();
      const Scene scene = LoadScene(tracks, meta);
      const SceneCalibration cal = CalibrateScene(scene, cfg.calibration);
      for (const auto& s : cal.skipped) std::fprintf(stderr, "skipped %s\n", s.c_str());
      if (cal.sequences.empty()) throw StageError(stage, "no interaction sequences found");
      WriteFile(out, ToJsonl<InteractionSequence>(cal.sequences));
      std::printf("%zu sequences\n", cal.sequences.size());
    } else if (app.got_subcommand(optimize)) {
      if (step) cfg.irl.step = *step;
      if (tol) cfg.irl.tol = *tol;
      if (max_iters) cfg.irl.max_iters = *max_iters;
      if (window) cfg.weight_window = *window;
      cfg.Validate();
      const auto seqs = SequencesFromJsonl(ReadFile(sequences));
      std::vector<WeightRecord> all;
      std::size_t converged = 0;
      for (const auto& s : seqs) {
        for (auto& r : OptimizeSequence(s, cfg)) {
          converged += r.converged ? 1 : 0;
          all.push_back(std::move(r));
        }
      }
      WriteFile(out, ToJsonl<WeightRecord>(all));
      std::printf("%zu timesteps, %zu converged\n", all.size(), converged);
    } else if (app.got_subcommand(train)) {
      if (bins) cfg.bins = *bins;
      cfg.Validate();
      const auto recs = WeightRecordsFromJsonl(ReadFile(weights));
      const auto samples = ToMappingSamples(recs);
      const MappingModel m = TrainMapping(samples, cfg.bins);
      WriteFile(out, ToJson(m).dump(2) + "\n");
      std::printf("trained on %zu samples, %d bins\n", samples.size(), m.bins);
    } else if (app.got_subcommand(decide)) {
      const MappingModel m = LoadModel(model);
      const auto seqs = SequencesFromJsonl(ReadFile(sequences));
      const auto recs = DecideAll(m, seqs, cfg);
      WriteFile(out, ToJsonl<DecisionRecord>(recs));
      if (plot) WriteFile(*plot, RecordsToCsv(recs));
      std::printf("%zu decisions\n", recs.size());
    } else if (app.got_subcommand(evaluate)) {
      const auto base = ParseBaselines(baselines);
      const auto recs = DecisionRecordsFromJsonl(ReadFile(records));
      const EvalReport rep = EvaluateRecords(recs, cfg, base);
      WriteReport(out, rep);
      PrintSummary(rep);
    } else if (app.got_subcommand(replay)) {
      if (safety_gap) cfg.replay.safety_gap = *safety_gap;
      if (dt_sim) cfg.replay.dt_sim = *dt_sim;
      cfg.Validate();
      const MappingModel m = LoadModel(model);
      const auto seqs = SequencesFromJsonl(ReadFile(sequences));
      const EvalReport rep = ReplaySequences(seqs, m, cfg);
      WriteReport(out, rep);
      PrintSummary(rep);
    } else if (app.got_subcommand(synthesize)) {
      SyntheticConfig sc;
      sc.pairs = pairs;
      sc.seed = seed;
      sc.norms = cfg.norms;
      const SyntheticScene s = GenerateSyntheticScene(sc);
      SaveScene(s.scene, tracks, meta);
      std::printf("%d pairs, %zu tracks\n", pairs, s.scene.tracks.size());
    } else if (app.got_subcommand(run)) {
      exp.tool = cfg;
      exp.replay = !no_replay;
      exp.baselines = ParseBaselines(baselines);
      if (!model_in.empty()) {
        exp.model_path = model_in;
      } else if (exp.train_tracks.empty() || exp.train_meta.empty()) {
        throw StageError(stage, "--train-tracks and --train-meta are required without --model");
      }
      const ExperimentResult res = RunExperiment(exp);
      PrintSummary(res.report);
    }
  } catch (const StageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s: %s\n", stage.c_str(), e.what());
    return 1;
  }
  return 0;
}
