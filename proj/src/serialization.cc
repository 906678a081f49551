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

#include "adaptmerge/serialization.h"

#include <sstream>
#include <stdexcept>

namespace adaptmerge {

namespace {

Json Weights(const WeightVector& w) { return Json::array({w.w1, w.w2}); }

WeightVector WeightsFrom(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("weights must be [w1, w2]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json Label(ActionLabel a) { return std::string(ToString(a)); }
ActionLabel LabelFrom(const Json& j) { return ParseActionLabel(j.get<std::string>()); }

Json Gaussians(const std::vector<Gaussian>& gs) {
  Json out = Json::array();
  for (const auto& g : gs) out.push_back({{"mean", g.mean}, {"var", g.var}});
  return out;
}

Json Latent(const LatentModel& m) {
  Json em = Json::array();
  for (const auto& row : m.emissions) em.push_back(Gaussians(row));
  return {{"name", m.name}, {"dims", m.dims}, {"prior", m.prior}, {"emissions", em}};
}

LatentModel LatentFrom(const Json& j) {
  LatentModel m;
  m.name = j.at("name").get<std::string>();
  m.dims = j.at("dims").get<std::vector<int>>();
  m.prior = j.at("prior").get<std::vector<double>>();
  for (const auto& row : j.at("emissions")) {
    std::vector<Gaussian> gs;
    for (const auto& g : row) gs.push_back({g.at("mean").get<double>(), g.at("var").get<double>()});
    m.emissions.push_back(std::move(gs));
  }
  return m;
}

Json Rate(std::size_t matches, std::size_t points, double similarity) {
  return {{"matches", matches},
          {"points", points},
          {"similarity", similarity},
          {"similarity_percent", points > 0 ? FormatPercent(similarity) : std::string("n/a")}};
}

template <typename T, typename F>
std::vector<T> FromJsonl(std::string_view text, F&& convert, std::string_view what) {
  std::vector<T> out;
  std::size_t line = 0;
  for (const Json& j : ParseJsonl(text)) {
    ++line;
    try {
      out.push_back(convert(j));
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string(what) + " record " + std::to_string(line) + ": " +
                                  e.what());
    }
  }
  return out;
}

}  // namespace

Json ToJson(const KinematicContext& c) {
  return {{"gap_init", c.gap_init}, {"gap_ahead", c.gap_ahead}, {"v0", c.v0},
          {"v1", c.v1},             {"a0", c.a0},               {"a1", c.a1},
          {"jerk0_mag", c.jerk0_mag}, {"jerk1_mag", c.jerk1_mag}, {"horizon", c.horizon}};
}

KinematicContext ContextFromJson(const Json& j) {
  KinematicContext c;
  c.gap_init = j.at("gap_init").get<double>();
  c.gap_ahead = j.at("gap_ahead").get<double>();
  c.v0 = j.at("v0").get<double>();
  c.v1 = j.at("v1").get<double>();
  c.a0 = j.at("a0").get<double>();
  c.a1 = j.at("a1").get<double>();
  c.jerk0_mag = j.at("jerk0_mag").get<double>();
  c.jerk1_mag = j.at("jerk1_mag").get<double>();
  c.horizon = j.at("horizon").get<double>();
  c.Validate();
  return c;
}

Json ToJson(const EnvironmentObservation& o) {
  return {{"d01_y", o.d01_y},
          {"dv01_x", o.dv01_x},
          {"d01_x", o.d01_x},
          {"d_ahead", o.d_ahead},
          {"v1_x", o.v1_x}};
}

EnvironmentObservation ObservationFromJson(const Json& j) {
  EnvironmentObservation o;
  o.d01_y = j.at("d01_y").get<double>();
  o.dv01_x = j.at("dv01_x").get<double>();
  o.d01_x = j.at("d01_x").get<double>();
  o.d_ahead = j.at("d_ahead").get<double>();
  o.v1_x = j.at("v1_x").get<double>();
  return o;
}

Json ToJson(const InteractionSequence& s) {
  Json frames = Json::array();
  for (const auto& f : s.frames) {
    frames.push_back({{"frame", f.frame},
                      {"ctx", ToJson(f.ctx)},
                      {"obs", ToJson(f.obs)},
                      {"label0", Label(f.label0)},
                      {"label1", Label(f.label1)},
                      {"s0", f.s0},
                      {"s1", f.s1}});
  }
  return {{"ego_id", s.ego_id}, {"other_id", s.other_id}, {"end_frame", s.end_frame},
          {"complete", s.complete}, {"dt", s.dt}, {"frames", frames}};
}

InteractionSequence SequenceFromJson(const Json& j) {
  InteractionSequence s;
  s.ego_id = j.at("ego_id").get<int>();
  s.other_id = j.at("other_id").get<int>();
  s.end_frame = j.at("end_frame").get<std::int64_t>();
  s.complete = j.at("complete").get<bool>();
  s.dt = j.at("dt").get<double>();
  for (const auto& f : j.at("frames")) {
    SequenceFrame sf;
    sf.frame = f.at("frame").get<std::int64_t>();
    sf.ctx = ContextFromJson(f.at("ctx"));
    sf.obs = ObservationFromJson(f.at("obs"));
    sf.label0 = LabelFrom(f.at("label0"));
    sf.label1 = LabelFrom(f.at("label1"));
    sf.s0 = f.at("s0").get<double>();
    sf.s1 = f.at("s1").get<double>();
    s.frames.push_back(sf);
  }
  s.Validate();
  return s;
}

Json ToJson(const WeightRecord& r) {
  return {{"ego_id", r.ego_id},
          {"other_id", r.other_id},
          {"frame", r.frame},
          {"obs", ToJson(r.obs)},
          {"lambda0", Weights(r.lambda0)},
          {"lambda1", Weights(r.lambda1)},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"grad_norm0", r.grad_norm0},
          {"grad_norm1", r.grad_norm1}};
}

WeightRecord WeightRecordFromJson(const Json& j) {
  WeightRecord r;
  r.ego_id = j.at("ego_id").get<int>();
  r.other_id = j.at("other_id").get<int>();
  r.frame = j.at("frame").get<std::int64_t>();
  r.obs = ObservationFromJson(j.at("obs"));
  r.lambda0 = WeightsFrom(j.at("lambda0"));
  r.lambda1 = WeightsFrom(j.at("lambda1"));
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.grad_norm0 = j.at("grad_norm0").get<double>();
  r.grad_norm1 = j.at("grad_norm1").get<double>();
  if (!r.lambda0.OnSimplex() || !r.lambda1.OnSimplex()) {
    throw std::invalid_argument("weights off the simplex");
  }
  return r;
}

Json ToJson(const DecisionRecord& r) {
  return {{"ego_id", r.ego_id},
          {"other_id", r.other_id},
          {"frame", r.frame},
          {"sigma0", r.sigma0.p},
          {"sigma1", r.sigma1.p},
          {"q0", Label(r.q0)},
          {"q1", Label(r.q1)},
          {"label0", Label(r.label0)},
          {"label1", Label(r.label1)},
          {"lambda0", Weights(r.lambda0)},
          {"lambda1", Weights(r.lambda1)},
          {"degenerate", r.degenerate},
          {"ctx", ToJson(r.ctx)}};
}

DecisionRecord DecisionRecordFromJson(const Json& j) {
  DecisionRecord r;
  r.ego_id = j.at("ego_id").get<int>();
  r.other_id = j.at("other_id").get<int>();
  r.frame = j.at("frame").get<std::int64_t>();
  r.sigma0.p = j.at("sigma0").get<double>();
  r.sigma1.p = j.at("sigma1").get<double>();
  r.q0 = LabelFrom(j.at("q0"));
  r.q1 = LabelFrom(j.at("q1"));
  r.label0 = LabelFrom(j.at("label0"));
  r.label1 = LabelFrom(j.at("label1"));
  r.lambda0 = WeightsFrom(j.at("lambda0"));
  r.lambda1 = WeightsFrom(j.at("lambda1"));
  r.degenerate = j.at("degenerate").get<bool>();
  r.ctx = ContextFromJson(j.at("ctx"));
  return r;
}

Json ToJson(const EvalReport& r) {
  Json j;
  j["sequences"] = r.sequences;
  j["overall"] = Rate(r.matches, r.points, r.similarity);
  j["ego"] = Rate(r.ego.matches, r.ego.points,
                  r.ego.points ? SimilarityRate(r.ego.matches, r.ego.points) : 0.0);
  j["other"] = Rate(r.other.matches, r.other.points,
                    r.other.points ? SimilarityRate(r.other.matches, r.other.points) : 0.0);
  Json dyn = Rate(r.dynamic_subset.matches, r.dynamic_subset.points, r.dynamic_subset.similarity);
  dyn["sequences"] = r.dynamic_subset.sequences;
  j["dynamic_subset"] = dyn;
  if (r.replayed) {
    j["safety"] = {{"violations", r.violations},
                   {"violation_rate", r.violation_rate},
                   {"violation_percent", FormatPercent(r.violation_rate)}};
  } else {
    j["safety"] = nullptr;
  }
  Json baselines = Json::array();
  for (const auto& b : r.baselines) {
    Json e = Rate(b.matches, b.points, b.similarity);
    e["lambda0"] = Weights(b.lambda0);
    e["lambda1"] = Weights(b.lambda1);
    baselines.push_back(e);
  }
  j["baselines"] = baselines;
  Json seqs = Json::array();
  for (const auto& s : r.per_sequence) {
    Json e = Rate(s.matches, s.points, s.similarity);
    e["ego_id"] = s.ego_id;
    e["other_id"] = s.other_id;
    e["dynamic"] = s.dynamic;
    e["violations"] = s.violations ? Json(*s.violations) : Json(nullptr);
    seqs.push_back(e);
  }
  j["per_sequence"] = seqs;
  return j;
}

Json ToJson(const MappingModel& m) {
  return {{"format", kModelFormat},
          {"version", kModelFormatVersion},
          {"bins", m.bins},
          {"bin_centers", m.bin_centers},
          {"obs_mean", m.obs_mean},
          {"obs_std", m.obs_std},
          {"variance_floor", m.variance_floor},
          {"h1", Latent(m.h1)},
          {"h2", Latent(m.h2)}};
}

MappingModel ModelFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("format") ||
      j.at("format").get<std::string>() != kModelFormat) {
    throw std::invalid_argument("model: not a mapping model document");
  }
  const int version = j.at("version").get<int>();
  if (version != kModelFormatVersion) {
    throw std::invalid_argument("model: unsupported format version " + std::to_string(version));
  }
  MappingModel m;
  m.bins = j.at("bins").get<int>();
  m.bin_centers = j.at("bin_centers").get<std::vector<double>>();
  const auto mean = j.at("obs_mean").get<std::vector<double>>();
  const auto sd = j.at("obs_std").get<std::vector<double>>();
  if (mean.size() != EnvironmentObservation::kDims || sd.size() != EnvironmentObservation::kDims) {
    throw std::invalid_argument("model: standardization has the wrong dimension");
  }
  std::copy(mean.begin(), mean.end(), m.obs_mean.begin());
  std::copy(sd.begin(), sd.end(), m.obs_std.begin());
  m.variance_floor = j.at("variance_floor").get<double>();
  m.h1 = LatentFrom(j.at("h1"));
  m.h2 = LatentFrom(j.at("h2"));
  m.Validate();
  return m;
}

std::vector<Json> ParseJsonl(std::string_view text) {
  std::vector<Json> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      try {
        out.push_back(Json::parse(line));
      } catch (const Json::exception& e) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

std::vector<InteractionSequence> SequencesFromJsonl(std::string_view text) {
  return FromJsonl<InteractionSequence>(text, SequenceFromJson, "sequence");
}

std::vector<WeightRecord> WeightRecordsFromJsonl(std::string_view text) {
  return FromJsonl<WeightRecord>(text, WeightRecordFromJson, "weight");
}

std::vector<DecisionRecord> DecisionRecordsFromJsonl(std::string_view text) {
  return FromJsonl<DecisionRecord>(text, DecisionRecordFromJson, "decision");
}

std::string RecordsToCsv(std::span<const DecisionRecord> records) {
  std::ostringstream os;
  os.precision(17);
  os << "ego_id,other_id,frame,sigma0_nyield,sigma1_nyield,q0,q1,label0,label1,"
        "lambda0_w1,lambda1_w1,gap_init,gap_ahead,v0,v1\n";
  for (const auto& r : records) {
    os << r.ego_id << ',' << r.other_id << ',' << r.frame << ',' << r.sigma0.p << ','
       << r.sigma1.p << ',' << ToString(r.q0) << ',' << ToString(r.q1) << ','
       << ToString(r.label0) << ',' << ToString(r.label1) << ',' << r.lambda0.w1 << ','
       << r.lambda1.w1 << ',' << r.ctx.gap_init << ',' << r.ctx.gap_ahead << ',' << r.ctx.v0
       << ',' << r.ctx.v1 << '\n';
  }
  return os.str();
}

}  // namespace adaptmerge
