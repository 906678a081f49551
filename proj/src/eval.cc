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

#include "adaptmerge/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

namespace adaptmerge {

namespace {

DecisionRecord MakeRecord(const InteractionSequence& seq, const SequenceFrame& f,
                          const AdaptiveDecision& d) {
  DecisionRecord r;
  r.ego_id = seq.ego_id;
  r.other_id = seq.other_id;
  r.frame = f.frame;
  r.sigma0 = d.equilibrium.sigma0;
  r.sigma1 = d.equilibrium.sigma1;
  r.q0 = d.q0;
  r.q1 = d.q1;
  r.label0 = f.label0;
  r.label1 = f.label1;
  r.lambda0 = d.lambda0;
  r.lambda1 = d.lambda1;
  r.degenerate = d.degenerate;
  r.ctx = f.ctx;
  return r;
}

double Lerp(double a, double b, double u) { return a + (b - a) * u; }

}  // namespace

MatchCount CountMatches(std::span<const DecisionRecord> records, Which which) {
  MatchCount c;
  for (const auto& r : records) {
    if (which != Which::kOther) {
      ++c.points;
      if (r.q0 == r.label0) ++c.matches;
    }
    if (which != Which::kEgo) {
      ++c.points;
      if (r.q1 == r.label1) ++c.matches;
    }
  }
  return c;
}

double SimilarityRate(std::size_t matches, std::size_t points) {
  if (points == 0) throw std::invalid_argument("similarity rate of zero points");
  if (matches > points) throw std::invalid_argument("similarity rate: matches exceed points");
  return static_cast<double>(matches) / static_cast<double>(points);
}

double SimilarityRate(std::span<const DecisionRecord> records, Which which) {
  if (records.empty()) throw std::invalid_argument("similarity rate of empty record set");
  const MatchCount c = CountMatches(records, which);
  return SimilarityRate(c.matches, c.points);
}

std::string FormatPercent(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", ratio * 100.0);
  return buf;
}

EgoPolicy ConstantPolicy(ActionLabel action) {
  return [action](const KinematicContext&, const EnvironmentObservation&) { return action; };
}

EgoPolicy FixedWeightPolicy(WeightVector lambda0, WeightVector lambda1,
                            NormalizationConstants norms, AccelBounds bounds) {
  return [=](const KinematicContext& ctx, const EnvironmentObservation&) {
    return DecideWithWeights(ctx, lambda0, lambda1, norms, bounds).q0;
  };
}

EgoPolicy AdaptivePolicy(MappingModel model, NormalizationConstants norms, AccelBounds bounds) {
  return [model = std::move(model), norms, bounds](const KinematicContext& ctx,
                                                   const EnvironmentObservation& obs) {
    return AdaptiveDecide(model, ctx, obs, norms, bounds).q0;
  };
}

ReplayResult ClosedLoopReplay(const InteractionSequence& seq, const EgoPolicy& policy,
                              const ReplayConfig& cfg) {
  seq.Validate();
  const double dt = cfg.dt_sim.value_or(seq.dt);
  if (!(dt > 0.0)) throw std::invalid_argument("replay: dt_sim must be > 0");
  const auto& frames = seq.frames;
  const std::int64_t frame0 = frames.front().frame;
  const auto time_of = [&](std::size_t i) { return (frames[i].frame - frame0) * seq.dt; };
  const double t_end = time_of(frames.size() - 1);
  const int steps = static_cast<int>(std::floor(t_end / dt + 1e-9));

  ReplayResult out;
  out.min_gap = std::numeric_limits<double>::infinity();
  double s0 = frames.front().s0;
  double v0 = frames.front().ctx.v0;
  double a0 = frames.front().ctx.a0;
  std::size_t seg = 0;
  for (int step = 0; step <= steps; ++step) {
    const double t = step * dt;
    while (seg + 2 < frames.size() && time_of(seg + 1) <= t) ++seg;
    const SequenceFrame& fa = frames[seg];
    const SequenceFrame& fb = frames[seg + 1];
    const double span = time_of(seg + 1) - time_of(seg);
    const double u = std::clamp((t - time_of(seg)) / span, 0.0, 1.0);

    const double s1 = Lerp(fa.s1, fb.s1, u);
    const double v1 = Lerp(fa.ctx.v1, fb.ctx.v1, u);
    KinematicContext ctx;
    ctx.gap_init = std::max(0.0, std::abs(s1 - s0) - cfg.vehicle_length);
    ctx.gap_ahead = Lerp(fa.ctx.gap_ahead, fb.ctx.gap_ahead, u);
    ctx.v0 = v0;
    ctx.v1 = v1;
    ctx.a0 = a0;
    ctx.a1 = Lerp(fa.ctx.a1, fb.ctx.a1, u);
    ctx.jerk0_mag = cfg.ego_jerk;
    ctx.jerk1_mag = Lerp(fa.ctx.jerk1_mag, fb.ctx.jerk1_mag, u);
    ctx.horizon = fa.ctx.horizon;
    EnvironmentObservation obs;
    obs.d01_y = Lerp(fa.obs.d01_y, fb.obs.d01_y, u);
    obs.dv01_x = v1 - v0;
    obs.d01_x = ctx.gap_init;
    obs.d_ahead = ctx.gap_ahead;
    obs.v1_x = v1;

    const ActionLabel action = policy(ctx, obs);
    const double gap = s1 - s0 - cfg.vehicle_length;
    out.trajectory.push_back({t, s0, v0, a0, s1, v1, gap, action});
    out.min_gap = std::min(out.min_gap, gap);
    if (gap <= cfg.safety_gap) ++out.violations;

    a0 = FeasibleAcceleration(a0, cfg.ego_jerk, dt, action, cfg.bounds);
    const double v_next = FeasibleSpeed(v0, a0, dt);
    s0 += 0.5 * (v0 + v_next) * dt;
    v0 = v_next;
  }
  return out;
}

std::vector<DecisionRecord> FixedWeightBaseline(const InteractionSequence& seq,
                                                const WeightVector& lambda0,
                                                const WeightVector& lambda1,
                                                const NormalizationConstants& norms,
                                                const AccelBounds& bounds) {
  if (!lambda0.OnSimplex() || !lambda1.OnSimplex()) {
    throw std::invalid_argument("baseline weights must lie on the simplex");
  }
  std::vector<DecisionRecord> out;
  out.reserve(seq.frames.size());
  for (const auto& f : seq.frames) {
    out.push_back(MakeRecord(seq, f, DecideWithWeights(f.ctx, lambda0, lambda1, norms, bounds)));
  }
  return out;
}

std::vector<DecisionRecord> RecomputeWithWeights(std::span<const DecisionRecord> records,
                                                 const WeightVector& lambda0,
                                                 const WeightVector& lambda1,
                                                 const NormalizationConstants& norms,
                                                 const AccelBounds& bounds) {
  if (!lambda0.OnSimplex() || !lambda1.OnSimplex()) {
    throw std::invalid_argument("baseline weights must lie on the simplex");
  }
  std::vector<DecisionRecord> out(records.begin(), records.end());
  for (auto& r : out) {
    const AdaptiveDecision d = DecideWithWeights(r.ctx, lambda0, lambda1, norms, bounds);
    r.sigma0 = d.equilibrium.sigma0;
    r.sigma1 = d.equilibrium.sigma1;
    r.q0 = d.q0;
    r.q1 = d.q1;
    r.lambda0 = lambda0;
    r.lambda1 = lambda1;
    r.degenerate = d.degenerate;
  }
  return out;
}

std::vector<DecisionRecord> DecideSequence(const MappingModel& model,
                                           const InteractionSequence& seq,
                                           const NormalizationConstants& norms,
                                           const AccelBounds& bounds) {
  std::vector<DecisionRecord> out;
  out.reserve(seq.frames.size());
  for (const auto& f : seq.frames) {
    out.push_back(MakeRecord(seq, f, AdaptiveDecide(model, f.ctx, f.obs, norms, bounds)));
  }
  return out;
}

std::vector<std::vector<DecisionRecord>> GroupBySequence(std::span<const DecisionRecord> records) {
  std::vector<std::vector<DecisionRecord>> groups;
  std::map<std::pair<int, int>, std::size_t> index;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.ego_id, r.other_id);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, groups.size()).first;
      groups.emplace_back();
    }
    groups[it->second].push_back(r);
  }
  return groups;
}

void EvalReport::CheckInvariants() const {
  const auto check = [](bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("report invariant violated: ") + what);
  };
  check(matches <= points, "matches <= points");
  check(points == 0 || similarity == static_cast<double>(matches) / static_cast<double>(points),
        "similarity == matches / points");
  check(std::llround(similarity * static_cast<double>(points)) ==
            static_cast<long long>(matches),
        "similarity * points rounds to matches");
  check(ego.matches + other.matches == matches && ego.points + other.points == points,
        "per-vehicle counts add up");
  check(violations <= sequences, "violations <= sequences");
  check(sequences == 0 || violation_rate == static_cast<double>(violations) /
                                                static_cast<double>(sequences),
        "violation_rate == violations / sequences");
  check(dynamic_subset.matches <= dynamic_subset.points, "dynamic matches <= points");
}

EvalReport BuildReport(std::span<const DecisionRecord> records,
                       std::span<const ReplayResult> replays) {
  if (records.empty()) throw std::invalid_argument("report: no decision records");
  const auto groups = GroupBySequence(records);
  if (!replays.empty() && replays.size() != groups.size()) {
    throw std::invalid_argument("report: replay results do not align with sequences");
  }
  EvalReport rep;
  rep.sequences = groups.size();
  rep.ego = CountMatches(records, Which::kEgo);
  rep.other = CountMatches(records, Which::kOther);
  rep.points = rep.ego.points + rep.other.points;
  rep.matches = rep.ego.matches + rep.other.matches;
  rep.similarity = SimilarityRate(rep.matches, rep.points);
  rep.replayed = !replays.empty();

  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& g = groups[i];
    SequenceSummary s;
    s.ego_id = g.front().ego_id;
    s.other_id = g.front().other_id;
    const MatchCount c = CountMatches(g, Which::kBoth);
    s.points = c.points;
    s.matches = c.matches;
    s.similarity = SimilarityRate(c.matches, c.points);
    for (std::size_t k = 1; k < g.size(); ++k) {
      if (g[k].label0 != g[k - 1].label0 || g[k].label1 != g[k - 1].label1) s.dynamic = true;
    }
    if (s.dynamic) {
      ++rep.dynamic_subset.sequences;
      rep.dynamic_subset.points += s.points;
      rep.dynamic_subset.matches += s.matches;
    }
    if (rep.replayed) {
      s.violations = replays[i].violations;
      if (replays[i].violations > 0) ++rep.violations;
    }
    rep.per_sequence.push_back(s);
  }
  if (rep.dynamic_subset.points > 0) {
    rep.dynamic_subset.similarity =
        SimilarityRate(rep.dynamic_subset.matches, rep.dynamic_subset.points);
  }
  rep.violation_rate =
      static_cast<double>(rep.violations) / static_cast<double>(rep.sequences);
  rep.CheckInvariants();
  return rep;
}

}  // namespace adaptmerge
