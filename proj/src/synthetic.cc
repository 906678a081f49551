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

#include "adaptmerge/synthetic.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adaptmerge/mapping_model.h"

namespace adaptmerge {

namespace {

constexpr double kLaneWidth = 3.75;
constexpr int kMainLane = 1;
constexpr int kRampLane = 2;
constexpr double kRampStartX = 100.0;
constexpr double kRampEndX = 500.0;

double Sample(Rng& rng, const Range& r) { return rng.Uniform(r.lo, r.hi); }

struct Vehicle {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double a = 0.0;
  double vy = 0.0;
  int lane = kMainLane;
};

double Follow(double a, ActionLabel action, double jerk, double dt, const SyntheticConfig& cfg) {
  if (action == ActionLabel::kNYield) return std::min(cfg.accel_cap, std::max(a, 0.0) + jerk * dt);
  return std::max(cfg.accel_floor, std::min(a, 0.0) - jerk * dt);
}

TrackPoint Point(std::int64_t frame, const Vehicle& v) {
  TrackPoint p;
  p.frame = frame;
  p.x = v.x;
  p.y = v.y;
  p.vx = v.v;
  p.vy = v.vy;
  p.ax = v.a;
  p.ay = 0.0;
  p.lane_id = v.lane;
  return p;
}

void Advance(Vehicle& v, double dt) {
  const double v_next = std::max(0.0, v.v + v.a * dt);
  v.x += 0.5 * (v.v + v_next) * dt;
  v.v = v_next;
  v.y += v.vy * dt;
}

}  // namespace

std::vector<SyntheticRegime> DefaultRegimes() {
  return {
      {"open", WeightVector::FromFirst(0.35), WeightVector::FromFirst(0.25), {30, 55}, {90, 140},
       {26, 33}, {-1, 1}},
      {"tight", WeightVector::FromFirst(0.95), WeightVector::FromFirst(0.65), {5, 14}, {30, 55},
       {27, 33}, {0, 2}},
      {"mixed", WeightVector::FromFirst(0.8), WeightVector::FromFirst(0.45), {16, 28}, {60, 90},
       {22, 31}, {-1.5, 0.5}},
  };
}

SyntheticScene GenerateSyntheticScene(const SyntheticConfig& cfg) {
  if (cfg.pairs < 0 || cfg.regimes.empty()) {
    throw std::invalid_argument("synthetic: need a nonnegative pair count and a regime");
  }
  if (cfg.lc_start_min < 2 || cfg.lc_start_max < cfg.lc_start_min ||
      cfg.frame_stride <= cfg.lc_start_max + cfg.tail_frames) {
    throw std::invalid_argument("synthetic: inconsistent frame layout");
  }
  const double dt = 1.0 / cfg.frame_rate;
  const double main_center = 0.5 * kLaneWidth;
  const double ramp_center = 1.5 * kLaneWidth;

  SyntheticScene out;
  out.scene.meta.frame_rate = cfg.frame_rate;
  out.scene.meta.lane_markings = {0.0, kLaneWidth, 2.0 * kLaneWidth};
  out.scene.meta.ramp_lane_ids = {kRampLane};
  out.scene.meta.ramp_end_x = kRampEndX;
  out.scene.meta.x_direction = 1;

  Rng rng(cfg.seed);
  for (int p = 0; p < cfg.pairs; ++p) {
    const int r = rng.UniformInt(0, static_cast<int>(cfg.regimes.size()) - 1);
    const SyntheticRegime& reg = cfg.regimes[r];
    const int lc_start = rng.UniformInt(cfg.lc_start_min, cfg.lc_start_max);
    const double gap = Sample(rng, reg.gap);
    const double d_ahead = Sample(rng, reg.d_ahead);
    const double jerk0 = Sample(rng, cfg.jerk);
    const double jerk1 = Sample(rng, cfg.jerk);

    Vehicle ego;
    Vehicle ramp;
    Vehicle lead;
    ego.v = Sample(rng, reg.v0);
    ramp.v = ego.v + Sample(rng, reg.dv);
    lead.v = ramp.v + rng.Uniform(0.0, 2.0);
    ego.a = rng.Uniform(-0.3, 0.3);
    ramp.a = rng.Uniform(0.0, 0.3);
    ramp.x = kRampStartX;
    ego.x = ramp.x - gap - cfg.vehicle_length;
    lead.x = ramp.x + d_ahead + cfg.vehicle_length;
    ego.y = main_center;
    lead.y = main_center;
    ramp.y = ramp_center;
    ramp.lane = kRampLane;

    const int ego_id = 3 * p + 1;
    const int ramp_id = 3 * p + 2;
    const int lead_id = 3 * p + 3;
    Track& te = out.scene.tracks[ego_id];
    Track& tr = out.scene.tracks[ramp_id];
    Track& tl = out.scene.tracks[lead_id];

    const std::int64_t base = static_cast<std::int64_t>(p) * cfg.frame_stride;
    const int total = lc_start + cfg.tail_frames;
    for (int k = 0; k < total; ++k) {
      if (k <= lc_start + cfg.decision_tail) {
        KinematicContext ctx;
        ctx.gap_init = std::max(0.0, std::abs(ramp.x - ego.x) - cfg.vehicle_length);
        ctx.gap_ahead =
            std::max(0.0, std::min(lead.x - ramp.x - cfg.vehicle_length, kRampEndX - ramp.x));
        ctx.v0 = ego.v;
        ctx.v1 = ramp.v;
        ctx.a0 = ego.a;
        ctx.a1 = ramp.a;
        const AdaptiveDecision d = DecideWithWeights(ctx, reg.lambda0, reg.lambda1, cfg.norms);
        ego.a = Follow(ego.a, d.q0, jerk0, dt, cfg);
        ramp.a = Follow(ramp.a, d.q1, jerk1, dt, cfg);
      } else {
        ego.a = 0.0;
        ramp.a = 0.0;
      }
      if (k >= lc_start && ramp.y > main_center) {
        ramp.vy = -cfg.lateral_speed;
      } else {
        ramp.vy = 0.0;
      }
      ramp.lane = ramp.y >= kLaneWidth ? kRampLane : kMainLane;

      const std::int64_t frame = base + k;
      te.push_back(Point(frame, ego));
      tr.push_back(Point(frame, ramp));
      tl.push_back(Point(frame, lead));
      Advance(ego, dt);
      Advance(ramp, dt);
      Advance(lead, dt);
      ramp.y = std::max(ramp.y, main_center);
    }
    out.regime_of_pair.push_back(r);
    out.ego_ids.push_back(ego_id);
    out.ramp_ids.push_back(ramp_id);
    out.lead_ids.push_back(lead_id);
  }
  out.scene.meta.Validate();
  return out;
}

}  // namespace adaptmerge
