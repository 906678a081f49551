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

#include "adaptmerge/calibration.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adaptmerge {

ActionLabel LabelBehavior(double ax, double jerk) {
  if (ax < 0.0) return ActionLabel::kYield;
  return jerk > 0.0 ? ActionLabel::kNYield : ActionLabel::kYield;
}

std::vector<double> MovingAverage(std::span<const double> values, int window) {
  if (window < 1) throw std::invalid_argument("moving average window must be >= 1");
  const int n = static_cast<int>(values.size());
  const int half = (window - 1) / 2;
  std::vector<double> out(values.size());
  for (int i = 0; i < n; ++i) {
    // Symmetric window so that linear signals pass through unchanged.
    const int h = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (int t = i - h; t <= i + h; ++t) sum += values[t];
    out[i] = sum / (2 * h + 1);
  }
  return out;
}

std::vector<double> JerkSeries(std::span<const double> ax, double dt, int smooth_window) {
  if (ax.size() < 2) throw CalibrationError("jerk series needs at least 2 samples");
  if (!(dt > 0.0)) throw std::invalid_argument("jerk series: dt must be > 0");
  const std::vector<double> a =
      smooth_window > 1 ? MovingAverage(ax, smooth_window) : std::vector<double>(ax.begin(), ax.end());
  const std::size_t n = a.size();
  std::vector<double> jerk(n);
  jerk.front() = (a[1] - a[0]) / dt;
  jerk.back() = (a[n - 1] - a[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) jerk[i] = (a[i + 1] - a[i - 1]) / (2.0 * dt);
  return jerk;
}

double LaneChangeProbability(double lateral_offset_toward_target, double vy_toward_target,
                             const LaneChangeHeuristic& h) {
  const double z = (lateral_offset_toward_target - h.o_half) / h.o_scale +
                   vy_toward_target / h.vy_scale;
  // Keep the result strictly inside (0, 1) even when exp saturates.
  const double p = 1.0 / (1.0 + std::exp(-z));
  constexpr double kEps = 1e-12;
  return std::clamp(p, kEps, 1.0 - kEps);
}

InteractionWindow DetectInteractionWindow(std::span<const double> prob,
                                          const std::vector<bool>& overtaken) {
  if (prob.empty()) throw CalibrationError("interaction window: empty probability series");
  if (overtaken.size() != prob.size()) {
    throw std::invalid_argument("interaction window: series length mismatch");
  }
  for (std::size_t i = 0; i < prob.size(); ++i) {
    if (prob[i] > 0.5 && !overtaken[i]) return {i, true};
  }
  return {prob.size() - 1, false};
}

void InteractionSequence::Validate() const {
  if (frames.size() < 2) throw CalibrationError("interaction sequence needs at least 2 timesteps");
  if (end_frame < frames.front().frame || end_frame > frames.back().frame) {
    throw CalibrationError("interaction sequence end_frame outside its frame range");
  }
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].frame <= frames[i - 1].frame) {
      throw CalibrationError("interaction sequence frames not strictly increasing");
    }
  }
  for (const auto& f : frames) f.ctx.Validate();
}

InteractionSequence CalibrateSequence(const Track& ego, const Track& other, const Track* lead,
                                      std::optional<double> ramp_end_x,
                                      const RecordingMeta& meta, const CalibrationConfig& cfg) {
  const double dir = meta.x_direction;
  const double dt = 1.0 / meta.frame_rate;

  // Frames where both vehicles exist; the interaction starts at the first.
  std::vector<const TrackPoint*> p0;
  std::vector<const TrackPoint*> p1;
  for (const auto& q : other) {
    if (const TrackPoint* e = FindFrame(ego, q.frame)) {
      p0.push_back(e);
      p1.push_back(&q);
    }
  }
  if (p0.size() < 2) {
    throw CalibrationError("tracks share fewer than 2 frames (ego " + std::to_string(p0.size()) +
                           " overlap)");
  }
  const std::size_t n = p0.size();

  std::vector<double> ax0(n);
  std::vector<double> ax1(n);
  for (std::size_t i = 0; i < n; ++i) {
    ax0[i] = p0[i]->ax * dir;
    ax1[i] = p1[i]->ax * dir;
  }
  const std::vector<double> jerk0 = JerkSeries(ax0, dt, cfg.smooth_window);
  const std::vector<double> jerk1 = JerkSeries(ax1, dt, cfg.smooth_window);

  // Lateral reference: the ramp vehicle's starting lane center, target side
  // is toward the main-road vehicle.
  const double y_ref = meta.LaneCenter(p1.front()->lane_id).value_or(p1.front()->y);
  const double toward = p0.front()->y < y_ref ? -1.0 : 1.0;
  const bool have_lc = std::all_of(p1.begin(), p1.end(),
                                   [](const TrackPoint* p) { return p->lc_prob.has_value(); });
  std::vector<double> prob(n);
  std::vector<bool> overtaken(n);
  for (std::size_t i = 0; i < n; ++i) {
    prob[i] = have_lc ? *p1[i]->lc_prob
                      : LaneChangeProbability((p1[i]->y - y_ref) * toward, p1[i]->vy * toward,
                                              cfg.lane_change);
    overtaken[i] = (p0[i]->x - p1[i]->x) * dir > 0.0;
  }
  const InteractionWindow window = DetectInteractionWindow(prob, overtaken);
  if (window.end_index < 1) {
    throw CalibrationError("interaction window shorter than 2 frames");
  }

  InteractionSequence seq;
  seq.dt = dt;
  seq.complete = window.complete;
  seq.end_frame = p0[window.end_index]->frame;
  for (std::size_t i = 0; i <= window.end_index; ++i) {
    const TrackPoint& e = *p0[i];
    const TrackPoint& o = *p1[i];
    SequenceFrame f;
    f.frame = e.frame;
    f.s0 = e.x * dir;
    f.s1 = o.x * dir;

    double ahead = std::numeric_limits<double>::infinity();
    if (lead) {
      if (const TrackPoint* l = FindFrame(*lead, e.frame)) {
        ahead = std::min(ahead, (l->x - o.x) * dir - cfg.vehicle_length);
      }
    }
    if (ramp_end_x) ahead = std::min(ahead, (*ramp_end_x - o.x) * dir);
    if (!std::isfinite(ahead)) {
      throw CalibrationError("no ramp geometry and no lead vehicle at frame " +
                             std::to_string(e.frame));
    }

    KinematicContext& c = f.ctx;
    c.gap_init = std::max(0.0, std::abs(f.s1 - f.s0) - cfg.vehicle_length);
    c.gap_ahead = std::max(0.0, ahead);
    c.v0 = std::abs(e.vx);
    c.v1 = std::abs(o.vx);
    c.a0 = ax0[i];
    c.a1 = ax1[i];
    if (cfg.jerk_source == JerkSource::kMeasured) {
      c.jerk0_mag = std::abs(jerk0[i]);
      c.jerk1_mag = std::abs(jerk1[i]);
    } else {
      c.jerk0_mag = cfg.nominal_jerk;
      c.jerk1_mag = cfg.nominal_jerk;
    }
    c.horizon = cfg.horizon;

    f.obs.d01_y = std::abs(o.y - e.y);
    f.obs.dv01_x = c.v1 - c.v0;
    f.obs.d01_x = c.gap_init;
    f.obs.d_ahead = c.gap_ahead;
    f.obs.v1_x = c.v1;

    f.label0 = LabelBehavior(ax0[i], jerk0[i]);
    f.label1 = LabelBehavior(ax1[i], jerk1[i]);
    seq.frames.push_back(f);
  }
  seq.Validate();
  return seq;
}

SceneCalibration CalibrateScene(const Scene& scene, const CalibrationConfig& cfg) {
  SceneCalibration out;
  const PairingReport pairs = ExtractPairs(scene);
  for (const VehiclePair& pr : pairs.pairs) {
    const Track* lead = pr.lead_id ? &scene.tracks.at(*pr.lead_id) : nullptr;
    try {
      InteractionSequence seq = CalibrateSequence(scene.tracks.at(pr.ego_id),
                                                  scene.tracks.at(pr.other_id), lead,
                                                  scene.meta.ramp_end_x, scene.meta, cfg);
      seq.ego_id = pr.ego_id;
      seq.other_id = pr.other_id;
      out.sequences.push_back(std::move(seq));
    } catch (const CalibrationError& e) {
      out.skipped.push_back("pair (" + std::to_string(pr.ego_id) + ", " +
                            std::to_string(pr.other_id) + "): " + e.what());
    }
  }
  return out;
}

}  // namespace adaptmerge
