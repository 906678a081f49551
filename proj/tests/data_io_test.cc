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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "adaptmerge/data_io.h"
#include "adaptmerge/synthetic.h"

namespace adaptmerge {
namespace {

constexpr const char* kHeader =
    "frame,id,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId\n";

std::string ErrorOf(std::string_view csv) {
  try {
    ParseTracksCsv(csv);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseTracksCsvTest, SmallFixture) {
  const std::string csv = std::string(kHeader) +
                          "2,1,10.5,1.8,20,0,0.1,0,1\n"
                          "1,1,10.0,1.8,20,0,0.1,0,1\n"
                          "1,2,30.0,5.6,22,-0.1,0,0,2\n";
  const auto tracks = ParseTracksCsv(csv);
  ASSERT_EQ(tracks.size(), 2u);
  ASSERT_EQ(tracks.at(1).size(), 2u);
  EXPECT_EQ(tracks.at(1)[0].frame, 1);
  EXPECT_EQ(tracks.at(1)[1].frame, 2);
  EXPECT_EQ(tracks.at(1)[1].x, 10.5);
  EXPECT_EQ(tracks.at(2)[0].vy, -0.1);
  EXPECT_EQ(tracks.at(2)[0].lane_id, 2);
  EXPECT_FALSE(tracks.at(2)[0].lc_prob.has_value());
}

TEST(ParseTracksCsvTest, ExtraColumnsAndOptionalProbability) {
  const std::string csv =
      "id,frame,width,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId,lcProb\n"
      "4,7,1.9,1,2,3,4,5,6,3,0.25\n"
      "4,8,1.9,1,2,3,4,5,6,3,\n";
  const auto tracks = ParseTracksCsv(csv);
  const Track& t = tracks.at(4);
  EXPECT_EQ(t[0].frame, 7);
  EXPECT_EQ(t[0].lane_id, 3);
  EXPECT_EQ(t[0].lc_prob, 0.25);
  EXPECT_FALSE(t[1].lc_prob.has_value());
}

TEST(ParseTracksCsvTest, MissingColumnNamed) {
  const std::string csv = "frame,id,x,y,xVelocity,yVelocity,yAcceleration,laneId\n1,1,0,0,0,0,0,1\n";
  EXPECT_NE(ErrorOf(csv).find("missing column xAcceleration"), std::string::npos);
}

TEST(ParseTracksCsvTest, NonNumericCellNamesRow) {
  const std::string csv = std::string(kHeader) + "1,1,0,0,0,0,0,0,1\n1,2,abc,0,0,0,0,0,1\n";
  const std::string err = ErrorOf(csv);
  EXPECT_NE(err.find("row 3"), std::string::npos) << err;
  EXPECT_NE(err.find("'abc'"), std::string::npos) << err;
  EXPECT_NE(err.find("column x"), std::string::npos) << err;
}

TEST(ParseTracksCsvTest, EmptyFile) {
  EXPECT_NE(ErrorOf("").find("empty"), std::string::npos);
  EXPECT_NE(ErrorOf(kHeader).find("empty"), std::string::npos);
}

TEST(ParseTracksCsvTest, DuplicateIdFrame) {
  const std::string csv = std::string(kHeader) + "1,1,0,0,0,0,0,0,1\n1,1,5,0,0,0,0,0,1\n";
  EXPECT_NE(ErrorOf(csv).find("duplicate (id, frame)"), std::string::npos);
}

TEST(ParseTracksCsvTest, FractionalIdRejected) {
  const std::string csv = std::string(kHeader) + "1,1.5,0,0,0,0,0,0,1\n";
  EXPECT_NE(ErrorOf(csv).find("non-integer"), std::string::npos);
}

TEST(ParseTracksCsvTest, ShuffledRowsGiveSameTracks) {
  SyntheticConfig cfg;
  cfg.pairs = 3;
  const Scene scene = GenerateSyntheticScene(cfg).scene;
  const std::string csv = SerializeTracksCsv(scene.tracks);
  std::vector<std::string> rows;
  std::size_t pos = csv.find('\n') + 1;
  const std::string header = csv.substr(0, pos);
  while (pos < csv.size()) {
    const std::size_t nl = csv.find('\n', pos);
    rows.push_back(csv.substr(pos, nl - pos + 1));
    pos = nl + 1;
  }
  Rng rng(3);
  for (std::size_t i = rows.size(); i > 1; --i) {
    std::swap(rows[i - 1], rows[static_cast<std::size_t>(rng.UniformInt(0, static_cast<int>(i) - 1))]);
  }
  std::string shuffled = header;
  for (const auto& r : rows) shuffled += r;
  EXPECT_EQ(ParseTracksCsv(shuffled), scene.tracks);
}

TEST(SceneRoundTripTest, SerializeThenParseIsIdentity) {
  SyntheticConfig cfg;
  cfg.pairs = 4;
  Scene scene = GenerateSyntheticScene(cfg).scene;
  scene.tracks.begin()->second[3].lc_prob = 0.123456789012345;
  const auto dir = std::filesystem::temp_directory_path() / "adaptmerge_data_io_test";
  SaveScene(scene, dir / "t.csv", dir / "m.json");
  const Scene back = LoadScene(dir / "t.csv", dir / "m.json");
  EXPECT_EQ(back, scene);
  SaveScene(back, dir / "t2.csv", dir / "m2.json");
  EXPECT_EQ(ReadFile(dir / "t.csv"), ReadFile(dir / "t2.csv"));
  std::filesystem::remove_all(dir);
}

TEST(MetaJsonTest, RoundTripAndValidation) {
  RecordingMeta m;
  m.frame_rate = 30;
  m.lane_markings = {0, 3.5, 7.0, 10.5};
  m.ramp_lane_ids = {3};
  m.ramp_end_x = 250;
  m.x_direction = -1;
  EXPECT_EQ(ParseMetaJson(SerializeMetaJson(m)), m);
  EXPECT_THROW(ParseMetaJson(R"({"frame_rate": 0, "lane_markings": [0, 1]})"), DataError);
  EXPECT_THROW(ParseMetaJson(R"({"frame_rate": 25, "lane_markings": [1, 0]})"), DataError);
  EXPECT_THROW(ParseMetaJson("not json"), DataError);
}

TEST(RecordingMetaTest, LaneCenters) {
  RecordingMeta m;
  m.lane_markings = {0, 3.75, 7.5};
  EXPECT_EQ(m.LaneCenter(1), 1.875);
  EXPECT_EQ(m.LaneCenter(2), 5.625);
  EXPECT_FALSE(m.LaneCenter(0).has_value());
  EXPECT_FALSE(m.LaneCenter(3).has_value());
}

TrackPoint At(std::int64_t frame, double x, int lane) {
  TrackPoint p;
  p.frame = frame;
  p.x = x;
  p.lane_id = lane;
  p.vx = 20;
  return p;
}

Track Straight(double x0, int lane, int frames = 10) {
  Track t;
  for (int k = 0; k < frames; ++k) t.push_back(At(k, x0 + 0.8 * k, lane));
  return t;
}

Scene MergeScene() {
  Scene s;
  s.meta.lane_markings = {0, 3.75, 7.5};
  s.meta.ramp_lane_ids = {2};
  s.meta.ramp_end_x = 300;
  Track ramp = Straight(100, 2);
  for (int k = 6; k < 10; ++k) ramp[k].lane_id = 1;
  s.tracks[10] = ramp;
  return s;
}

TEST(ExtractPairsTest, TrailingEgoAndLeader) {
  Scene s = MergeScene();
  s.tracks[20] = Straight(80, 1);
  s.tracks[30] = Straight(130, 1);
  const PairingReport r = ExtractPairs(s);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].ego_id, 20);
  EXPECT_EQ(r.pairs[0].other_id, 10);
  EXPECT_EQ(r.pairs[0].lead_id, 30);
  EXPECT_EQ(r.pairs[0].merge_frame, 5);
  EXPECT_EQ(r.pairs[0].overlap_frames, 10);
}

TEST(ExtractPairsTest, NearestBehindWins) {
  Scene s = MergeScene();
  s.tracks[1] = Straight(100 - 30, 1);
  s.tracks[2] = Straight(100 - 10, 1);
  const PairingReport r = ExtractPairs(s);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].ego_id, 2);
  EXPECT_FALSE(r.pairs[0].lead_id.has_value());
}

TEST(ExtractPairsTest, IndependentOfIdAssignment) {
  Scene a = MergeScene();
  a.tracks[1] = Straight(70, 1);
  a.tracks[2] = Straight(90, 1);
  Scene b = MergeScene();
  b.tracks[2] = Straight(70, 1);
  b.tracks[1] = Straight(90, 1);
  EXPECT_EQ(ExtractPairs(a).pairs[0].ego_id, 2);
  EXPECT_EQ(ExtractPairs(b).pairs[0].ego_id, 1);
}

TEST(ExtractPairsTest, NoRampVehicles) {
  Scene s;
  s.meta.lane_markings = {0, 3.75, 7.5};
  s.meta.ramp_lane_ids = {2};
  s.tracks[1] = Straight(0, 1);
  s.tracks[2] = Straight(50, 1);
  const PairingReport r = ExtractPairs(s);
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_EQ(r.ramp_vehicles, 0);
}

TEST(ExtractPairsTest, SkipsWithoutPartnerOrOverlap) {
  Scene s = MergeScene();
  s.tracks[5] = Straight(150, 1);
  PairingReport r = ExtractPairs(s);
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_EQ(r.skipped_no_partner, 1);

  Scene t = MergeScene();
  Track late;
  late.push_back(At(5, 90, 1));
  t.tracks[6] = late;
  r = ExtractPairs(t);
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_EQ(r.skipped_short_overlap, 1);
}

TEST(ExtractPairsTest, NegativeTravelDirection) {
  Scene s = MergeScene();
  s.meta.x_direction = -1;
  for (auto& p : s.tracks[10]) p.x = -p.x;
  s.tracks[20] = Straight(-80, 1);
  s.tracks[21] = Straight(-120, 1);
  const PairingReport r = ExtractPairs(s);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].ego_id, 20);
  EXPECT_EQ(r.pairs[0].lead_id, 21);
}

TEST(FindFrameTest, BinarySearch) {
  const Track t = Straight(0, 1, 5);
  ASSERT_NE(FindFrame(t, 3), nullptr);
  EXPECT_EQ(FindFrame(t, 3)->frame, 3);
  EXPECT_EQ(FindFrame(t, 7), nullptr);
  EXPECT_EQ(FindFrame({}, 0), nullptr);
}

}  // namespace
}  // namespace adaptmerge
