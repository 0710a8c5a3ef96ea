#include <gtest/gtest.h>

#include <string>

#include "moon/sensing.hpp"

using namespace moon;

namespace {

std::string open_field(int n) {
  std::string s;
  for (int y = 0; y < n; ++y) s += std::string(static_cast<std::size_t>(n), '.') + "\n";
  return s;
}

EntityPlacement placement_with(std::vector<Landmark> landmarks, Pose target) {
  EntityPlacement p;
  p.landmarks = std::move(landmarks);
  p.target = target;
  return p;
}

}  // namespace

TEST(Sensor, ConfigValidation) {
  EXPECT_NO_THROW(SensorConfig{}.validate());
  EXPECT_THROW((SensorConfig{3.0, 3.0, true}.validate()), ConfigError);
  EXPECT_THROW((SensorConfig{10.0, 0.0, true}.validate()), ConfigError);
}

TEST(Sense, RepeatedObservationGainsNothing) {
  const Workspace ws = parse_grid(open_field(21));
  const auto placement = placement_with({{0, {12.5, 10.5}, 1.0}}, {20.5, 20.5});
  BeliefMap belief = BeliefMap::blank_for(ws);
  const SensorConfig cfg{6.0, 2.0, true};
  const auto first = sense(ws, placement, belief, {10.5, 10.5}, cfg);
  EXPECT_GT(first.newly_revealed_cells, 0u);
  EXPECT_EQ(first.new_landmarks, std::vector<int>{0});
  const auto second = sense(ws, placement, belief, {10.5, 10.5}, cfg);
  EXPECT_EQ(second.newly_revealed_cells, 0u);
  EXPECT_TRUE(second.new_landmarks.empty());
  EXPECT_EQ(belief.observed_landmarks().size(), 1u);
}

TEST(Sense, RevealsExactlyTheDiskWithoutOcclusion) {
  const Workspace ws = parse_grid(open_field(21));
  BeliefMap belief = BeliefMap::blank_for(ws);
  const SensorConfig cfg{4.0, 1.0, false};
  sense(ws, placement_with({}, {0.5, 0.5}), belief, {10.5, 10.5}, cfg);
  std::size_t expected = 0;
  for (int y = 0; y < 21; ++y)
    for (int x = 0; x < 21; ++x) {
      const bool inside = (x - 10) * (x - 10) + (y - 10) * (y - 10) <= 16;
      expected += inside;
      EXPECT_EQ(belief.at({x, y}) != Knowledge::Unknown, inside) << x << ',' << y;
    }
  EXPECT_EQ(belief.known_count(), expected);
}

TEST(Sense, TargetWithinShortRange) {
  const Workspace ws = parse_grid(open_field(11));
  BeliefMap belief = BeliefMap::blank_for(ws);
  const SensorConfig cfg{8.0, 3.0, false};
  EXPECT_FALSE(sense(ws, placement_with({}, {9.5, 5.5}), belief, {5.5, 5.5}, cfg).target_detected);
  EXPECT_TRUE(sense(ws, placement_with({}, {8.5, 5.5}), belief, {5.5, 5.5}, cfg).target_detected);
  ASSERT_TRUE(belief.target_found());
  EXPECT_EQ(*belief.target_found(), (Pose{8.5, 5.5}));
}

TEST(Sense, WallBlocksLandmarkOnlyWithOcclusion) {
  const Workspace ws = parse_grid(
      "..#..\n"
      "..#..\n"
      "..#..\n"
      "..#..\n"
      "..#..\n");
  const auto placement = placement_with({{0, {4.5, 2.5}, 1.0}}, {4.5, 4.5});
  {
    BeliefMap belief = BeliefMap::blank_for(ws);
    const auto ev = sense(ws, placement, belief, {0.5, 2.5}, SensorConfig{10.0, 1.0, true});
    EXPECT_TRUE(ev.new_landmarks.empty());
    EXPECT_FALSE(belief.is_observed(0));
    // the wall itself is seen, nothing behind it
    EXPECT_EQ(belief.at({2, 2}), Knowledge::Wall);
    EXPECT_EQ(belief.at({3, 2}), Knowledge::Unknown);
  }
  {
    BeliefMap belief = BeliefMap::blank_for(ws);
    const auto ev = sense(ws, placement, belief, {0.5, 2.5}, SensorConfig{10.0, 1.0, false});
    EXPECT_EQ(ev.new_landmarks, std::vector<int>{0});
    EXPECT_EQ(belief.at({3, 2}), Knowledge::Free);
  }
}

TEST(Belief, MonotoneKnowledge) {
  BeliefMap belief(4, 4, 1.0);
  EXPECT_TRUE(belief.reveal({1, 1}, Knowledge::Free));
  EXPECT_FALSE(belief.reveal({1, 1}, Knowledge::Wall));
  EXPECT_EQ(belief.at({1, 1}), Knowledge::Free);
  EXPECT_FALSE(belief.reveal({2, 2}, Knowledge::Unknown));
  EXPECT_EQ(belief.known_count(), 1u);
  EXPECT_TRUE((belief.passable()[Cell{1, 1}]));
}

TEST(Belief, VisitedRequiresObserved) {
  BeliefMap belief(4, 4, 1.0);
  EXPECT_THROW(belief.mark_visited(3), std::logic_error);
  EXPECT_TRUE(belief.observe_landmark({3, {1.5, 1.5}, 0.7}, 0));
  EXPECT_FALSE(belief.observe_landmark({3, {2.5, 2.5}, 0.1}, 5));
  EXPECT_DOUBLE_EQ(belief.observed_landmarks().at(3).relevance, 0.7);
  EXPECT_TRUE(belief.mark_visited(3));
  EXPECT_FALSE(belief.mark_visited(3));
}

TEST(Sense, MonotoneAcrossAWalk) {
  const Workspace ws = generate_workspace(4, WorldParams::desk_scale());
  const auto placement = place_entities(4, ws, 8);
  BeliefMap belief = BeliefMap::blank_for(ws);
  const SensorConfig cfg{12.0, 3.0, true};
  std::size_t known = 0;
  const auto passable = ws.passable();
  for (int x = 0; x < ws.cols(); ++x) {
    const Cell c{x, 1};
    if (!ws.is_free(c)) continue;
    sense(ws, placement, belief, ws.center(c), cfg);
    EXPECT_GE(belief.known_count(), known);
    known = belief.known_count();
  }
  // soundness: known cells agree with the ground truth
  for (int y = 0; y < ws.rows(); ++y)
    for (int x = 0; x < ws.cols(); ++x) {
      const Knowledge k = belief.at({x, y});
      if (k != Knowledge::Unknown) { EXPECT_EQ(k == Knowledge::Free, ws.is_free({x, y})); }
    }
}

TEST(Frontier, FullyRevealedMapHasNone) {
  const Workspace ws = parse_grid(open_field(9));
  BeliefMap belief = BeliefMap::blank_for(ws);
  sense(ws, placement_with({}, {0.5, 0.5}), belief, {4.5, 4.5}, SensorConfig{20.0, 1.0, false});
  EXPECT_TRUE(frontier_clusters(belief).empty());
}

TEST(Frontier, SingleDiskGivesOneRing) {
  const Workspace ws = parse_grid(open_field(41));
  BeliefMap belief = BeliefMap::blank_for(ws);
  sense(ws, placement_with({}, {0.5, 0.5}), belief, {20.5, 20.5}, SensorConfig{8.0, 1.0, false});
  const auto clusters = frontier_clusters(belief);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_NEAR(clusters[0].centroid.x_m, 20.5, 1e-9);
  EXPECT_NEAR(clusters[0].centroid.y_m, 20.5, 1e-9);
  for (const Cell& c : clusters[0].cells) {
    EXPECT_TRUE(is_frontier_cell(belief, c));
    const double d2 = (c.x - 20) * (c.x - 20) + (c.y - 20) * (c.y - 20);
    EXPECT_LE(d2, 64.0);
    EXPECT_GT(d2, 36.0);  // only the outer ring touches Unknown
  }
}

TEST(Frontier, WallSplitsTheRingIntoTwoArcs) {
  std::string grid;
  for (int y = 0; y < 41; ++y) grid += std::string(20, '.') + "#" + std::string(20, '.') + "\n";
  const Workspace ws = parse_grid(grid);
  BeliefMap belief = BeliefMap::blank_for(ws);
  sense(ws, placement_with({}, {0.5, 0.5}), belief, {19.5, 20.5}, SensorConfig{8.0, 1.0, false});
  const auto clusters = frontier_clusters(belief);
  ASSERT_EQ(clusters.size(), 2u);
  // ordered by lowest (y, x) cell; the left arc's topmost cell comes first
  EXPECT_LT(clusters[0].centroid.x_m, 20.0);
  EXPECT_GT(clusters[1].centroid.x_m, 21.0);
}

TEST(Frontier, CompleteAndSoundOnRandomBelief) {
  const Workspace ws = generate_workspace(8, WorldParams::desk_scale());
  const auto placement = place_entities(8, ws, 5);
  BeliefMap belief = BeliefMap::blank_for(ws);
  sense(ws, placement, belief, placement.start, SensorConfig{15.0, 3.0, true});
  std::size_t listed = 0;
  for (const auto& fc : frontier_clusters(belief)) {
    listed += fc.size;
    EXPECT_TRUE(std::is_sorted(fc.cells.begin(), fc.cells.end(), yx_less));
    for (const Cell& c : fc.cells) EXPECT_TRUE(is_frontier_cell(belief, c));
  }
  std::size_t expected = 0;
  for (int y = 0; y < belief.rows(); ++y)
    for (int x = 0; x < belief.cols(); ++x) {
      if (!belief.is_known_free({x, y})) continue;
      bool touches = false;
      for (const auto& [dx, dy] : {std::pair{1, 0}, std::pair{-1, 0}, std::pair{0, 1}, std::pair{0, -1}}) {
        const Cell n{x + dx, y + dy};
        touches = touches || (belief.in_bounds(n) && belief.at(n) == Knowledge::Unknown);
      }
      expected += touches;
    }
  EXPECT_EQ(listed, expected);
}

TEST(Belief, TextSnapshots) {
  BeliefMap belief(3, 2, 1.0);
  belief.reveal({0, 0}, Knowledge::Free);
  belief.reveal({1, 0}, Knowledge::Wall);
  EXPECT_EQ(dump_belief_grid(belief), ".#?\n???\n");
  belief.observe_landmark({2, {0.5, 0.5}, 0.75}, 4);
  EXPECT_EQ(landmarks_csv(belief), "id,x,y,relevance,observed_step\n2,0.5,0.5,0.75,4\n");
}
