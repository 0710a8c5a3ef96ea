#include <gtest/gtest.h>

#include <random>
#include <set>

#include "moon/world.hpp"

using namespace moon;

namespace {

const WorldParams kDesk = WorldParams::desk_scale();

bool door_on_side(const Room& room, Side side) {
  return std::any_of(room.doors.begin(), room.doors.end(), [&](const Door& d) { return d.side == side; });
}

}  // namespace

TEST(World, FullScaleIsConnectedAndDeterministic) {
  const Workspace a = generate_workspace(1, WorldParams{});
  const Workspace b = generate_workspace(1, WorldParams{});
  EXPECT_EQ(a.cols(), 300);
  EXPECT_EQ(a.rows(), 300);
  EXPECT_TRUE(a.cells() == b.cells());
  EXPECT_DOUBLE_EQ(free_space_coverage(a), 1.0);
}

TEST(World, ConnectedAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_DOUBLE_EQ(free_space_coverage(generate_workspace(seed, kDesk)), 1.0) << "seed " << seed;
  }
  WorldParams mid;
  mid.width_m = 150;
  mid.height_m = 150;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    EXPECT_DOUBLE_EQ(free_space_coverage(generate_workspace(seed, mid)), 1.0);
  }
}

TEST(World, DifferentSeedsDiffer) {
  EXPECT_FALSE(generate_workspace(1, kDesk).cells() == generate_workspace(2, kDesk).cells());
}

TEST(World, EveryRoomHasADoorOnEachSide) {
  const Workspace ws = generate_workspace(3, WorldParams{});
  ASSERT_FALSE(ws.rooms().empty());
  for (const Room& room : ws.rooms()) {
    for (Side s : {Side::North, Side::South, Side::East, Side::West}) EXPECT_TRUE(door_on_side(room, s));
    for (const Door& d : room.doors) {
      const bool horizontal = d.side == Side::North || d.side == Side::South;
      for (int k = 0; k < d.width; ++k) {
        const Cell c = horizontal ? Cell{d.first.x + k, d.first.y} : Cell{d.first.x, d.first.y + k};
        EXPECT_TRUE(ws.is_free(c));
      }
    }
  }
}

TEST(World, DeskScaleWallFraction) {
  const double f = wall_fraction(generate_workspace(7, kDesk));
  EXPECT_GE(f, 0.05);
  EXPECT_LE(f, 0.5);
}

TEST(World, RejectsBadParameters) {
  WorldParams p = kDesk;
  p.room_min_m = 80;
  p.room_max_m = 90;
  EXPECT_THROW(generate_workspace(1, p), ConfigError);
  p = kDesk;
  p.width_m = -1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = kDesk;
  p.resolution_m = 0.7;  // does not divide 60
  EXPECT_THROW(p.validate(), ConfigError);
  p = kDesk;
  p.room_max_m = 5;
  EXPECT_THROW(p.validate(), ConfigError);
}

TEST(World, DumpAndParseRoundTrip) {
  const Workspace ws = generate_workspace(5, kDesk);
  const Workspace back = parse_grid(dump_grid(ws));
  EXPECT_TRUE(back.cells() == ws.cells());
  EXPECT_THROW(parse_grid("..\n...\n"), ConfigError);
  EXPECT_THROW(parse_grid("..x\n"), ConfigError);
}

TEST(LineOfSight, DegenerateAndOpen) {
  const Workspace ws = parse_grid(".....\n.....\n.....\n.....\n.....\n");
  EXPECT_TRUE(line_of_sight(ws, {2.5, 2.5}, {2.5, 2.5}));
  EXPECT_TRUE(line_of_sight(ws, {0.5, 0.5}, {4.5, 3.5}));
}

TEST(LineOfSight, WallSegmentOnFiveByFive) {
  const Workspace ws = parse_grid(
      ".....\n"
      "..#..\n"
      "..#..\n"
      "..#..\n"
      ".....\n");
  // row 2 passes straight through the wall cell (2, 2)
  EXPECT_FALSE(line_of_sight(ws, {0.5, 2.5}, {4.5, 2.5}));
  EXPECT_FALSE(line_of_sight(ws, {4.5, 2.5}, {0.5, 2.5}));
  // rows 0 and 4 are open
  EXPECT_TRUE(line_of_sight(ws, {0.5, 0.5}, {4.5, 0.5}));
  EXPECT_TRUE(line_of_sight(ws, {0.5, 4.5}, {4.5, 4.5}));
  // (0.5,0.5)->(4.5,4.5) runs along the diagonal: cells (0,0),(1,1),(2,2)... hits the wall
  EXPECT_FALSE(line_of_sight(ws, {0.5, 0.5}, {4.5, 4.5}));
}

TEST(LineOfSight, CornerTouchCountsBothNeighbours) {
  // the segment passes exactly through the corner shared by (0,0),(1,0),(0,1),(1,1)
  const Workspace ws = parse_grid(".#\n..\n");
  EXPECT_FALSE(line_of_sight(ws, {0.5, 0.5}, {1.5, 1.5}));
  const Workspace open = parse_grid("..\n..\n");
  EXPECT_TRUE(line_of_sight(open, {0.5, 0.5}, {1.5, 1.5}));
}

TEST(LineOfSight, SymmetricOnSampledPairs) {
  const Workspace ws = generate_workspace(11, kDesk);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(0.0, 59.999);
  for (int i = 0; i < 2000; ++i) {
    const Pose a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
    ASSERT_EQ(line_of_sight(ws, a, b), line_of_sight(ws, b, a)) << a.x_m << ',' << a.y_m << " " << b.x_m << ','
                                                                 << b.y_m;
  }
}

TEST(Placement, CardinalityIdsAndDeterminism) {
  const Workspace ws = generate_workspace(1, WorldParams{});
  const EntityPlacement p = place_entities(9, ws, 10);
  ASSERT_EQ(p.landmarks.size(), 10u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(p.landmarks[static_cast<std::size_t>(i)].id, i);
  const EntityPlacement q = place_entities(9, ws, 10);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(p.landmarks[i].pose, q.landmarks[i].pose);
  EXPECT_EQ(p.target, q.target);
  EXPECT_EQ(p.start, q.start);
}

TEST(Placement, InvariantsOnDeskScale) {
  const PlacementParams params;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Workspace ws = generate_workspace(seed, kDesk);
    const EntityPlacement p = place_entities(seed, ws, 20, params);
    std::set<std::pair<int, int>> cells;
    auto add = [&](const Pose& pose) {
      const Cell c = ws.cell_of(pose);
      EXPECT_TRUE(ws.is_free(c));
      return cells.insert({c.x, c.y}).second;
    };
    for (const Landmark& l : p.landmarks) {
      EXPECT_TRUE(add(l.pose));
      EXPECT_GT(l.relevance, 0.0);
    }
    EXPECT_TRUE(add(p.start));
    EXPECT_TRUE(add(p.target));
    double min_sep = 1e9;
    for (std::size_t i = 0; i < p.landmarks.size(); ++i)
      for (std::size_t j = i + 1; j < p.landmarks.size(); ++j)
        min_sep = std::min(min_sep, distance(p.landmarks[i].pose, p.landmarks[j].pose));
    EXPECT_GE(min_sep, 2.0 * ws.resolution() - 1e-9);
    EXPECT_GT(distance(p.start, p.target), params.short_range_m);
    ASSERT_GE(p.target_landmark, 0);
    const Landmark& anchor = p.landmarks[static_cast<std::size_t>(p.target_landmark)];
    EXPECT_LE(distance(anchor.pose, p.target), params.target_spread_m + 1e-9);
  }
}

TEST(Placement, RelevanceDrawnInRangeWhenNotUniform) {
  PlacementParams params;
  params.uniform_relevance = false;
  const Workspace ws = generate_workspace(2, kDesk);
  const EntityPlacement p = place_entities(4, ws, 15, params);
  for (const Landmark& l : p.landmarks) {
    EXPECT_GE(l.relevance, 0.5);
    EXPECT_LE(l.relevance, 1.0);
  }
}

TEST(Placement, UniformTargetMode) {
  PlacementParams params;
  params.target_mode = TargetMode::Uniform;
  const Workspace ws = generate_workspace(2, kDesk);
  const EntityPlacement p = place_entities(4, ws, 5, params);
  EXPECT_EQ(p.target_landmark, -1);
  EXPECT_TRUE(ws.is_free(ws.cell_of(p.target)));
}

TEST(Placement, InsufficientFreeSpace) {
  const Workspace tiny = parse_grid("...\n");
  EXPECT_THROW(place_entities(1, tiny, 2), ConfigError);
}
