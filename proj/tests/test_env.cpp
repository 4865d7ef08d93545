#include <algorithm>
#include <doctest.h>
#include <set>

#include "common/rng.hpp"
#include "env/generate.hpp"
#include "env/grid.hpp"
#include "env/scenario.hpp"
#include "env/solver.hpp"

using namespace agac;
using namespace agac::env;

namespace {

bool grids_equal(const GridState& a, const GridState& b) {
  if (a.width != b.width || a.height != b.height) return false;
  for (int r = 0; r < a.height; ++r)
    for (int c = 0; c < a.width; ++c) {
      const Cell &x = a.at(r, c), &y = b.at(r, c);
      if (x.obj != y.obj || x.color != y.color || x.state != y.state) return false;
    }
  return a.agent_r == b.agent_r && a.agent_c == b.agent_c && a.heading == b.heading &&
         a.goal_r == b.goal_r && a.goal_c == b.goal_c;
}

// Minimal hand-built maze: one room spanning the whole grid.
GridState craft(int height, int width, Scenario sc = Scenario{}) {
  GridState g;
  g.scenario = sc;
  g.width = width;
  g.height = height;
  g.cells.assign(static_cast<std::size_t>(width) * height, Cell{});
  for (int r = 1; r + 1 < height; ++r)
    for (int c = 1; c + 1 < width; ++c) g.at(r, c) = Cell{Obj::Floor, Color::Grey, DoorState::Open};
  g.rooms.push_back({0, 0, height, width});
  return g;
}

int count_doors(const GridState& g, DoorState st) {
  int n = 0;
  for (const Cell& cell : g.cells)
    if (cell.obj == Obj::Door && cell.state == st) ++n;
  return n;
}

}  // namespace

TEST_CASE("scenario parsing and naming") {
  auto mr = Scenario::parse("MultiRoom-N4-S5");
  CHECK(mr.family == Scenario::Family::MultiRoom);
  CHECK(mr.n == 4);
  CHECK(mr.s == 5);
  CHECK_FALSE(mr.reward_free);
  CHECK(mr.name() == "MultiRoom-N4-S5");
  CHECK(mr.max_steps() == 80);

  auto kc = Scenario::parse("KeyCorridor-S3-R3");
  CHECK(kc.family == Scenario::Family::KeyCorridor);
  CHECK(kc.s == 3);
  CHECK(kc.r == 3);
  CHECK(kc.max_steps() == 270);
  CHECK(kc.name() == "KeyCorridor-S3-R3");

  auto rf = Scenario::parse("MultiRoom-N4-S5-rf");
  CHECK(rf.reward_free);
  CHECK(rf.name() == "MultiRoom-N4-S5-rf");
  CHECK(set_reward_free(mr, true) == rf);
  CHECK(set_reward_free(rf, false) == mr);

  CHECK(Scenario::parse("MultiRoom-N2-S4").max_steps() == 40);

  CHECK_THROWS(Scenario::parse("FourRooms-N2-S4"));
  CHECK_THROWS(Scenario::parse("MultiRoom-N4"));
  CHECK_THROWS(Scenario::parse("MultiRoom-N4-S5-R2"));
  CHECK_THROWS(Scenario::parse("MultiRoom-rf-N4-S5"));
  CHECK_THROWS(Scenario::parse("MultiRoom-N1-S5"));
  CHECK_THROWS(Scenario::parse("MultiRoom-N4-S3"));
  CHECK_THROWS(Scenario::parse("KeyCorridor-S2-R3"));
  CHECK_THROWS(Scenario::parse("KeyCorridor-S3"));
  CHECK_THROWS(Scenario::parse("KeyCorridor-Sx-R3"));
}

TEST_CASE("multiroom generation is deterministic") {
  const auto sc = Scenario::parse("MultiRoom-N2-S4");
  auto a = generate(sc, 0);
  auto b = generate(sc, 0);
  CHECK(grids_equal(a, b));
  auto c = generate(sc, 1);
  CHECK_FALSE(grids_equal(a, c));
}

TEST_CASE("multiroom structure over many seeds") {
  const auto sc = Scenario::parse("MultiRoom-N4-S5");
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto g = generate(sc, seed);
    CHECK(g.rooms.size() == 4);
    CHECK(count_doors(g, DoorState::Closed) == 3);
    CHECK(count_doors(g, DoorState::Locked) == 0);
    CHECK(count_doors(g, DoorState::Open) == 0);
    CHECK(g.at(g.goal_r, g.goal_c).obj == Obj::Goal);
    CHECK(g.room_of(g.agent_r, g.agent_c) == 0);
    CHECK(g.room_of(g.goal_r, g.goal_c) == 3);
    auto plan = solve(g);
    REQUIRE(plan.has_value());
    CHECK(plan->size() <= static_cast<std::size_t>(sc.max_steps()));
  }
}

TEST_CASE("executing the solver plan earns the sparse reward") {
  for (const char* name : {"MultiRoom-N2-S4", "MultiRoom-N4-S5", "KeyCorridor-S3-R3"}) {
    const auto sc = Scenario::parse(name);
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
      auto g = generate(sc, seed);
      auto plan = solve(g);
      REQUIRE(plan.has_value());
      double total = 0.0;
      bool done = false;
      for (int a : *plan) {
        REQUIRE_FALSE(done);
        auto res = step(g, a);
        total += res.reward;
        done = res.done;
      }
      CHECK(done);
      CHECK(total == 1.0);
      CHECK(g.step_count <= sc.max_steps());
    }
  }
}

TEST_CASE("keycorridor structure") {
  const auto sc = Scenario::parse("KeyCorridor-S3-R3");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = generate(sc, seed);
    CHECK(g.width == 7);
    CHECK(g.height == 7);
    CHECK(count_doors(g, DoorState::Locked) == 1);
    int keys = 0;
    Color key_color = Color::Grey, lock_color = Color::Red;
    int key_r = -1, key_c = -1;
    for (int r = 0; r < g.height; ++r)
      for (int c = 0; c < g.width; ++c) {
        const Cell& cell = g.at(r, c);
        if (cell.obj == Obj::Key) {
          ++keys;
          key_color = cell.color;
          key_r = r;
          key_c = c;
        }
        if (cell.obj == Obj::Door && cell.state == DoorState::Locked) lock_color = cell.color;
      }
    CHECK(keys == 1);
    CHECK(key_color == lock_color);
    CHECK(position_reachable(g, g.agent_r, g.agent_c, key_r, key_c, true, false));
    CHECK_FALSE(position_reachable(g, g.agent_r, g.agent_c, g.goal_r, g.goal_c, true, false));
    CHECK(position_reachable(g, g.agent_r, g.agent_c, g.goal_r, g.goal_c, true, true));
  }
}

TEST_CASE("step mechanics on a crafted grid") {
  auto g = craft(6, 8, Scenario::parse("MultiRoom-N2-S4"));
  g.agent_r = 2;
  g.agent_c = 2;
  g.heading = 0;  // facing the top wall row 1... row 1 is floor; row 0 wall

  SUBCASE("forward into wall is a no-op move") {
    g.agent_r = 1;
    auto res = step(g, kForward);
    CHECK(g.agent_r == 1);
    CHECK(g.agent_c == 2);
    CHECK(res.reward == 0.0);
    CHECK_FALSE(res.done);
    CHECK(g.step_count == 1);
  }

  SUBCASE("turns cycle the heading") {
    step(g, kTurnRight);
    CHECK(g.heading == 1);
    step(g, kTurnRight);
    CHECK(g.heading == 2);
    step(g, kTurnLeft);
    CHECK(g.heading == 1);
  }

  SUBCASE("reaching the goal pays 1 and terminates") {
    g.at(1, 2) = Cell{Obj::Goal, Color::Green, DoorState::Open};
    auto res = step(g, kForward);
    CHECK(res.reward == 1.0);
    CHECK(res.done);
    CHECK_THROWS_AS(step(g, kForward), std::logic_error);
  }

  SUBCASE("reward-free goal terminates with 0") {
    g.scenario.reward_free = true;
    g.at(1, 2) = Cell{Obj::Goal, Color::Green, DoorState::Open};
    auto res = step(g, kForward);
    CHECK(res.reward == 0.0);
    CHECK(res.done);
  }

  SUBCASE("step cap ends the episode with 0") {
    double total = 0.0;
    bool done = false;
    for (int t = 0; t < 40; ++t) {
      REQUIRE_FALSE(done);
      auto res = step(g, kDone);
      total += res.reward;
      done = res.done;
    }
    CHECK(done);
    CHECK(total == 0.0);
    CHECK(g.step_count == 40);
  }

  SUBCASE("pickup, drop and toggle") {
    g.at(1, 2) = Cell{Obj::Key, Color::Red, DoorState::Open};
    step(g, kPickup);
    CHECK(g.carrying);
    CHECK(g.carried_color == Color::Red);
    CHECK(g.at(1, 2).obj == Obj::Floor);
    // drop somewhere else
    step(g, kTurnRight);
    step(g, kDrop);
    CHECK_FALSE(g.carrying);
    CHECK(g.at(2, 3).obj == Obj::Key);
    // cannot pick up while facing floor
    step(g, kTurnLeft);
    step(g, kPickup);
    CHECK_FALSE(g.carrying);
  }

  SUBCASE("doors open, close and unlock") {
    g.at(1, 2) = Cell{Obj::Door, Color::Blue, DoorState::Closed};
    step(g, kToggle);
    CHECK(g.at(1, 2).state == DoorState::Open);
    step(g, kToggle);
    CHECK(g.at(1, 2).state == DoorState::Closed);

    g.at(1, 2).state = DoorState::Locked;
    step(g, kToggle);
    CHECK(g.at(1, 2).state == DoorState::Locked);
    g.carrying = true;
    g.carried_color = Color::Red;
    step(g, kToggle);
    CHECK(g.at(1, 2).state == DoorState::Locked);
    g.carried_color = Color::Blue;
    step(g, kToggle);
    CHECK(g.at(1, 2).state == DoorState::Open);

    // forward through a closed door is blocked
    g.at(1, 2).state = DoorState::Closed;
    step(g, kForward);
    CHECK(g.agent_r == 2);
    g.at(1, 2).state = DoorState::Open;
    step(g, kForward);
    CHECK(g.agent_r == 1);
  }

  SUBCASE("bad action index throws") {
    CHECK_THROWS_AS(step(g, 7), std::out_of_range);
    CHECK_THROWS_AS(step(g, -1), std::out_of_range);
  }
}

TEST_CASE("observation is egocentric and occluded") {
  auto g = craft(9, 9);
  g.agent_r = 4;
  g.agent_c = 4;
  g.heading = 0;

  SUBCASE("facing a wall at distance 1 hides everything beyond") {
    for (int c = 0; c < 9; ++c) g.at(3, c) = Cell{Obj::Wall, Color::Grey, DoorState::Open};
    auto obs = observe(g);
    // wall row appears at view row 5; rows 0..4 all unseen
    for (int vr = 0; vr <= 4; ++vr)
      for (int vc = 0; vc < 7; ++vc) CHECK(obs.codes[(vr * 7 + vc) * 3] == 0);
    for (int vc = 2; vc <= 4; ++vc) CHECK(obs.codes[(5 * 7 + vc) * 3] == 2);
  }

  SUBCASE("translation invariance") {
    auto h = craft(12, 13);
    h.agent_r = 6;
    h.agent_c = 7;
    h.heading = 0;
    g.at(3, 4) = Cell{Obj::Key, Color::Red, DoorState::Open};
    h.at(5, 7) = Cell{Obj::Key, Color::Red, DoorState::Open};
    // surroundings differ at range beyond walls only
    auto og = observe(g);
    auto oh = observe(h);
    // both see the key one cell ahead at view (5, 3)
    CHECK(og.codes[(5 * 7 + 3) * 3] == 4);
    CHECK(oh.codes[(5 * 7 + 3) * 3] == 4);
  }

  SUBCASE("rotating in place cycles through four distinct views") {
    g.at(3, 4) = Cell{Obj::Key, Color::Red, DoorState::Open};
    g.at(4, 6) = Cell{Obj::Door, Color::Blue, DoorState::Closed};
    g.at(6, 4) = Cell{Obj::Goal, Color::Green, DoorState::Open};
    auto o0 = observe(g);
    step(g, kTurnRight);
    auto o1 = observe(g);
    step(g, kTurnRight);
    auto o2 = observe(g);
    step(g, kTurnRight);
    auto o3 = observe(g);
    step(g, kTurnRight);
    auto o4 = observe(g);
    CHECK(o0 == o4);
    CHECK_FALSE(o0 == o1);
    CHECK_FALSE(o0 == o2);
    CHECK_FALSE(o0 == o3);
    CHECK_FALSE(o1 == o2);
  }

  SUBCASE("own cell at fixed index shows carried key") {
    auto obs = observe(g);
    CHECK(obs.codes[(6 * 7 + 3) * 3] == 1);  // floor
    g.carrying = true;
    g.carried_color = Color::Yellow;
    auto obs2 = observe(g);
    CHECK(obs2.codes[(6 * 7 + 3) * 3] == 4);  // key
    CHECK(obs2.codes[(6 * 7 + 3) * 3 + 1] == static_cast<int>(Color::Yellow));
  }
}

TEST_CASE("reward-free mode changes rewards and observations only") {
  const auto sc = Scenario::parse("MultiRoom-N2-S4");
  const auto rf = Scenario::parse("MultiRoom-N2-S4-rf");
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto a = generate(sc, seed);
    auto b = generate(rf, seed);
    CHECK(grids_equal(a, b));
  }

  // stand in front of the goal: visible normally, floor when reward-free
  auto g = craft(9, 9, sc);
  g.agent_r = 4;
  g.agent_c = 4;
  g.heading = 0;
  g.at(3, 4) = Cell{Obj::Goal, Color::Green, DoorState::Open};
  auto o = observe(g);
  CHECK(o.codes[(5 * 7 + 3) * 3] == 5);
  g.scenario.reward_free = true;
  auto orf = observe(g);
  CHECK(orf.codes[(5 * 7 + 3) * 3] == 1);
  bool any_goal = false;
  for (int k = 0; k < Observation::kCells; ++k) any_goal |= orf.codes[k * 3] == 5;
  CHECK_FALSE(any_goal);
  CHECK_FALSE(o.hash() == orf.hash());
}

TEST_CASE("active indices match the byte codes") {
  auto g = generate(Scenario::parse("MultiRoom-N4-S5"), 7);
  auto obs = observe(g);
  std::vector<std::int32_t> idx;
  obs.active_indices(idx, 0);
  int visible = 0;
  for (int k = 0; k < Observation::kCells; ++k)
    if (obs.codes[k * 3] != 0) ++visible;
  CHECK(idx.size() == static_cast<std::size_t>(3 * visible));
  CHECK(std::is_sorted(idx.begin(), idx.end()));
  CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
  for (auto i : idx) {
    CHECK(i >= 0);
    CHECK(i < Observation::kDim);
  }
  std::vector<std::int32_t> shifted;
  obs.active_indices(shifted, 686);
  for (std::size_t k = 0; k < idx.size(); ++k) CHECK(shifted[k] == idx[k] + 686);

  auto h1 = obs.hash();
  auto obs2 = obs;
  obs2.codes[0] = obs2.codes[0] == 0 ? 1 : 0;
  CHECK(h1 != obs2.hash());
}

TEST_CASE("episodes never exceed the cap under random play") {
  const auto sc = Scenario::parse("MultiRoom-N2-S4");
  Rng rng(55);
  for (int ep = 0; ep < 50; ++ep) {
    auto g = generate(sc, 1000 + ep);
    bool done = false;
    double total = 0.0;
    while (!done) {
      auto res = step(g, static_cast<int>(rng.next_below(kNumActions)));
      done = res.done;
      total += res.reward;
    }
    CHECK(g.step_count <= sc.max_steps());
    CHECK((total == 0.0 || total == 1.0));
  }
}
