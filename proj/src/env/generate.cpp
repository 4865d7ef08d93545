#include "env/generate.hpp"

#include <string>

#include "common/rng.hpp"
#include "env/solver.hpp"

namespace agac::env {

namespace {

constexpr int kCanvas = 25;
constexpr int kAttempts = 100;

struct DoorPlacement {
  int r, c;
};

Color random_color(Rng& rng) { return static_cast<Color>(rng.next_below(kNumColors)); }

bool place_multiroom(const Scenario& sc, Rng& rng, GridState& g) {
  std::vector<RoomRect> rooms;
  std::vector<DoorPlacement> doors;
  {
    const int h = rng.uniform_int(4, sc.s), w = rng.uniform_int(4, sc.s);
    const int top = rng.uniform_int(0, kCanvas - h), left = rng.uniform_int(0, kCanvas - w);
    rooms.push_back({top, left, h, w});
  }
  for (int i = 1; i < sc.n; ++i) {
    bool placed = false;
    for (int tries = 0; tries < 8 && !placed; ++tries) {
      const RoomRect& prev = rooms[i - 1];
      const int dir = rng.uniform_int(0, 3);
      const int h = rng.uniform_int(4, sc.s), w = rng.uniform_int(4, sc.s);
      RoomRect next{0, 0, h, w};
      DoorPlacement door{};
      switch (dir) {
        case 0:  // north
          door.c = rng.uniform_int(prev.left + 1, prev.left + prev.w - 2);
          door.r = prev.top;
          next.top = prev.top - h + 1;
          next.left = door.c - rng.uniform_int(1, w - 2);
          break;
        case 1:  // east
          door.r = rng.uniform_int(prev.top + 1, prev.top + prev.h - 2);
          door.c = prev.left + prev.w - 1;
          next.left = prev.left + prev.w - 1;
          next.top = door.r - rng.uniform_int(1, h - 2);
          break;
        case 2:  // south
          door.c = rng.uniform_int(prev.left + 1, prev.left + prev.w - 2);
          door.r = prev.top + prev.h - 1;
          next.top = prev.top + prev.h - 1;
          next.left = door.c - rng.uniform_int(1, w - 2);
          break;
        default:  // west
          door.r = rng.uniform_int(prev.top + 1, prev.top + prev.h - 2);
          door.c = prev.left;
          next.left = prev.left - w + 1;
          next.top = door.r - rng.uniform_int(1, h - 2);
          break;
      }
      if (next.top < 0 || next.left < 0 || next.top + next.h > kCanvas ||
          next.left + next.w > kCanvas)
        continue;
      bool overlap = false;
      for (int j = 0; j + 1 < i && !overlap; ++j) overlap = next.intersects(rooms[j]);
      if (overlap) continue;
      rooms.push_back(next);
      doors.push_back(door);
      placed = true;
    }
    if (!placed) return false;
  }

  g.width = g.height = kCanvas;
  g.cells.assign(static_cast<std::size_t>(kCanvas) * kCanvas, Cell{});
  for (const RoomRect& room : rooms)
    for (int r = room.top + 1; r < room.top + room.h - 1; ++r)
      for (int c = room.left + 1; c < room.left + room.w - 1; ++c)
        g.at(r, c) = Cell{Obj::Floor, Color::Grey, DoorState::Open};
  Color prev_color = Color::Grey;
  for (std::size_t k = 0; k < doors.size(); ++k) {
    Color col = random_color(rng);
    while (k > 0 && col == prev_color) col = random_color(rng);
    g.at(doors[k].r, doors[k].c) = Cell{Obj::Door, col, DoorState::Closed};
    prev_color = col;
  }

  const RoomRect& first = rooms.front();
  g.agent_r = rng.uniform_int(first.top + 1, first.top + first.h - 2);
  g.agent_c = rng.uniform_int(first.left + 1, first.left + first.w - 2);
  g.heading = rng.uniform_int(0, 3);
  const RoomRect& last = rooms.back();
  g.goal_r = rng.uniform_int(last.top + 1, last.top + last.h - 2);
  g.goal_c = rng.uniform_int(last.left + 1, last.left + last.w - 2);
  if (g.goal_r == g.agent_r && g.goal_c == g.agent_c) return false;
  g.at(g.goal_r, g.goal_c) = Cell{Obj::Goal, Color::Green, DoorState::Open};
  g.rooms = std::move(rooms);
  return true;
}

bool place_keycorridor(const Scenario& sc, Rng& rng, GridState& g) {
  const int s = sc.s, rows = sc.r;
  const int x1 = s - 1, x2 = 2 * (s - 1);
  g.width = 3 * (s - 1) + 1;
  g.height = rows * (s - 1) + 1;
  g.cells.assign(static_cast<std::size_t>(g.width) * g.height, Cell{});

  std::vector<RoomRect> rooms;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < 3; ++j) rooms.push_back({i * (s - 1), j * (s - 1), s, s});
  for (const RoomRect& room : rooms)
    for (int r = room.top + 1; r < room.top + room.h - 1; ++r)
      for (int c = room.left + 1; c < room.left + room.w - 1; ++c)
        g.at(r, c) = Cell{Obj::Floor, Color::Grey, DoorState::Open};
  // Open the corridor through the middle column.
  for (int i = 1; i < rows; ++i)
    for (int c = x1 + 1; c < x2; ++c)
      g.at(i * (s - 1), c) = Cell{Obj::Floor, Color::Grey, DoorState::Open};

  const int lock_row = rng.uniform_int(0, rows - 1);
  const int key_row = rng.uniform_int(0, rows - 1);
  const Color lock_color = random_color(rng);

  for (int i = 0; i < rows; ++i) {
    const int door_r = rng.uniform_int(i * (s - 1) + 1, i * (s - 1) + s - 2);
    if (i == lock_row)
      g.at(door_r, x2) = Cell{Obj::Door, lock_color, DoorState::Locked};
    else
      g.at(door_r, x2) = Cell{Obj::Door, random_color(rng), DoorState::Closed};
  }
  for (int i = 0; i < rows; ++i) {
    const int door_r = rng.uniform_int(i * (s - 1) + 1, i * (s - 1) + s - 2);
    g.at(door_r, x1) = Cell{Obj::Door, random_color(rng), DoorState::Closed};
  }

  const RoomRect& goal_room = rooms[static_cast<std::size_t>(lock_row) * 3 + 2];
  g.goal_r = rng.uniform_int(goal_room.top + 1, goal_room.top + goal_room.h - 2);
  g.goal_c = rng.uniform_int(goal_room.left + 1, goal_room.left + goal_room.w - 2);
  g.at(g.goal_r, g.goal_c) = Cell{Obj::Goal, Color::Green, DoorState::Open};

  const RoomRect& key_room = rooms[static_cast<std::size_t>(key_row) * 3];
  const int key_r = rng.uniform_int(key_room.top + 1, key_room.top + key_room.h - 2);
  const int key_c = rng.uniform_int(key_room.left + 1, key_room.left + key_room.w - 2);
  g.at(key_r, key_c) = Cell{Obj::Key, lock_color, DoorState::Open};

  // Agent somewhere in the corridor, on plain floor.
  std::vector<std::pair<int, int>> corridor;
  for (int r = 1; r + 1 < g.height; ++r)
    for (int c = x1 + 1; c < x2; ++c)
      if (g.at(r, c).obj == Obj::Floor) corridor.push_back({r, c});
  if (corridor.empty()) return false;
  const auto [ar, ac] = corridor[rng.next_below(corridor.size())];
  g.agent_r = ar;
  g.agent_c = ac;
  g.heading = rng.uniform_int(0, 3);

  if (!position_reachable(g, g.agent_r, g.agent_c, key_r, key_c, true, false)) return false;
  if (position_reachable(g, g.agent_r, g.agent_c, g.goal_r, g.goal_c, true, false)) return false;
  g.rooms = std::move(rooms);
  return true;
}

}  // namespace

GridState generate(const Scenario& sc, std::uint64_t seed) {
  sc.validate();
  Scenario layout = sc;
  layout.reward_free = false;
  Rng rng(mix_seed(seed, fnv1a64(layout.name())));
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    GridState g;
    g.scenario = sc;
    g.seed = seed;
    const bool placed = sc.family == Scenario::Family::MultiRoom ? place_multiroom(sc, rng, g)
                                                                 : place_keycorridor(sc, rng, g);
    if (!placed) continue;
    if (!solve(g)) continue;
    return g;
  }
  throw GenerationError("generation failed after 100 attempts: " + sc.name() + " seed " +
                        std::to_string(seed));
}

}  // namespace agac::env
