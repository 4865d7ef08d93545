#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "env/scenario.hpp"

namespace agac::env {

enum class Obj : std::uint8_t { Floor, Wall, Door, Key, Goal };
enum class Color : std::uint8_t { Red, Green, Blue, Purple, Yellow, Grey };
enum class DoorState : std::uint8_t { Open, Closed, Locked };

inline constexpr int kNumColors = 6;

struct Cell {
  Obj obj = Obj::Wall;
  Color color = Color::Grey;
  DoorState state = DoorState::Open;

  bool walkable() const {
    return obj == Obj::Floor || obj == Obj::Goal || (obj == Obj::Door && state == DoorState::Open);
  }
  bool see_through() const {
    return obj != Obj::Wall && !(obj == Obj::Door && state != DoorState::Open);
  }
};

enum Action : int {
  kTurnLeft = 0,
  kTurnRight = 1,
  kForward = 2,
  kPickup = 3,
  kDrop = 4,
  kToggle = 5,
  kDone = 6,
};
inline constexpr int kNumActions = 7;

// Headings: 0 = north (row decreasing), 1 = east, 2 = south, 3 = west.
inline constexpr int kDr[4] = {-1, 0, 1, 0};
inline constexpr int kDc[4] = {0, 1, 0, -1};

struct RoomRect {
  int top = 0, left = 0, h = 0, w = 0;
  bool contains(int r, int c) const {
    return r >= top && r < top + h && c >= left && c < left + w;
  }
  bool interior_contains(int r, int c) const {
    return r > top && r < top + h - 1 && c > left && c < left + w - 1;
  }
  bool intersects(const RoomRect& o) const {
    return top < o.top + o.h && o.top < top + h && left < o.left + o.w && o.left < left + w;
  }
};

struct GridState {
  Scenario scenario;
  int width = 0, height = 0;
  std::vector<Cell> cells;  // row-major
  int agent_r = 0, agent_c = 0;
  int heading = 0;
  bool carrying = false;
  Color carried_color = Color::Grey;
  int step_count = 0;
  bool done = false;
  std::uint64_t seed = 0;

  // Generator metadata, in placement order (MultiRoom: chain order).
  std::vector<RoomRect> rooms;
  int goal_r = 0, goal_c = 0;

  Cell& at(int r, int c) { return cells[static_cast<std::size_t>(r) * width + c]; }
  const Cell& at(int r, int c) const { return cells[static_cast<std::size_t>(r) * width + c]; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < height && c >= 0 && c < width; }
  // Index of the room containing (r, c), or -1.
  int room_of(int r, int c) const;
};

struct StepResult {
  double reward = 0.0;
  bool done = false;
};

// Deterministic transition; throws std::out_of_range on a bad action index.
StepResult step(GridState& s, int action);

// 7x7 egocentric view, heading-normalized so the agent faces up and sits at
// row 6, col 3. Each cell carries (type, color, state) byte codes; type 0
// means unseen. Visibility spreads away from the agent one row at a time
// through see-through cells (per-row wall shadowing).
struct Observation {
  static constexpr int kView = 7;
  static constexpr int kCells = kView * kView;
  static constexpr int kTypeCodes = 6;  // unseen + 5 object types
  static constexpr int kChannels = 5 + kNumColors + 3;
  static constexpr int kDim = kCells * kChannels;

  std::array<std::uint8_t, kCells * 3> codes{};

  std::uint64_t hash() const;
  // Appends the active one-hot feature indices (ascending) shifted by base.
  void active_indices(std::vector<std::int32_t>& out, std::int32_t base) const;
  bool operator==(const Observation&) const = default;
};

Observation observe(const GridState& s);

std::string render_ascii(const GridState& s);

}  // namespace agac::env
