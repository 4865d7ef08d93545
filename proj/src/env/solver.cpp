#include "env/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace agac::env {

namespace {

struct DoorInfo {
  int r, c;
  Color color;
};

constexpr int kMaxDoors = 14;

struct SearchCtx {
  const GridState* g;
  std::vector<DoorInfo> doors;
  int key_r = -1, key_c = -1;
  Color key_color = Color::Grey;

  int door_at(int r, int c) const {
    for (std::size_t d = 0; d < doors.size(); ++d)
      if (doors[d].r == r && doors[d].c == c) return static_cast<int>(d);
    return -1;
  }
};

// Packed state: r(5) c(5) heading(2) carrying(1) doorstates(2 each).
using Key = std::uint64_t;

Key pack(int r, int c, int h, bool carry, std::uint32_t doors) {
  return static_cast<Key>(r) | static_cast<Key>(c) << 5 | static_cast<Key>(h) << 10 |
         static_cast<Key>(carry) << 12 | static_cast<Key>(doors) << 13;
}

DoorState door_state(std::uint32_t doors, int d) {
  return static_cast<DoorState>((doors >> (2 * d)) & 3u);
}

std::uint32_t with_door_state(std::uint32_t doors, int d, DoorState st) {
  doors &= ~(3u << (2 * d));
  return doors | (static_cast<std::uint32_t>(st) << (2 * d));
}

}  // namespace

std::optional<std::vector<int>> solve(const GridState& g) {
  SearchCtx ctx;
  ctx.g = &g;
  std::uint32_t doors0 = 0;
  int keys = 0;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      const Cell& cell = g.at(r, c);
      if (cell.obj == Obj::Door) {
        const int d = static_cast<int>(ctx.doors.size());
        if (d >= kMaxDoors) throw std::runtime_error("solver: too many doors");
        doors0 = with_door_state(doors0, d, cell.state);
        ctx.doors.push_back({r, c, cell.color});
      } else if (cell.obj == Obj::Key) {
        if (++keys > 1) throw std::runtime_error("solver: multiple keys unsupported");
        ctx.key_r = r;
        ctx.key_c = c;
        ctx.key_color = cell.color;
      }
    }
  }
  bool carry0 = g.carrying;
  if (carry0) ctx.key_color = g.carried_color;

  const Key start = pack(g.agent_r, g.agent_c, g.heading, carry0, doors0);
  // parent: state -> (previous state, action)
  std::unordered_map<Key, std::pair<Key, std::uint8_t>> parent;
  parent.emplace(start, std::make_pair(start, 255));
  std::deque<Key> queue{start};

  const int actions[5] = {kTurnLeft, kTurnRight, kForward, kPickup, kToggle};

  auto reconstruct = [&](Key final_state, int last_action) {
    std::vector<int> seq{last_action};
    Key cur = final_state;
    while (true) {
      auto [prev, act] = parent.at(cur);
      if (act == 255) break;
      seq.push_back(act);
      cur = prev;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  while (!queue.empty()) {
    const Key cur = queue.front();
    queue.pop_front();
    const int r = cur & 31, c = (cur >> 5) & 31, h = (cur >> 10) & 3;
    const bool carry = (cur >> 12) & 1;
    const std::uint32_t doors = static_cast<std::uint32_t>(cur >> 13);
    const int fr = r + kDr[h], fc = c + kDc[h];
    const bool facing_valid = g.in_bounds(fr, fc);
    const int fd = facing_valid ? ctx.door_at(fr, fc) : -1;

    for (int a : actions) {
      int nr = r, nc = c, nh = h;
      bool ncarry = carry;
      std::uint32_t ndoors = doors;
      switch (a) {
        case kTurnLeft: nh = (h + 3) & 3; break;
        case kTurnRight: nh = (h + 1) & 3; break;
        case kForward: {
          if (!facing_valid) continue;
          const Cell& cell = g.at(fr, fc);
          bool walkable;
          if (fd >= 0)
            walkable = door_state(doors, fd) == DoorState::Open;
          else if (fr == ctx.key_r && fc == ctx.key_c && !carry)
            walkable = false;
          else
            walkable = cell.obj == Obj::Floor || cell.obj == Obj::Goal ||
                       (fr == ctx.key_r && fc == ctx.key_c);
          if (!walkable) continue;
          if (cell.obj == Obj::Goal) return reconstruct(cur, kForward);
          nr = fr;
          nc = fc;
          break;
        }
        case kPickup:
          if (!facing_valid || carry || fr != ctx.key_r || fc != ctx.key_c) continue;
          ncarry = true;
          break;
        case kToggle: {
          if (fd < 0) continue;
          const DoorState st = door_state(doors, fd);
          DoorState nst = st;
          if (st == DoorState::Closed)
            nst = DoorState::Open;
          else if (st == DoorState::Open)
            nst = DoorState::Closed;
          else if (carry && ctx.key_color == ctx.doors[fd].color)
            nst = DoorState::Open;
          if (nst == st) continue;
          ndoors = with_door_state(doors, fd, nst);
          break;
        }
      }
      const Key next = pack(nr, nc, nh, ncarry, ndoors);
      if (parent.emplace(next, std::make_pair(cur, static_cast<std::uint8_t>(a))).second)
        queue.push_back(next);
    }
  }
  return std::nullopt;
}

bool position_reachable(const GridState& g, int from_r, int from_c, int to_r, int to_c,
                        bool closed_passable, bool locked_passable) {
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.width) * g.height, 0);
  std::deque<std::pair<int, int>> queue{{from_r, from_c}};
  seen[static_cast<std::size_t>(from_r) * g.width + from_c] = 1;
  while (!queue.empty()) {
    auto [r, c] = queue.front();
    queue.pop_front();
    if (r == to_r && c == to_c) return true;
    for (int h = 0; h < 4; ++h) {
      const int nr = r + kDr[h], nc = c + kDc[h];
      if (!g.in_bounds(nr, nc)) continue;
      auto& mark = seen[static_cast<std::size_t>(nr) * g.width + nc];
      if (mark) continue;
      const Cell& cell = g.at(nr, nc);
      bool pass = cell.walkable() || cell.obj == Obj::Key;
      if (cell.obj == Obj::Door) {
        if (cell.state == DoorState::Closed) pass = pass || closed_passable;
        if (cell.state == DoorState::Locked) pass = pass || locked_passable;
      }
      if (!pass) continue;
      mark = 1;
      queue.push_back({nr, nc});
    }
  }
  return false;
}

}  // namespace agac::env
