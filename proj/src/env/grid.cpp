#include "env/grid.hpp"

#include <sstream>
#include <stdexcept>

#include "common/rng.hpp"

namespace agac::env {

int GridState::room_of(int r, int c) const {
  for (std::size_t i = 0; i < rooms.size(); ++i)
    if (rooms[i].interior_contains(r, c)) return static_cast<int>(i);
  for (std::size_t i = 0; i < rooms.size(); ++i)
    if (rooms[i].contains(r, c)) return static_cast<int>(i);
  return -1;
}

StepResult step(GridState& s, int action) {
  if (action < 0 || action >= kNumActions) throw std::out_of_range("action index out of range");
  if (s.done) throw std::logic_error("step called on a finished episode");
  StepResult res;
  const int fr = s.agent_r + kDr[s.heading];
  const int fc = s.agent_c + kDc[s.heading];
  const bool facing_valid = s.in_bounds(fr, fc);
  switch (action) {
    case kTurnLeft:
      s.heading = (s.heading + 3) & 3;
      break;
    case kTurnRight:
      s.heading = (s.heading + 1) & 3;
      break;
    case kForward:
      if (facing_valid && s.at(fr, fc).walkable()) {
        s.agent_r = fr;
        s.agent_c = fc;
        if (s.at(fr, fc).obj == Obj::Goal) {
          res.done = true;
          if (!s.scenario.reward_free) res.reward = 1.0;
        }
      }
      break;
    case kPickup:
      if (facing_valid && !s.carrying && s.at(fr, fc).obj == Obj::Key) {
        s.carrying = true;
        s.carried_color = s.at(fr, fc).color;
        s.at(fr, fc) = Cell{Obj::Floor, Color::Grey, DoorState::Open};
      }
      break;
    case kDrop:
      if (facing_valid && s.carrying && s.at(fr, fc).obj == Obj::Floor) {
        s.at(fr, fc) = Cell{Obj::Key, s.carried_color, DoorState::Open};
        s.carrying = false;
      }
      break;
    case kToggle:
      if (facing_valid && s.at(fr, fc).obj == Obj::Door) {
        Cell& door = s.at(fr, fc);
        if (door.state == DoorState::Closed)
          door.state = DoorState::Open;
        else if (door.state == DoorState::Open)
          door.state = DoorState::Closed;
        else if (s.carrying && s.carried_color == door.color)
          door.state = DoorState::Open;
      }
      break;
    case kDone:
      break;
  }
  s.step_count += 1;
  if (!res.done && s.step_count >= s.scenario.max_steps()) res.done = true;
  s.done = res.done;
  return res;
}

namespace {

// World coordinates of view cell (vr, vc); agent sits at view (6, 3).
inline void view_to_world(const GridState& s, int vr, int vc, int& wr, int& wc) {
  const int f = Observation::kView - 1 - vr;
  const int l = vc - 3;
  switch (s.heading) {
    case 0: wr = s.agent_r - f; wc = s.agent_c + l; break;
    case 1: wr = s.agent_r + l; wc = s.agent_c + f; break;
    case 2: wr = s.agent_r + f; wc = s.agent_c - l; break;
    default: wr = s.agent_r - l; wc = s.agent_c - f; break;
  }
}

}  // namespace

Observation observe(const GridState& s) {
  constexpr int V = Observation::kView;
  bool visible[V][V] = {};
  bool through[V][V] = {};
  for (int vc = 0; vc < V; ++vc) {
    int wr, wc;
    view_to_world(s, V - 1, vc, wr, wc);
    if (!s.in_bounds(wr, wc)) continue;
    visible[V - 1][vc] = true;
    through[V - 1][vc] = s.at(wr, wc).see_through();
  }
  for (int vr = V - 2; vr >= 0; --vr) {
    for (int vc = 0; vc < V; ++vc) {
      int wr, wc;
      view_to_world(s, vr, vc, wr, wc);
      if (!s.in_bounds(wr, wc)) continue;
      bool lit = false;
      for (int dc = -1; dc <= 1 && !lit; ++dc) {
        const int pc = vc + dc;
        if (pc < 0 || pc >= V) continue;
        lit = visible[vr + 1][pc] && through[vr + 1][pc];
      }
      if (lit) {
        visible[vr][vc] = true;
        through[vr][vc] = s.at(wr, wc).see_through();
      }
    }
  }

  Observation obs;
  for (int vr = 0; vr < V; ++vr) {
    for (int vc = 0; vc < V; ++vc) {
      const int k = (vr * V + vc) * 3;
      if (!visible[vr][vc]) continue;
      int wr, wc;
      view_to_world(s, vr, vc, wr, wc);
      Cell cell = s.at(wr, wc);
      if (cell.obj == Obj::Goal && s.scenario.reward_free)
        cell = Cell{Obj::Floor, Color::Grey, DoorState::Open};
      if (vr == V - 1 && vc == 3 && s.carrying)
        cell = Cell{Obj::Key, s.carried_color, DoorState::Open};
      obs.codes[k] = static_cast<std::uint8_t>(cell.obj) + 1;
      obs.codes[k + 1] = static_cast<std::uint8_t>(cell.color);
      obs.codes[k + 2] = (cell.obj == Obj::Door) ? static_cast<std::uint8_t>(cell.state) : 0;
    }
  }
  return obs;
}

std::uint64_t Observation::hash() const {
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(codes.data()), codes.size()));
}

void Observation::active_indices(std::vector<std::int32_t>& out, std::int32_t base) const {
  for (int k = 0; k < kCells; ++k) {
    const std::uint8_t type = codes[k * 3];
    if (type == 0) continue;
    const std::int32_t cell_base = base + k * kChannels;
    out.push_back(cell_base + (type - 1));
    out.push_back(cell_base + 5 + codes[k * 3 + 1]);
    out.push_back(cell_base + 5 + kNumColors + codes[k * 3 + 2]);
  }
}

std::string render_ascii(const GridState& s) {
  std::ostringstream os;
  const char heading_glyph[4] = {'^', '>', 'v', '<'};
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      if (r == s.agent_r && c == s.agent_c) {
        os << heading_glyph[s.heading];
        continue;
      }
      const Cell& cell = s.at(r, c);
      char glyph = '?';
      switch (cell.obj) {
        case Obj::Floor: glyph = '.'; break;
        case Obj::Wall: glyph = '#'; break;
        case Obj::Key: glyph = 'k'; break;
        case Obj::Goal: glyph = 'G'; break;
        case Obj::Door:
          glyph = cell.state == DoorState::Open ? '/'
                : cell.state == DoorState::Closed ? '+'
                                                  : 'L';
          break;
      }
      os << glyph;
    }
    os << '\n';
  }
  os << "step " << s.step_count << "/" << s.scenario.max_steps();
  if (s.carrying) os << " carrying key color " << static_cast<int>(s.carried_color);
  os << '\n';
  return os.str();
}

}  // namespace agac::env
