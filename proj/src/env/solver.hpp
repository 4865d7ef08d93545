#pragma once

#include <optional>
#include <vector>

#include "env/grid.hpp"

namespace agac::env {

// Breadth-first search over (position, heading, carried key, door states).
// Uses the actions {left, right, forward, pickup, toggle}; drop is never
// needed in the supported layouts. Returns a solving action sequence, or
// nullopt when the goal is unreachable.
std::optional<std::vector<int>> solve(const GridState& s);

// Fast position-only reachability with doors forced passable or not; used
// for cheap structural checks.
bool position_reachable(const GridState& s, int from_r, int from_c, int to_r, int to_c,
                        bool closed_passable, bool locked_passable);

}  // namespace agac::env
