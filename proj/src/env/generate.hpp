#pragma once

#include <cstdint>
#include <stdexcept>

#include "env/grid.hpp"

namespace agac::env {

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic in (scenario, seed); the reward-free flag does not affect
// the layout. Throws GenerationError after 100 failed attempts.
GridState generate(const Scenario& sc, std::uint64_t seed);

}  // namespace agac::env
