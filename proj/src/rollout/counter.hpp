#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace agac::rollout {

// Episodic state-visitation counts keyed by observation hash; cleared at
// every episode boundary.
class EpisodicCounter {
 public:
  void reset() { counts_.clear(); }

  // Increments the count for this observation and returns 1/sqrt(n).
  double scale(std::uint64_t obs_hash) {
    const int n = ++counts_[obs_hash];
    return 1.0 / std::sqrt(static_cast<double>(n));
  }

  std::size_t distinct() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

 private:
  std::unordered_map<std::uint64_t, int> counts_;
};

}  // namespace agac::rollout
