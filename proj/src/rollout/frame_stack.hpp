#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "env/grid.hpp"

namespace agac::rollout {

// Last 4 observations, oldest first. Slots not yet filled at episode start
// contribute no active features (zero frames). The newest observation
// always occupies the last slot region of the feature vector.
class FrameStack {
 public:
  static constexpr int kFrames = 4;
  static constexpr std::int32_t kDim = kFrames * env::Observation::kDim;

  void reset(const env::Observation& first) {
    count_ = 1;
    frames_[0] = first;
  }

  void push(const env::Observation& next) {
    if (count_ < kFrames) {
      frames_[count_++] = next;
    } else {
      for (int i = 0; i + 1 < kFrames; ++i) frames_[i] = frames_[i + 1];
      frames_[kFrames - 1] = next;
    }
  }

  const env::Observation& newest() const { return frames_[count_ - 1]; }
  int frames_filled() const { return count_; }

  // Appends ascending active indices; frame f (chronological) maps to slot
  // kFrames - count + f so the newest frame always lands in the last slot.
  void active_indices(std::vector<std::int32_t>& out) const {
    for (int f = 0; f < count_; ++f) {
      const int slot = kFrames - count_ + f;
      frames_[f].active_indices(out, slot * env::Observation::kDim);
    }
  }

 private:
  std::array<env::Observation, kFrames> frames_{};
  int count_ = 0;
};

}  // namespace agac::rollout
