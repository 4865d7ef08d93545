#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "common/rng.hpp"
#include "env/generate.hpp"
#include "nn/kernels.hpp"
#include "rollout/counter.hpp"
#include "rollout/frame_stack.hpp"
#include "rollout/trajectory.hpp"

namespace agac::rollout {

struct CollectorConfig {
  env::Scenario scenario;
  int n_envs = 16;
  int steps = 128;
  std::uint64_t seed = 0;
  bool count_bonus = true;
  // Keep per-episode visit grids and observation hash lists (costs memory;
  // used by heatmaps and coverage reports).
  bool record_detail = false;
};

struct EpisodeRecord {
  std::uint64_t env_seed = 0;
  int env_index = 0;
  double ret = 0.0;
  int length = 0;
  bool reached_goal = false;
  int distinct_obs = 0;
  int rooms_visited = 0;
  // Present when record_detail is set.
  // Post-step positions only, so the grid sums to the episode length.
  int height = 0, width = 0;
  std::vector<std::uint16_t> visits;  // height x width position counts
  std::vector<std::uint64_t> obs_hashes;
};

// Steps n_envs environments under snapshot parameters and assembles a
// Trajectory of n_envs * steps samples. Episodes reset automatically with
// fresh deterministic seeds. The adversary network consumes no randomness,
// so runs with and without it see identical environment streams.
class Collector {
 public:
  explicit Collector(const CollectorConfig& cfg);

  Trajectory collect(const nn::ParamSet& actor, const nn::ParamSet& critic,
                     const nn::ParamSet* adversary);

  // Finished episodes accumulate here until drained.
  std::deque<EpisodeRecord>& episodes() { return episodes_; }
  std::int64_t frames_collected() const { return frames_; }
  const env::GridState& env_state(int e) const { return slots_[e].state; }

 private:
  struct Slot {
    env::GridState state;
    FrameStack stack;
    EpisodicCounter counter;
    Rng action_rng{0};
    std::uint64_t episode_counter = 0;
    double ep_return = 0.0;
    int ep_len = 0;
    std::uint32_t rooms_mask = 0;
    std::vector<std::uint16_t> visits;
    std::vector<std::uint64_t> obs_hashes;
  };

  void reset_slot(int e);
  void note_position(Slot& slot);

  CollectorConfig cfg_;
  std::vector<Slot> slots_;
  std::deque<EpisodeRecord> episodes_;
  std::int64_t frames_ = 0;

  nn::BatchBuffers actor_buf_, critic_buf_, adv_buf_;
  std::vector<std::int32_t> idx_arena_;
  std::vector<std::uint32_t> idx_off_;
};

}  // namespace agac::rollout
