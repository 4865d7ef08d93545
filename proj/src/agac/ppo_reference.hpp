#pragma once

#include <cstdint>
#include <vector>

#include "agac/config.hpp"
#include "agac/losses.hpp"
#include "agac/updater.hpp"
#include "common/rng.hpp"
#include "rollout/trajectory.hpp"

namespace agac::train {

// Plain clipped-surrogate PPO written as a direct, minimal loop: GAE
// advantages, value targets A + V, shuffled minibatches, actor and critic
// Adam steps. Deliberately independent of Updater so the two can be
// compared bit for bit when the bonus and the adversary are switched off.
// Uses the same seed-derived shuffle stream as Updater.
class PpoUpdater {
 public:
  PpoUpdater(const AgacConfig& cfg, std::uint64_t seed);

  UpdateMetrics update(Agent& agent, const rollout::Trajectory& traj);
  std::int64_t frames_done() const { return frames_; }

 private:
  AgacConfig cfg_;
  Rng shuffle_rng_;
  std::int64_t frames_ = 0;
  int consecutive_skips_ = 0;

  nn::BatchBuffers actor_buf_, critic_buf_;
  std::vector<double> dout_, grad_actor_, grad_critic_;
  std::vector<int> perm_;
  std::vector<nn::SparseInput> mb_inputs_;
  std::vector<int> mb_actions_;
  std::vector<double> mb_adv_, mb_logp_, mb_tgt_;
};

}  // namespace agac::train
