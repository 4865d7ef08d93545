#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "agac/config.hpp"
#include "agac/losses.hpp"
#include "common/rng.hpp"
#include "nn/adam.hpp"
#include "nn/kernels.hpp"
#include "rollout/trajectory.hpp"

namespace agac::train {

// Actor, critic, and adversary with their optimizer states. No parameter
// sharing anywhere.
struct Agent {
  nn::ParamSet actor, critic, adversary;
  nn::AdamState actor_opt, critic_opt, adversary_opt;

  Agent() = default;
  Agent(const AgacConfig& cfg, int in_dim, int n_actions, std::uint64_t seed);

  void save(std::ostream& os) const;
  static Agent load(std::istream& is);
};

struct UpdateMetrics {
  std::int64_t frames = 0;  // cumulative, after this update
  double c = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;     // unweighted critic MSE
  double adversary_loss = 0.0;  // unweighted mean KL(pi_old || pi_adv)
  double entropy = 0.0;
  double clip_frac = 0.0;
  double mean_kl = 0.0;     // batch mean of the collection-time KL snapshot
  double mean_bonus = 0.0;  // c * mean(scale * KL), the critic-target bonus
  int skipped = 0;          // minibatches dropped for non-finite losses
};

// One full update: modified advantages, KL-augmented critic targets, then
// epochs x minibatches of three independent Adam steps. Snapshot values
// (logp, probs, V, KL) come from the trajectory, so old-parameter terms
// are constants here and each loss only moves its own network.
class Updater {
 public:
  Updater(const AgacConfig& cfg, std::uint64_t seed);

  UpdateMetrics update(Agent& agent, const rollout::Trajectory& traj);
  std::int64_t frames_done() const { return frames_; }

 private:
  void gather(const rollout::Trajectory& traj, const std::vector<double>& adv,
              const std::vector<double>& tgt, int lo, int hi);

  AgacConfig cfg_;
  Rng shuffle_rng_;
  std::int64_t frames_ = 0;
  int consecutive_skips_ = 0;

  nn::BatchBuffers actor_buf_, critic_buf_, adv_buf_;
  std::vector<double> dout_, grad_actor_, grad_critic_, grad_adv_;
  std::vector<int> perm_;
  std::vector<nn::SparseInput> mb_inputs_;
  std::vector<int> mb_actions_;
  std::vector<double> mb_adv_, mb_logp_, mb_tgt_, mb_probs_;
};

}  // namespace agac::train
