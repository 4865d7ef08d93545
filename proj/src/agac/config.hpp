#pragma once

#include <cstdint>
#include <vector>

namespace agac::train {

// Hyperparameters of the three-network update. Defaults are the MiniGrid
// settings; validate() throws std::invalid_argument on out-of-range values.
struct AgacConfig {
  double gamma = 0.99;
  double lambda = 0.95;
  double clip_eps = 0.2;
  double entropy_coef = 0.01;
  double value_coef = 0.5;  // weight on the critic MSE
  double adv_coef = 4e-5;   // weight on the adversary KL loss
  double c0 = 4e-4;         // initial bonus coefficient, annealed to 0
  double lr = 3e-4;         // actor and critic step size
  double lr_ratio = 0.3;    // adversary lr = lr_ratio * lr
  double grad_clip = 0.5;
  int epochs = 4;
  int minibatches = 8;
  int n_envs = 16;
  int horizon = 128;    // steps per env per batch
  int frame_stack = 4;  // must equal rollout::FrameStack::kFrames
  std::vector<int> hidden = {128, 128};
  std::int64_t total_frames = 3'000'000;
  // Horizon of the linear c decay; 0 means total_frames. Letting it exceed
  // total_frames runs a shorter study under the standard schedule (the
  // bonus is then still live when the run stops).
  std::int64_t anneal_frames = 0;
  bool count_bonus = true;

  void validate() const;

  bool operator==(const AgacConfig&) const = default;

  double adversary_lr() const { return lr * lr_ratio; }
  int batch_frames() const { return n_envs * horizon; }
  // With the bonus, the adversary loss, and counting all off, the update
  // is plain PPO and the adversary can be skipped entirely.
  bool ppo_mode() const { return c0 == 0.0 && adv_coef == 0.0 && !count_bonus; }
};

// Linear decay: c0 * max(0, 1 - frames_done / horizon), horizon being
// anneal_frames when set and total_frames otherwise.
double anneal_c(const AgacConfig& cfg, std::int64_t frames_done);

}  // namespace agac::train
