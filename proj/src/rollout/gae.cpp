#include "rollout/gae.hpp"

#include <cassert>

namespace agac::rollout {

void compute_gae_segment(std::span<const double> rewards, std::span<const double> values,
                         std::span<const std::uint8_t> dones, double bootstrap_value, double gamma,
                         double lambda, std::span<double> adv_out) {
  const int T = static_cast<int>(rewards.size());
  assert(values.size() == rewards.size() && dones.size() == rewards.size() &&
         adv_out.size() == rewards.size());
  double next_adv = 0.0;
  for (int t = T - 1; t >= 0; --t) {
    const double not_done = dones[t] ? 0.0 : 1.0;
    const double next_value = dones[t] ? 0.0 : (t + 1 < T ? values[t + 1] : bootstrap_value);
    const double delta = rewards[t] + gamma * next_value - values[t];
    next_adv = delta + gamma * lambda * not_done * next_adv;
    adv_out[t] = next_adv;
  }
}

}  // namespace agac::rollout
