#pragma once

#include <cstdint>
#include <span>

namespace agac::rollout {

// Backward-recursive generalized advantage estimation over one environment
// segment. dones[t] set means the episode terminated at step t: no value
// bootstraps across that boundary. bootstrap_value is V(s_T) for the state
// after the last step, used only when the segment ends mid-episode.
void compute_gae_segment(std::span<const double> rewards, std::span<const double> values,
                         std::span<const std::uint8_t> dones, double bootstrap_value, double gamma,
                         double lambda, std::span<double> adv_out);

}  // namespace agac::rollout
