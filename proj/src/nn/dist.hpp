#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "common/rng.hpp"

namespace agac::nn {

inline constexpr double kLogitClamp = 30.0;
inline constexpr int kMaxCategories = 16;

// Categorical distribution from raw logits. Logits are clamped to
// [-kLogitClamp, kLogitClamp] before the max-subtracted log-softmax.
struct Categorical {
  int n = 0;
  std::array<double, kMaxCategories> logp{};

  static Categorical from_logits(std::span<const double> logits);

  double log_prob(int a) const { return logp[a]; }
  double prob(int a) const;
  double entropy() const;
  static double kl(const Categorical& p, const Categorical& q);
  // Inverse-CDF walk in index order; consumes one uniform draw.
  int sample(Rng& rng) const;
};

// 1 where the clamp is inactive, 0 where it saturates; multiply into
// dL/dlogits when backpropagating through from_logits.
inline double clamp_mask(double raw_logit) {
  return (raw_logit > -kLogitClamp && raw_logit < kLogitClamp) ? 1.0 : 0.0;
}

}  // namespace agac::nn
