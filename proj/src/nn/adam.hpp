#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace agac::nn {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m, v;
  std::int64_t t = 0;

  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// Global L2 norm, computed with a fixed-shard reduction so the result does
// not depend on thread count. Scales grad in place when the norm exceeds
// max_norm. Returns the pre-clip norm.
double clip_grad_norm(std::span<double> grad, double max_norm);

// Bias-corrected Adam update, element-wise parallel.
void adam_step(AdamState& st, std::span<double> params, std::span<const double> grad,
               const AdamConfig& cfg);

}  // namespace agac::nn
