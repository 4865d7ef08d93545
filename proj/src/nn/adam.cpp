#include "nn/adam.hpp"

#include <cassert>
#include <cmath>

#include "common/parallel.hpp"

namespace agac::nn {

double clip_grad_norm(std::span<double> grad, double max_norm) {
  const std::size_t n = grad.size();
  double shard_sum[kGradShards] = {};
  parallel_for(kGradShards, [&](std::int64_t s) {
    const std::size_t lo = n * s / kGradShards;
    const std::size_t hi = n * (s + 1) / kGradShards;
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += grad[i] * grad[i];
    shard_sum[s] = acc;
  });
  double total = 0.0;
  for (int s = 0; s < kGradShards; ++s) total += shard_sum[s];
  const double norm = std::sqrt(total);
  if (std::isfinite(norm) && norm > max_norm) {
    const double scale = max_norm / norm;
    parallel_for(static_cast<std::int64_t>(n), [&](std::int64_t i) { grad[i] *= scale; });
  }
  return norm;
}

void adam_step(AdamState& st, std::span<double> params, std::span<const double> grad,
               const AdamConfig& cfg) {
  assert(st.m.size() == params.size() && grad.size() == params.size());
  st.t += 1;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
  double* m = st.m.data();
  double* v = st.v.data();
  double* p = params.data();
  const double* g = grad.data();
  parallel_for(static_cast<std::int64_t>(params.size()), [&](std::int64_t i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    p[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
  });
}

}  // namespace agac::nn
