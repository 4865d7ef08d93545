#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "common/parallel.hpp"
#include "nn/mlp.hpp"

namespace agac::nn {

// Batched forward/backward used by the training loop. Forward is parallel
// across samples; backward is parallel across kGradShards contiguous sample
// blocks, each accumulating into its own buffer, merged in fixed shard
// order. Per-element floating-point chains are fixed, so results are
// bitwise independent of thread count and match the serial reference.
struct BatchBuffers {
  MlpSpec spec;
  int cap = 0;
  std::vector<std::vector<double>> act;  // hidden activations, cap x dims[l+1]
  std::vector<double> out;               // cap x out_dim
  std::vector<std::vector<double>> shard_grad;
  std::vector<std::vector<double>> shard_tmp;

  void ensure(const MlpSpec& s, int B);
  void ensure_grad();

  double* act_row(int l, int b) {
    return act[l].data() + static_cast<std::size_t>(b) * spec.dims[l + 1];
  }
  const double* act_row(int l, int b) const {
    return act[l].data() + static_cast<std::size_t>(b) * spec.dims[l + 1];
  }
  double* out_row(int b) { return out.data() + static_cast<std::size_t>(b) * spec.out_dim(); }
  const double* out_row(int b) const {
    return out.data() + static_cast<std::size_t>(b) * spec.out_dim();
  }
};

void batch_forward(const ParamSet& p, std::span<const SparseInput> xs, BatchBuffers& buf);

// dout is B x out_dim row-major. Overwrites grad with the sum of per-sample
// gradients; the caller scales to a mean if it wants one.
void batch_backward(const ParamSet& p, std::span<const SparseInput> xs, BatchBuffers& buf,
                    const double* dout, std::span<double> grad);

std::pair<std::size_t, std::size_t> shard_range(std::size_t n, int s);

// Deterministic fixed-shard sum, independent of thread count.
double sharded_sum(std::span<const double> xs);

}  // namespace agac::nn
