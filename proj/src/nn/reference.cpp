#include "nn/reference.hpp"

#include <algorithm>
#include <cassert>

#include "common/parallel.hpp"

namespace agac::nn::ref {

void batch_forward(const ParamSet& p, std::span<const SparseInput> xs, BatchBuffers& buf) {
  const MlpSpec& spec = p.spec;
  const int B = static_cast<int>(xs.size());
  const int L = spec.layer_count();
  buf.ensure(spec, B);
  Tape tape;
  for (int b = 0; b < B; ++b) {
    forward_sparse(p, xs[b], tape);
    for (int l = 0; l + 1 < L; ++l)
      std::copy(tape.act[l].begin(), tape.act[l].end(), buf.act_row(l, b));
    std::copy(tape.out.begin(), tape.out.end(), buf.out_row(b));
  }
}

void batch_backward(const ParamSet& p, std::span<const SparseInput> xs, const BatchBuffers& buf,
                    const double* dout, std::span<double> grad) {
  const MlpSpec& spec = p.spec;
  const int L = spec.layer_count();
  const std::size_t B = xs.size();
  const int out_dim = spec.out_dim();
  assert(grad.size() == p.size());
  std::fill(grad.begin(), grad.end(), 0.0);
  std::vector<double> shard(p.size());
  Tape tape;
  tape.act.resize(L - 1);
  for (int s = 0; s < kGradShards; ++s) {
    auto [lo, hi] = shard_range(B, s);
    std::fill(shard.begin(), shard.end(), 0.0);
    for (std::size_t b = lo; b < hi; ++b) {
      for (int l = 0; l + 1 < L; ++l) {
        const int w = spec.dims[l + 1];
        tape.act[l].assign(buf.act_row(l, static_cast<int>(b)),
                           buf.act_row(l, static_cast<int>(b)) + w);
      }
      tape.out.assign(buf.out_row(static_cast<int>(b)), buf.out_row(static_cast<int>(b)) + out_dim);
      backward_sparse(p, xs[b], tape, {dout + b * out_dim, static_cast<std::size_t>(out_dim)},
                      shard);
    }
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += shard[i];
  }
}

}  // namespace agac::nn::ref
