#include "nn/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "common/parallel.hpp"

namespace agac::nn {

void BatchBuffers::ensure(const MlpSpec& s, int B) {
  if (!(spec == s)) {
    spec = s;
    cap = 0;
    act.assign(spec.layer_count() - 1, {});
    out.clear();
    shard_grad.clear();
    shard_tmp.clear();
  }
  if (B > cap) {
    cap = B;
    for (int l = 0; l + 1 < spec.layer_count(); ++l)
      act[l].resize(static_cast<std::size_t>(cap) * spec.dims[l + 1]);
    out.resize(static_cast<std::size_t>(cap) * spec.out_dim());
  }
}

void BatchBuffers::ensure_grad() {
  if (shard_grad.empty()) {
    shard_grad.assign(kGradShards, std::vector<double>(spec.param_count()));
    shard_tmp.assign(kGradShards, std::vector<double>(2 * static_cast<std::size_t>(spec.max_width())));
  }
}

std::pair<std::size_t, std::size_t> shard_range(std::size_t n, int s) {
  return {n * s / kGradShards, n * (s + 1) / kGradShards};
}

double sharded_sum(std::span<const double> xs) {
  double partial[kGradShards] = {};
  parallel_for(kGradShards, [&](std::int64_t s) {
    auto [lo, hi] = shard_range(xs.size(), static_cast<int>(s));
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += xs[i];
    partial[s] = acc;
  });
  double total = 0.0;
  for (int s = 0; s < kGradShards; ++s) total += partial[s];
  return total;
}

void batch_forward(const ParamSet& p, std::span<const SparseInput> xs, BatchBuffers& buf) {
  const MlpSpec& spec = p.spec;
  const int B = static_cast<int>(xs.size());
  const int L = spec.layer_count();
  buf.ensure(spec, B);
  parallel_for(B, [&](std::int64_t b) {
    const int out0 = spec.dims[1];
    double* h = (L > 1) ? buf.act_row(0, static_cast<int>(b)) : buf.out_row(static_cast<int>(b));
    std::copy(p.b(0), p.b(0) + out0, h);
    const double* W0 = p.w(0);
    for (std::int32_t j : xs[b].idx) {
      const double* col = W0 + static_cast<std::size_t>(j) * out0;
      for (int i = 0; i < out0; ++i) h[i] += col[i];
    }
    if (L > 1)
      for (int i = 0; i < out0; ++i) h[i] = elu(h[i]);
    for (int l = 1; l < L; ++l) {
      const int in = spec.dims[l], out_d = spec.dims[l + 1];
      const double* prev = buf.act_row(l - 1, static_cast<int>(b));
      double* next = (l + 1 < L) ? buf.act_row(l, static_cast<int>(b))
                                 : buf.out_row(static_cast<int>(b));
      std::copy(p.b(l), p.b(l) + out_d, next);
      const double* W = p.w(l);
      for (int j = 0; j < in; ++j) {
        const double aj = prev[j];
        const double* col = W + static_cast<std::size_t>(j) * out_d;
        for (int i = 0; i < out_d; ++i) next[i] = std::fma(col[i], aj, next[i]);
      }
      if (l + 1 < L)
        for (int i = 0; i < out_d; ++i) next[i] = elu(next[i]);
    }
  });
}

void batch_backward(const ParamSet& p, std::span<const SparseInput> xs, BatchBuffers& buf,
                    const double* dout, std::span<double> grad) {
  const MlpSpec& spec = p.spec;
  const int L = spec.layer_count();
  const std::size_t B = xs.size();
  const std::size_t P = p.size();
  assert(grad.size() == P);
  buf.ensure_grad();
  const int out_dim = spec.out_dim();
  const int maxw = spec.max_width();
  parallel_for(kGradShards, [&](std::int64_t s) {
    auto [lo, hi] = shard_range(B, static_cast<int>(s));
    double* g = buf.shard_grad[s].data();
    std::fill(g, g + P, 0.0);
    double* dz = buf.shard_tmp[s].data();
    double* dprev = dz + maxw;
    for (std::size_t b = lo; b < hi; ++b) {
      std::copy(dout + b * out_dim, dout + (b + 1) * out_dim, dz);
      for (int l = L - 1; l >= 1; --l) {
        const int in = spec.dims[l], out_d = spec.dims[l + 1];
        const double* W = p.w(l);
        const double* a_prev = buf.act_row(l - 1, static_cast<int>(b));
        double* gW = g + p.w_off[l];
        double* gB = g + p.b_off[l];
        for (int i = 0; i < out_d; ++i) gB[i] += dz[i];
        for (int j = 0; j < in; ++j) {
          const double aj = a_prev[j];
          const double* col = W + static_cast<std::size_t>(j) * out_d;
          double* gcol = gW + static_cast<std::size_t>(j) * out_d;
          double acc = 0.0;
          for (int i = 0; i < out_d; ++i) {
            gcol[i] = std::fma(dz[i], aj, gcol[i]);
            acc = std::fma(col[i], dz[i], acc);
          }
          dprev[j] = acc * elu_prime_from_act(aj);
        }
        std::swap(dz, dprev);
      }
      const int out0 = spec.dims[1];
      double* gW = g + p.w_off[0];
      double* gB = g + p.b_off[0];
      for (int i = 0; i < out0; ++i) gB[i] += dz[i];
      for (std::int32_t j : xs[b].idx) {
        double* gcol = gW + static_cast<std::size_t>(j) * out0;
        for (int i = 0; i < out0; ++i) gcol[i] += dz[i];
      }
    }
  });
  parallel_for(static_cast<std::int64_t>(P), [&](std::int64_t i) {
    double acc = 0.0;
    for (int s = 0; s < kGradShards; ++s) acc += buf.shard_grad[s][i];
    grad[i] = acc;
  });
}

}  // namespace agac::nn
