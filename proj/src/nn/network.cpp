#include "nn/network.hpp"

#include <cassert>

namespace agac::nn {

namespace {

void forward_from_first_hidden(const ParamSet& p, Tape& tape) {
  const MlpSpec& spec = p.spec;
  const int L = spec.layer_count();
  for (int l = 1; l < L; ++l) {
    const int in = spec.dims[l], out = spec.dims[l + 1];
    const double* W = p.w(l);
    const double* B = p.b(l);
    const std::vector<double>& prev = tape.act[l - 1];
    std::vector<double>& next = (l + 1 < L) ? tape.act[l] : tape.out;
    next.resize(out);
    for (int i = 0; i < out; ++i) {
      double acc = B[i];
      for (int j = 0; j < in; ++j)
        acc = std::fma(W[static_cast<std::size_t>(j) * out + i], prev[j], acc);
      next[i] = (l + 1 < L) ? elu(acc) : acc;
    }
  }
}

}  // namespace

void forward_dense(const ParamSet& p, std::span<const double> x, Tape& tape) {
  const MlpSpec& spec = p.spec;
  const int L = spec.layer_count();
  assert(static_cast<int>(x.size()) == spec.in_dim());
  tape.act.resize(L - 1);
  const int out0 = spec.dims[1];
  const double* W = p.w(0);
  const double* B = p.b(0);
  std::vector<double>& h0 = (L > 1) ? tape.act[0] : tape.out;
  h0.resize(out0);
  for (int i = 0; i < out0; ++i) {
    double acc = B[i];
    for (int j = 0; j < spec.dims[0]; ++j)
      acc = std::fma(W[static_cast<std::size_t>(j) * out0 + i], x[j], acc);
    h0[i] = (L > 1) ? elu(acc) : acc;
  }
  forward_from_first_hidden(p, tape);
}

void forward_sparse(const ParamSet& p, const SparseInput& x, Tape& tape) {
  const MlpSpec& spec = p.spec;
  const int L = spec.layer_count();
  tape.act.resize(L - 1);
  const int out0 = spec.dims[1];
  const double* W = p.w(0);
  const double* B = p.b(0);
  std::vector<double>& h0 = (L > 1) ? tape.act[0] : tape.out;
  h0.resize(out0);
  for (int i = 0; i < out0; ++i) {
    double acc = B[i];
    for (std::int32_t j : x.idx) acc += W[static_cast<std::size_t>(j) * out0 + i];
    h0[i] = (L > 1) ? elu(acc) : acc;
  }
  forward_from_first_hidden(p, tape);
}

void backward_sparse(const ParamSet& p, const SparseInput& x, const Tape& tape,
                     std::span<const double> dout, std::span<double> grad) {
  const MlpSpec& spec = p.spec;
  const int L = spec.layer_count();
  assert(grad.size() == p.size());
  std::vector<double> dz(dout.begin(), dout.end());
  for (int l = L - 1; l >= 1; --l) {
    const int in = spec.dims[l], out = spec.dims[l + 1];
    const double* W = p.w(l);
    const std::vector<double>& a_prev = tape.act[l - 1];
    double* gW = grad.data() + p.w_off[l];
    double* gB = grad.data() + p.b_off[l];
    for (int i = 0; i < out; ++i) gB[i] += dz[i];
    std::vector<double> dprev(in);
    for (int j = 0; j < in; ++j) {
      double acc = 0.0;
      for (int i = 0; i < out; ++i) {
        const std::size_t k = static_cast<std::size_t>(j) * out + i;
        gW[k] = std::fma(dz[i], a_prev[j], gW[k]);
        acc = std::fma(W[k], dz[i], acc);
      }
      dprev[j] = acc * elu_prime_from_act(a_prev[j]);
    }
    dz = std::move(dprev);
  }
  const int out0 = spec.dims[1];
  double* gW = grad.data() + p.w_off[0];
  double* gB = grad.data() + p.b_off[0];
  for (int i = 0; i < out0; ++i) gB[i] += dz[i];
  for (std::int32_t j : x.idx)
    for (int i = 0; i < out0; ++i) gW[static_cast<std::size_t>(j) * out0 + i] += dz[i];
}

}  // namespace agac::nn
