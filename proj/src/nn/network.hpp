#pragma once

#include <span>
#include <vector>

#include "nn/mlp.hpp"

namespace agac::nn {

// Single-sample forward record. act[l] holds the post-ELU activation of
// hidden layer l; out holds the linear output layer.
struct Tape {
  std::vector<std::vector<double>> act;
  std::vector<double> out;
};

void forward_dense(const ParamSet& p, std::span<const double> x, Tape& tape);
void forward_sparse(const ParamSet& p, const SparseInput& x, Tape& tape);

// Accumulates (+=) parameter gradients for one sample into grad.
void backward_sparse(const ParamSet& p, const SparseInput& x, const Tape& tape,
                     std::span<const double> dout, std::span<double> grad);

}  // namespace agac::nn
