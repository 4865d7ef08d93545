#pragma once

#include <span>

#include "nn/kernels.hpp"
#include "nn/network.hpp"

namespace agac::nn::ref {

// Serial batch implementations built on the single-sample code paths. Kept
// alongside the parallel kernels for equality tests and benchmarking; both
// fill the same BatchBuffers layout and must agree bitwise.
void batch_forward(const ParamSet& p, std::span<const SparseInput> xs, BatchBuffers& buf);
void batch_backward(const ParamSet& p, std::span<const SparseInput> xs, const BatchBuffers& buf,
                    const double* dout, std::span<double> grad);

}  // namespace agac::nn::ref
