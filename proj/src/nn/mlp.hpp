#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "common/rng.hpp"

namespace agac::nn {

inline double elu(double z) { return z > 0 ? z : std::expm1(z); }
// ELU is monotone, so the activation value determines the branch.
inline double elu_prime_from_act(double a) { return a > 0 ? 1.0 : a + 1.0; }

// Fully connected net: dims = {in, hidden..., out}, ELU on hidden layers,
// linear output layer.
struct MlpSpec {
  std::vector<int> dims;

  int layer_count() const { return static_cast<int>(dims.size()) - 1; }
  int in_dim() const { return dims.front(); }
  int out_dim() const { return dims.back(); }
  int max_width() const;
  std::size_t param_count() const;
  bool operator==(const MlpSpec&) const = default;
};

// Flat parameter vector. Layer l stores its weight block first, then its
// bias block. Weights are column-major: element (row i, column j) of the
// out x in matrix lives at w_off[l] + j * out + i, so one input feature's
// fan-out is contiguous.
struct ParamSet {
  MlpSpec spec;
  std::vector<double> data;
  std::vector<std::size_t> w_off, b_off;

  ParamSet() = default;
  explicit ParamSet(MlpSpec s);

  std::size_t size() const { return data.size(); }
  double* w(int l) { return data.data() + w_off[l]; }
  const double* w(int l) const { return data.data() + w_off[l]; }
  double* b(int l) { return data.data() + b_off[l]; }
  const double* b(int l) const { return data.data() + b_off[l]; }

  // Glorot-uniform weights drawn column-major per layer, zero biases.
  void init_glorot(Rng& rng);

  void save(std::ostream& os) const;
  static ParamSet load(std::istream& is);
  void save_text(std::ostream& os) const;
  static ParamSet load_text(std::istream& is);
};

// Active feature indices, ascending, each with implicit value 1.0.
struct SparseInput {
  std::span<const std::int32_t> idx;
};

}  // namespace agac::nn
