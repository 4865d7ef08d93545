#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "common/rng.hpp"

namespace agac::tabular {

// Probabilities are floored here before any log or ratio; the closed-form
// update divides by adversary probabilities.
inline constexpr double kPolicyFloor = 1e-12;

struct TabularMdp {
  int n_states = 0;
  int n_actions = 0;
  double gamma = 0.9;
  std::vector<double> P;  // [s][a][s'], each (s, a) row sums to 1
  std::vector<double> R;  // [s][a]

  double p(int s, int a, int s2) const {
    return P[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s2];
  }
  double r(int s, int a) const { return R[static_cast<std::size_t>(s) * n_actions + a]; }

  void validate() const;  // throws std::invalid_argument

  static TabularMdp random(int n_states, int n_actions, double gamma, std::uint64_t seed);
  // Deterministic 1-D chain, 2 actions (left/right), all rewards zero.
  static TabularMdp corridor(int n_states, double gamma);

  void save_text(std::ostream& os) const;
  static TabularMdp load_text(std::istream& is);
};

struct TabularPolicy {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> p;  // [s][a]

  double at(int s, int a) const { return p[static_cast<std::size_t>(s) * n_actions + a]; }
  double& at(int s, int a) { return p[static_cast<std::size_t>(s) * n_actions + a]; }
  const double* row(int s) const { return p.data() + static_cast<std::size_t>(s) * n_actions; }
  double* row(int s) { return p.data() + static_cast<std::size_t>(s) * n_actions; }

  // Rows sum to 1 within 1e-12 and entries stay at or above the floor
  // (up to the renormalization that follows flooring).
  void validate() const;
  void floor_rows();

  static TabularPolicy uniform(int n_states, int n_actions);
  static TabularPolicy random(int n_states, int n_actions, std::uint64_t seed);
};

}  // namespace agac::tabular
