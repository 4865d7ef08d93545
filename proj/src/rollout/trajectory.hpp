#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nn/mlp.hpp"

namespace agac::rollout {

// Time-major storage: sample index i = t * n_envs + env. Observations are
// stored as stacked-frame active feature indices. All cached policy
// quantities are snapshots taken at collection time.
struct Trajectory {
  int n_envs = 0;
  int steps = 0;
  int action_dim = 0;

  std::vector<std::int32_t> obs_idx;
  std::vector<std::uint32_t> obs_off;  // size total()+1
  std::vector<int> actions;
  std::vector<double> rewards;
  std::vector<std::uint8_t> dones;
  std::vector<double> logp;      // log pi(a_t | s_t, theta_old)
  std::vector<double> logp_adv;  // log pi_adv(a_t | s_t, psi_old)
  std::vector<double> values;    // V_phi_old(s_t)
  std::vector<double> kl;        // D_KL(pi(.|s_t) || pi_adv(.|s_t)) at snapshot
  std::vector<double> scale;     // episodic count scale, in (0, 1]
  std::vector<double> old_probs;  // total() x action_dim actor snapshot
  std::vector<double> bootstrap;  // per env, V(s_T)

  int total() const { return n_envs * steps; }
  nn::SparseInput input(int i) const {
    return {std::span<const std::int32_t>(obs_idx.data() + obs_off[i],
                                          obs_off[i + 1] - obs_off[i])};
  }
  std::span<const double> probs_row(int i) const {
    return {old_probs.data() + static_cast<std::size_t>(i) * action_dim,
            static_cast<std::size_t>(action_dim)};
  }

  void clear();
  void reserve(int n_envs_, int steps_, int action_dim_);

  // Columnar binary dump for offline inspection.
  void dump(std::ostream& os) const;
  static Trajectory load(std::istream& is);
};

// GAE over every env segment; adv_out sized total().
void compute_gae(const Trajectory& traj, double gamma, double lambda, std::span<double> adv_out);

// A_t + c * scale_t * (log pi - log pi_adv), elementwise.
std::vector<double> compute_agac_advantage(const Trajectory& traj, std::span<const double> adv,
                                           double c);

// (A_t + V_t) + c * scale_t * KL_t, elementwise.
std::vector<double> compute_value_target(const Trajectory& traj, std::span<const double> adv,
                                         double c);

}  // namespace agac::rollout
