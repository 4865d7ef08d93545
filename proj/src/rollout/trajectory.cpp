#include "rollout/trajectory.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "common/binio.hpp"
#include "rollout/gae.hpp"

namespace agac::rollout {

void Trajectory::clear() {
  obs_idx.clear();
  obs_off.assign(1, 0);
  actions.clear();
  rewards.clear();
  dones.clear();
  logp.clear();
  logp_adv.clear();
  values.clear();
  kl.clear();
  scale.clear();
  old_probs.clear();
  bootstrap.clear();
}

void Trajectory::reserve(int n_envs_, int steps_, int action_dim_) {
  n_envs = n_envs_;
  steps = steps_;
  action_dim = action_dim_;
  const int T = total();
  clear();
  obs_off.reserve(T + 1);
  actions.reserve(T);
  rewards.reserve(T);
  dones.reserve(T);
  logp.reserve(T);
  logp_adv.reserve(T);
  values.reserve(T);
  kl.reserve(T);
  scale.reserve(T);
  old_probs.reserve(static_cast<std::size_t>(T) * action_dim);
  bootstrap.reserve(n_envs);
}

namespace {

template <typename T>
void write_column(std::ostream& os, const std::vector<T>& v) {
  binio::write_le<std::uint64_t>(os, v.size());
  for (const T& x : v) binio::write_le<T>(os, x);
}

template <typename T>
std::vector<T> read_column(std::istream& is) {
  const auto n = binio::read_le<std::uint64_t>(is);
  std::vector<T> v(n);
  for (auto& x : v) x = binio::read_le<T>(is);
  return v;
}

}  // namespace

void Trajectory::dump(std::ostream& os) const {
  binio::write_magic(os, "AGTJ");
  binio::write_le<std::uint32_t>(os, 1);
  binio::write_le<std::int32_t>(os, n_envs);
  binio::write_le<std::int32_t>(os, steps);
  binio::write_le<std::int32_t>(os, action_dim);
  write_column(os, obs_idx);
  write_column(os, obs_off);
  write_column(os, actions);
  write_column(os, rewards);
  write_column(os, dones);
  write_column(os, logp);
  write_column(os, logp_adv);
  write_column(os, values);
  write_column(os, kl);
  write_column(os, scale);
  write_column(os, old_probs);
  write_column(os, bootstrap);
}

Trajectory Trajectory::load(std::istream& is) {
  binio::expect_magic(is, "AGTJ");
  if (binio::read_le<std::uint32_t>(is) != 1)
    throw std::runtime_error("unsupported Trajectory version");
  Trajectory t;
  t.n_envs = binio::read_le<std::int32_t>(is);
  t.steps = binio::read_le<std::int32_t>(is);
  t.action_dim = binio::read_le<std::int32_t>(is);
  t.obs_idx = read_column<std::int32_t>(is);
  t.obs_off = read_column<std::uint32_t>(is);
  t.actions = read_column<int>(is);
  t.rewards = read_column<double>(is);
  t.dones = read_column<std::uint8_t>(is);
  t.logp = read_column<double>(is);
  t.logp_adv = read_column<double>(is);
  t.values = read_column<double>(is);
  t.kl = read_column<double>(is);
  t.scale = read_column<double>(is);
  t.old_probs = read_column<double>(is);
  t.bootstrap = read_column<double>(is);
  return t;
}

void compute_gae(const Trajectory& traj, double gamma, double lambda, std::span<double> adv_out) {
  const int T = traj.steps, E = traj.n_envs;
  std::vector<double> r(T), v(T), a(T);
  std::vector<std::uint8_t> d(T);
  for (int e = 0; e < E; ++e) {
    for (int t = 0; t < T; ++t) {
      const int i = t * E + e;
      r[t] = traj.rewards[i];
      v[t] = traj.values[i];
      d[t] = traj.dones[i];
    }
    compute_gae_segment(r, v, d, traj.bootstrap[e], gamma, lambda, a);
    for (int t = 0; t < T; ++t) adv_out[static_cast<std::size_t>(t) * E + e] = a[t];
  }
}

std::vector<double> compute_agac_advantage(const Trajectory& traj, std::span<const double> adv,
                                           double c) {
  std::vector<double> out(adv.size());
  if (c == 0.0) {  // exact copy, not adv + 0.0 (keeps -0.0 intact)
    std::copy(adv.begin(), adv.end(), out.begin());
    return out;
  }
  for (std::size_t i = 0; i < adv.size(); ++i)
    out[i] = adv[i] + c * traj.scale[i] * (traj.logp[i] - traj.logp_adv[i]);
  return out;
}

std::vector<double> compute_value_target(const Trajectory& traj, std::span<const double> adv,
                                         double c) {
  std::vector<double> out(adv.size());
  if (c == 0.0) {
    for (std::size_t i = 0; i < adv.size(); ++i) out[i] = adv[i] + traj.values[i];
    return out;
  }
  for (std::size_t i = 0; i < adv.size(); ++i)
    out[i] = adv[i] + traj.values[i] + c * traj.scale[i] * traj.kl[i];
  return out;
}

}  // namespace agac::rollout
