#include "rollout/collector.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nn/dist.hpp"

namespace agac::rollout {

namespace {

void check_finite(std::span<const double> xs, const char* what, int env_idx, int t) {
  for (double x : xs)
    if (!std::isfinite(x)) {
      std::ostringstream os;
      os << "non-finite " << what << " for env " << env_idx << " at rollout step " << t;
      throw std::runtime_error(os.str());
    }
}

}  // namespace

Collector::Collector(const CollectorConfig& cfg) : cfg_(cfg), slots_(cfg.n_envs) {
  cfg_.scenario.validate();
  for (int e = 0; e < cfg_.n_envs; ++e) {
    slots_[e].action_rng = Rng(mix_seed(mix_seed(cfg_.seed, 1), static_cast<std::uint64_t>(e)));
    reset_slot(e);
  }
}

void Collector::note_position(Slot& slot) {
  const auto& st = slot.state;
  const int room = st.room_of(st.agent_r, st.agent_c);
  if (room >= 0 && room < 32) slot.rooms_mask |= 1u << room;
  if (cfg_.record_detail) {
    auto& cell = slot.visits[static_cast<std::size_t>(st.agent_r) * st.width + st.agent_c];
    if (cell < 65535) ++cell;
  }
}

void Collector::reset_slot(int e) {
  Slot& slot = slots_[e];
  const std::uint64_t ep_seed = mix_seed(
      mix_seed(cfg_.seed, 2), (static_cast<std::uint64_t>(e) << 32) | slot.episode_counter);
  slot.episode_counter += 1;
  slot.state = env::generate(cfg_.scenario, ep_seed);
  slot.counter.reset();
  slot.ep_return = 0.0;
  slot.ep_len = 0;
  slot.rooms_mask = 0;
  if (cfg_.record_detail) {
    slot.visits.assign(static_cast<std::size_t>(slot.state.width) * slot.state.height, 0);
    slot.obs_hashes.clear();
  }
  slot.stack.reset(env::observe(slot.state));
}

Trajectory Collector::collect(const nn::ParamSet& actor, const nn::ParamSet& critic,
                              const nn::ParamSet* adversary) {
  const int E = cfg_.n_envs, S = cfg_.steps;
  const int A = env::kNumActions;
  Trajectory traj;
  traj.reserve(E, S, A);
  traj.obs_idx.reserve(static_cast<std::size_t>(E) * S * 96);
  std::vector<nn::SparseInput> xs(E);

  for (int t = 0; t < S; ++t) {
    for (int e = 0; e < E; ++e) {
      slots_[e].stack.active_indices(traj.obs_idx);
      traj.obs_off.push_back(static_cast<std::uint32_t>(traj.obs_idx.size()));
    }
    for (int e = 0; e < E; ++e) xs[e] = traj.input(t * E + e);

    nn::batch_forward(actor, xs, actor_buf_);
    nn::batch_forward(critic, xs, critic_buf_);
    if (adversary) nn::batch_forward(*adversary, xs, adv_buf_);

    for (int e = 0; e < E; ++e) {
      Slot& slot = slots_[e];
      check_finite({actor_buf_.out_row(e), static_cast<std::size_t>(A)}, "actor logits", e, t);
      check_finite({critic_buf_.out_row(e), 1}, "critic value", e, t);
      const auto dist = nn::Categorical::from_logits({actor_buf_.out_row(e),
                                                      static_cast<std::size_t>(A)});
      double lp_adv = 0.0, kl = 0.0;
      nn::Categorical dist_adv;
      if (adversary) {
        check_finite({adv_buf_.out_row(e), static_cast<std::size_t>(A)}, "adversary logits", e, t);
        dist_adv = nn::Categorical::from_logits({adv_buf_.out_row(e), static_cast<std::size_t>(A)});
      }

      const int action = dist.sample(slot.action_rng);
      // the counter always runs so coverage reports stay comparable across
      // configurations; count_bonus only gates the scale fed to the bonus
      const double counted = slot.counter.scale(slot.stack.newest().hash());
      const double scale = cfg_.count_bonus ? counted : 1.0;
      if (cfg_.record_detail) slot.obs_hashes.push_back(slot.stack.newest().hash());
      if (adversary) {
        lp_adv = dist_adv.log_prob(action);
        kl = nn::Categorical::kl(dist, dist_adv);
      }

      const auto res = env::step(slot.state, action);
      slot.ep_return += res.reward;
      slot.ep_len += 1;
      note_position(slot);

      traj.actions.push_back(action);
      traj.rewards.push_back(res.reward);
      traj.dones.push_back(res.done ? 1 : 0);
      traj.logp.push_back(dist.log_prob(action));
      traj.logp_adv.push_back(lp_adv);
      traj.values.push_back(critic_buf_.out_row(e)[0]);
      traj.kl.push_back(kl);
      traj.scale.push_back(scale);
      for (int k = 0; k < A; ++k) traj.old_probs.push_back(dist.prob(k));

      if (res.done) {
        EpisodeRecord rec;
        rec.env_seed = slot.state.seed;
        rec.env_index = e;
        rec.ret = slot.ep_return;
        rec.length = slot.ep_len;
        rec.reached_goal =
            slot.state.agent_r == slot.state.goal_r && slot.state.agent_c == slot.state.goal_c;
        rec.distinct_obs = static_cast<int>(slot.counter.distinct());
        rec.rooms_visited = std::popcount(slot.rooms_mask);
        if (cfg_.record_detail) {
          rec.height = slot.state.height;
          rec.width = slot.state.width;
          rec.visits = std::move(slot.visits);
          rec.obs_hashes = std::move(slot.obs_hashes);
        }
        episodes_.push_back(std::move(rec));
        reset_slot(e);
      } else {
        slot.stack.push(env::observe(slot.state));
      }
    }
  }

  idx_arena_.clear();
  idx_off_.assign(1, 0);
  for (int e = 0; e < E; ++e) {
    slots_[e].stack.active_indices(idx_arena_);
    idx_off_.push_back(static_cast<std::uint32_t>(idx_arena_.size()));
  }
  for (int e = 0; e < E; ++e)
    xs[e] = {std::span<const std::int32_t>(idx_arena_.data() + idx_off_[e],
                                           idx_off_[e + 1] - idx_off_[e])};
  nn::batch_forward(critic, xs, critic_buf_);
  for (int e = 0; e < E; ++e) {
    check_finite({critic_buf_.out_row(e), 1}, "bootstrap value", e, S);
    traj.bootstrap.push_back(critic_buf_.out_row(e)[0]);
  }

  frames_ += static_cast<std::int64_t>(E) * S;
  return traj;
}

}  // namespace agac::rollout
