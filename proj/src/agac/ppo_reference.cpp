#include "agac/ppo_reference.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "rollout/gae.hpp"

namespace agac::train {

PpoUpdater::PpoUpdater(const AgacConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), shuffle_rng_(mix_seed(seed, 3)) {
  cfg_.validate();
}

UpdateMetrics PpoUpdater::update(Agent& agent, const rollout::Trajectory& traj) {
  const int n = traj.total();
  if (n < cfg_.minibatches) throw std::invalid_argument("update: trajectory smaller than minibatch count");

  std::vector<double> adv(n);
  rollout::compute_gae(traj, cfg_.gamma, cfg_.lambda, adv);
  std::vector<double> tgt(n);
  for (int i = 0; i < n; ++i) tgt[i] = adv[i] + traj.values[i];
  standardize(adv);

  UpdateMetrics m;
  grad_actor_.resize(agent.actor.size());
  grad_critic_.resize(agent.critic.size());
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0);
  int applied = 0;
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    shuffle_rng_.shuffle(std::span<int>(perm_));
    for (int mb = 0; mb < cfg_.minibatches; ++mb) {
      const int lo = static_cast<int>(static_cast<std::int64_t>(n) * mb / cfg_.minibatches);
      const int hi = static_cast<int>(static_cast<std::int64_t>(n) * (mb + 1) / cfg_.minibatches);
      mb_inputs_.clear();
      mb_actions_.clear();
      mb_adv_.clear();
      mb_logp_.clear();
      mb_tgt_.clear();
      for (int k = lo; k < hi; ++k) {
        const int i = perm_[k];
        mb_inputs_.push_back(traj.input(i));
        mb_actions_.push_back(traj.actions[i]);
        mb_adv_.push_back(adv[i]);
        mb_logp_.push_back(traj.logp[i]);
        mb_tgt_.push_back(tgt[i]);
      }
      const Minibatch view{mb_inputs_, mb_actions_, mb_adv_, mb_logp_,
                           mb_tgt_,    nullptr,     traj.action_dim};

      const auto pol = ppo_policy_loss(agent.actor, view, cfg_.clip_eps, cfg_.entropy_coef,
                                       actor_buf_, dout_, grad_actor_);
      const double vl = value_loss(agent.critic, mb_inputs_, mb_tgt_, critic_buf_, dout_,
                                   grad_critic_);
      if (!std::isfinite(pol.loss) || !std::isfinite(vl)) {
        ++m.skipped;
        std::fprintf(stderr, "ppo update: non-finite losses, skipping minibatch %d of epoch %d\n",
                     mb, epoch);
        if (++consecutive_skips_ >= 3) {
          throw std::runtime_error("update aborted: three consecutive non-finite minibatches");
        }
        continue;
      }
      consecutive_skips_ = 0;

      nn::clip_grad_norm(grad_actor_, cfg_.grad_clip);
      nn::adam_step(agent.actor_opt, agent.actor.data, grad_actor_, {.lr = cfg_.lr});
      for (double& g : grad_critic_) g *= cfg_.value_coef;
      nn::clip_grad_norm(grad_critic_, cfg_.grad_clip);
      nn::adam_step(agent.critic_opt, agent.critic.data, grad_critic_, {.lr = cfg_.lr});

      m.policy_loss += pol.loss;
      m.value_loss += vl;
      m.entropy += pol.entropy;
      m.clip_frac += pol.clip_frac;
      ++applied;
    }
  }
  if (applied > 0) {
    m.policy_loss /= applied;
    m.value_loss /= applied;
    m.entropy /= applied;
    m.clip_frac /= applied;
  }
  frames_ += n;
  m.frames = frames_;
  return m;
}

}  // namespace agac::train
