#include "agac/updater.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "common/binio.hpp"

namespace agac::train {

namespace {

nn::MlpSpec make_spec(const AgacConfig& cfg, int in_dim, int out_dim) {
  std::vector<int> dims;
  dims.push_back(in_dim);
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(out_dim);
  return nn::MlpSpec{std::move(dims)};
}

void scale_grad(std::span<double> grad, double k) {
  for (double& g : grad) g *= k;
}

}  // namespace

Agent::Agent(const AgacConfig& cfg, int in_dim, int n_actions, std::uint64_t seed)
    : actor(make_spec(cfg, in_dim, n_actions)),
      critic(make_spec(cfg, in_dim, 1)),
      adversary(make_spec(cfg, in_dim, n_actions)),
      actor_opt(actor.size()),
      critic_opt(critic.size()),
      adversary_opt(adversary.size()) {
  Rng ra(mix_seed(seed, 4)), rc(mix_seed(seed, 5)), rd(mix_seed(seed, 6));
  actor.init_glorot(ra);
  critic.init_glorot(rc);
  adversary.init_glorot(rd);
}

void Agent::save(std::ostream& os) const {
  binio::write_magic(os, "AGCK");
  binio::write_le<std::uint32_t>(os, 1);
  actor.save(os);
  critic.save(os);
  adversary.save(os);
}

Agent Agent::load(std::istream& is) {
  binio::expect_magic(is, "AGCK");
  const auto version = binio::read_le<std::uint32_t>(is);
  if (version != 1) throw std::runtime_error("checkpoint: unsupported version");
  Agent a;
  a.actor = nn::ParamSet::load(is);
  a.critic = nn::ParamSet::load(is);
  a.adversary = nn::ParamSet::load(is);
  a.actor_opt = nn::AdamState(a.actor.size());
  a.critic_opt = nn::AdamState(a.critic.size());
  a.adversary_opt = nn::AdamState(a.adversary.size());
  return a;
}

Updater::Updater(const AgacConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), shuffle_rng_(mix_seed(seed, 3)) {
  cfg_.validate();
}

void Updater::gather(const rollout::Trajectory& traj, const std::vector<double>& adv,
                     const std::vector<double>& tgt, int lo, int hi) {
  mb_inputs_.clear();
  mb_actions_.clear();
  mb_adv_.clear();
  mb_logp_.clear();
  mb_tgt_.clear();
  mb_probs_.clear();
  for (int k = lo; k < hi; ++k) {
    const int i = perm_[k];
    mb_inputs_.push_back(traj.input(i));
    mb_actions_.push_back(traj.actions[i]);
    mb_adv_.push_back(adv[i]);
    mb_logp_.push_back(traj.logp[i]);
    mb_tgt_.push_back(tgt[i]);
    const auto row = traj.probs_row(i);
    mb_probs_.insert(mb_probs_.end(), row.begin(), row.end());
  }
}

UpdateMetrics Updater::update(Agent& agent, const rollout::Trajectory& traj) {
  const int n = traj.total();
  if (n < cfg_.minibatches) throw std::invalid_argument("update: trajectory smaller than minibatch count");
  const double c = anneal_c(cfg_, frames_);

  std::vector<double> gae(n);
  rollout::compute_gae(traj, cfg_.gamma, cfg_.lambda, gae);
  auto adv = rollout::compute_agac_advantage(traj, gae, c);
  auto tgt = rollout::compute_value_target(traj, gae, c);
  standardize(adv);

  UpdateMetrics m;
  m.c = c;
  double kl_sum = 0.0, bonus_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    kl_sum += traj.kl[i];
    bonus_sum += traj.scale[i] * traj.kl[i];
  }
  m.mean_kl = kl_sum / n;
  m.mean_bonus = c * bonus_sum / n;

  grad_actor_.resize(agent.actor.size());
  grad_critic_.resize(agent.critic.size());
  const bool ppo = cfg_.ppo_mode();
  if (!ppo) grad_adv_.resize(agent.adversary.size());

  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), 0);
  int applied = 0;
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    shuffle_rng_.shuffle(std::span<int>(perm_));
    for (int mb = 0; mb < cfg_.minibatches; ++mb) {
      const int lo = static_cast<int>(static_cast<std::int64_t>(n) * mb / cfg_.minibatches);
      const int hi = static_cast<int>(static_cast<std::int64_t>(n) * (mb + 1) / cfg_.minibatches);
      gather(traj, adv, tgt, lo, hi);
      const Minibatch view{mb_inputs_, mb_actions_, mb_adv_, mb_logp_,
                           mb_tgt_,    mb_probs_.data(), traj.action_dim};

      const auto pol = ppo_policy_loss(agent.actor, view, cfg_.clip_eps, cfg_.entropy_coef,
                                       actor_buf_, dout_, grad_actor_);
      const double vl = value_loss(agent.critic, mb_inputs_, mb_tgt_, critic_buf_, dout_,
                                   grad_critic_);
      double al = 0.0;
      if (!ppo) {
        al = adversary_loss(agent.adversary, mb_inputs_, mb_probs_.data(), traj.action_dim,
                            adv_buf_, dout_, grad_adv_);
      }

      if (!std::isfinite(pol.loss) || !std::isfinite(vl) || !std::isfinite(al)) {
        ++m.skipped;
        std::fprintf(stderr,
                     "update: non-finite losses (policy=%g value=%g adversary=%g), "
                     "skipping minibatch %d of epoch %d\n",
                     pol.loss, vl, al, mb, epoch);
        if (++consecutive_skips_ >= 3) {
          throw std::runtime_error("update aborted: three consecutive non-finite minibatches");
        }
        continue;
      }
      consecutive_skips_ = 0;

      nn::clip_grad_norm(grad_actor_, cfg_.grad_clip);
      nn::adam_step(agent.actor_opt, agent.actor.data, grad_actor_, {.lr = cfg_.lr});

      scale_grad(grad_critic_, cfg_.value_coef);
      nn::clip_grad_norm(grad_critic_, cfg_.grad_clip);
      nn::adam_step(agent.critic_opt, agent.critic.data, grad_critic_, {.lr = cfg_.lr});

      if (!ppo) {
        scale_grad(grad_adv_, cfg_.adv_coef);
        nn::clip_grad_norm(grad_adv_, cfg_.grad_clip);
        nn::adam_step(agent.adversary_opt, agent.adversary.data, grad_adv_,
                      {.lr = cfg_.adversary_lr()});
      }

      m.policy_loss += pol.loss;
      m.value_loss += vl;
      m.adversary_loss += al;
      m.entropy += pol.entropy;
      m.clip_frac += pol.clip_frac;
      ++applied;
    }
  }
  if (applied > 0) {
    m.policy_loss /= applied;
    m.value_loss /= applied;
    m.adversary_loss /= applied;
    m.entropy /= applied;
    m.clip_frac /= applied;
  }
  frames_ += n;
  m.frames = frames_;
  return m;
}

}  // namespace agac::train
