#include "agac/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "common/parallel.hpp"
#include "nn/dist.hpp"

namespace agac::train {

using nn::Categorical;

PolicyLossStats ppo_policy_loss(const nn::ParamSet& actor, const Minibatch& mb, double clip_eps,
                                double entropy_coef, nn::BatchBuffers& buf,
                                std::vector<double>& dout, std::span<double> grad) {
  const int B = mb.size();
  const int A = mb.action_dim;
  nn::batch_forward(actor, mb.inputs, buf);
  dout.assign(static_cast<std::size_t>(B) * A, 0.0);

  std::vector<double> loss_i(B), ent_i(B), clip_i(B);
  const double inv_b = 1.0 / B;
  parallel_for(B, [&](std::int64_t b) {
    const double* z = buf.out_row(static_cast<int>(b));
    const auto dist = Categorical::from_logits({z, static_cast<std::size_t>(A)});
    const int a = mb.actions[b];
    const double adv = mb.adv[b];
    const double ratio = std::exp(dist.log_prob(a) - mb.old_logp[b]);
    if (!std::isfinite(ratio)) {
      // a blown-up ratio must surface as a non-finite loss even when the
      // clipped branch would mask it
      loss_i[b] = std::numeric_limits<double>::quiet_NaN();
      ent_i[b] = 0.0;
      clip_i[b] = 1.0;
      return;
    }
    const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
    // d(-min(r*A, clip(r)*A))/dlogp: the clipped branch is flat in theta.
    double dlp = 0.0;
    if (ratio * adv <= clipped * adv) {
      loss_i[b] = -ratio * adv;
      dlp = -ratio * adv;
    } else {
      loss_i[b] = -clipped * adv;
    }
    clip_i[b] = std::abs(ratio - 1.0) > clip_eps ? 1.0 : 0.0;
    const double h = dist.entropy();
    ent_i[b] = h;
    loss_i[b] -= entropy_coef * h;
    double* row = dout.data() + b * A;
    for (int k = 0; k < A; ++k) {
      const double p = dist.prob(k);
      const double dz = dlp * ((k == a ? 1.0 : 0.0) - p) + entropy_coef * p * (dist.logp[k] + h);
      row[k] = nn::clamp_mask(z[k]) * dz * inv_b;
    }
  });

  nn::batch_backward(actor, mb.inputs, buf, dout.data(), grad);
  PolicyLossStats stats;
  stats.loss = nn::sharded_sum(loss_i) * inv_b;
  stats.entropy = nn::sharded_sum(ent_i) * inv_b;
  stats.clip_frac = nn::sharded_sum(clip_i) * inv_b;
  return stats;
}

double value_loss(const nn::ParamSet& critic, std::span<const nn::SparseInput> inputs,
                  std::span<const double> targets, nn::BatchBuffers& buf,
                  std::vector<double>& dout, std::span<double> grad) {
  const int B = static_cast<int>(inputs.size());
  nn::batch_forward(critic, inputs, buf);
  dout.assign(B, 0.0);
  std::vector<double> loss_i(B);
  const double inv_b = 1.0 / B;
  parallel_for(B, [&](std::int64_t b) {
    const double err = buf.out_row(static_cast<int>(b))[0] - targets[b];
    loss_i[b] = err * err;
    dout[b] = 2.0 * err * inv_b;
  });
  nn::batch_backward(critic, inputs, buf, dout.data(), grad);
  return nn::sharded_sum(loss_i) * inv_b;
}

double adversary_loss(const nn::ParamSet& adversary, std::span<const nn::SparseInput> inputs,
                      const double* old_probs, int action_dim, nn::BatchBuffers& buf,
                      std::vector<double>& dout, std::span<double> grad) {
  const int B = static_cast<int>(inputs.size());
  const int A = action_dim;
  nn::batch_forward(adversary, inputs, buf);
  dout.assign(static_cast<std::size_t>(B) * A, 0.0);
  std::vector<double> kl_i(B);
  const double inv_b = 1.0 / B;
  parallel_for(B, [&](std::int64_t b) {
    const double* z = buf.out_row(static_cast<int>(b));
    const auto q = Categorical::from_logits({z, static_cast<std::size_t>(A)});
    const double* p = old_probs + b * A;
    double kl = 0.0;
    double* row = dout.data() + b * A;
    for (int k = 0; k < A; ++k) {
      if (p[k] > 0.0) kl += p[k] * (std::log(p[k]) - q.logp[k]);
      row[k] = nn::clamp_mask(z[k]) * (q.prob(k) - p[k]) * inv_b;
    }
    kl_i[b] = kl;
  });
  nn::batch_backward(adversary, inputs, buf, dout.data(), grad);
  return nn::sharded_sum(kl_i) * inv_b;
}

void standardize(std::span<double> xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  for (double& x : xs) x = (x - mean) / (sd + 1e-8);
}

}  // namespace agac::train
