#pragma once

#include <span>
#include <vector>

#include "nn/kernels.hpp"
#include "nn/mlp.hpp"

namespace agac::train {

// One gathered minibatch. Spans alias scratch buffers owned by the caller;
// old_probs is size x action_dim row-major (actor snapshot distributions).
struct Minibatch {
  std::span<const nn::SparseInput> inputs;
  std::span<const int> actions;
  std::span<const double> adv;       // standardized modified advantages
  std::span<const double> old_logp;  // snapshot log pi(a|s)
  std::span<const double> targets;   // critic regression targets
  const double* old_probs = nullptr;
  int action_dim = 0;

  int size() const { return static_cast<int>(inputs.size()); }
};

struct PolicyLossStats {
  double loss = 0.0;  // clipped surrogate minus entropy bonus, batch mean
  double entropy = 0.0;
  double clip_frac = 0.0;
};

// All three losses are batch means. They overwrite grad with the analytic
// gradient of the returned scalar; coefficient weighting and clipping are
// the caller's business. dout is scratch, resized as needed.

PolicyLossStats ppo_policy_loss(const nn::ParamSet& actor, const Minibatch& mb, double clip_eps,
                                double entropy_coef, nn::BatchBuffers& buf,
                                std::vector<double>& dout, std::span<double> grad);

double value_loss(const nn::ParamSet& critic, std::span<const nn::SparseInput> inputs,
                  std::span<const double> targets, nn::BatchBuffers& buf,
                  std::vector<double>& dout, std::span<double> grad);

// Mean KL(old_probs || pi_psi); minimizing pulls the net toward the cached
// actor distributions.
double adversary_loss(const nn::ParamSet& adversary, std::span<const nn::SparseInput> inputs,
                      const double* old_probs, int action_dim, nn::BatchBuffers& buf,
                      std::vector<double>& dout, std::span<double> grad);

// In-place (x - mean) / (std + 1e-8) over the whole batch.
void standardize(std::span<double> xs);

}  // namespace agac::train
