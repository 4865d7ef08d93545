#include "nn/dist.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace agac::nn {

Categorical Categorical::from_logits(std::span<const double> logits) {
  Categorical d;
  d.n = static_cast<int>(logits.size());
  assert(d.n >= 1 && d.n <= kMaxCategories);
  double m = -kLogitClamp;
  for (int k = 0; k < d.n; ++k) {
    const double c = std::clamp(logits[k], -kLogitClamp, kLogitClamp);
    d.logp[k] = c;
    m = std::max(m, c);
  }
  double s = 0.0;
  for (int k = 0; k < d.n; ++k) s += std::exp(d.logp[k] - m);
  const double lse = m + std::log(s);
  for (int k = 0; k < d.n; ++k) d.logp[k] -= lse;
  return d;
}

double Categorical::prob(int a) const { return std::exp(logp[a]); }

double Categorical::entropy() const {
  double h = 0.0;
  for (int k = 0; k < n; ++k) h -= std::exp(logp[k]) * logp[k];
  return h;
}

double Categorical::kl(const Categorical& p, const Categorical& q) {
  assert(p.n == q.n);
  double kl = 0.0;
  for (int k = 0; k < p.n; ++k) kl += std::exp(p.logp[k]) * (p.logp[k] - q.logp[k]);
  return kl;
}

int Categorical::sample(Rng& rng) const {
  const double u = rng.uniform();
  double cum = 0.0;
  for (int k = 0; k < n; ++k) {
    cum += std::exp(logp[k]);
    if (u < cum) return k;
  }
  return n - 1;
}

}  // namespace agac::nn
