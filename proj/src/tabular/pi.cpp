#include "tabular/pi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace agac::tabular {

namespace {

double flog(double x) { return std::log(std::max(x, kPolicyFloor)); }

// Solve A x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < 1e-14)
      throw std::runtime_error("q_eval: singular Bellman system");
    if (piv != col) {
      for (int k = col; k < n; ++k) std::swap(a[piv * n + k], a[col * n + k]);
      std::swap(b[piv], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int k = r + 1; k < n; ++k) acc -= a[r * n + k] * x[k];
    x[r] = acc / a[r * n + r];
  }
  return x;
}

std::vector<double> evaluate_v(const TabularMdp& mdp, const TabularPolicy& pi) {
  const int S = mdp.n_states, A = mdp.n_actions;
  std::vector<double> lhs(static_cast<std::size_t>(S) * S, 0.0), rhs(S, 0.0);
  for (int s = 0; s < S; ++s) {
    lhs[s * S + s] = 1.0;
    for (int a = 0; a < A; ++a) {
      const double w = pi.at(s, a);
      rhs[s] += w * mdp.r(s, a);
      for (int s2 = 0; s2 < S; ++s2) lhs[s * S + s2] -= mdp.gamma * w * mdp.p(s, a, s2);
    }
  }
  return solve_linear(std::move(lhs), std::move(rhs));
}

std::vector<double> q_from_v(const TabularMdp& mdp, const std::vector<double>& v) {
  const int S = mdp.n_states, A = mdp.n_actions;
  std::vector<double> q(static_cast<std::size_t>(S) * A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      double acc = mdp.r(s, a);
      for (int s2 = 0; s2 < S; ++s2) acc += mdp.gamma * mdp.p(s, a, s2) * v[s2];
      q[s * A + a] = acc;
    }
  }
  return q;
}

// Normalize per-state log weights into a floored policy.
TabularPolicy policy_from_logw(const std::vector<double>& logw, int S, int A) {
  TabularPolicy pi;
  pi.n_states = S;
  pi.n_actions = A;
  pi.p.resize(static_cast<std::size_t>(S) * A);
  for (int s = 0; s < S; ++s) {
    const double* lw = logw.data() + static_cast<std::size_t>(s) * A;
    double mx = lw[0];
    for (int a = 1; a < A; ++a) mx = std::max(mx, lw[a]);
    double sum = 0.0;
    double* r = pi.row(s);
    for (int a = 0; a < A; ++a) {
      r[a] = std::exp(lw[a] - mx);
      sum += r[a];
    }
    for (int a = 0; a < A; ++a) r[a] /= sum;
  }
  pi.floor_rows();
  return pi;
}

double row_kl(const double* p, const double* q, int n) {
  double acc = 0.0;
  for (int a = 0; a < n; ++a) acc += p[a] * (flog(p[a]) - flog(q[a]));
  return acc;
}

double row_entropy(const double* p, int n) {
  double acc = 0.0;
  for (int a = 0; a < n; ++a) acc -= p[a] * flog(p[a]);
  return acc;
}

}  // namespace

std::vector<double> q_eval(const TabularMdp& mdp, const TabularPolicy& pi) {
  return q_from_v(mdp, evaluate_v(mdp, pi));
}

PiObjective pi_objective(const TabularPolicy& pi, const TabularPolicy& pi_k,
                         const TabularPolicy& pi_adv, const std::vector<double>& q, double c,
                         double alpha) {
  const int S = pi.n_states, A = pi.n_actions;
  PiObjective out;
  for (int s = 0; s < S; ++s) {
    double direct = 0.0, eq = 0.0;
    for (int a = 0; a < A; ++a) {
      const double w = pi.at(s, a);
      direct += w * (q[s * A + a] + c * (flog(pi_k.at(s, a)) - flog(pi_adv.at(s, a))) -
                     alpha * flog(w));
      eq += w * q[s * A + a];
    }
    out.direct += direct;
    out.decomposed += eq - c * row_kl(pi.row(s), pi_k.row(s), A) +
                      c * row_kl(pi.row(s), pi_adv.row(s), A) + alpha * row_entropy(pi.row(s), A);
  }
  out.direct /= S;
  out.decomposed /= S;
  return out;
}

TabularPolicy closed_form_update(const TabularPolicy& pi_k, const TabularPolicy& pi_adv,
                                 const std::vector<double>& q, double c, double alpha) {
  if (alpha <= 0.0) throw std::invalid_argument("closed_form_update: alpha must be positive");
  const int S = pi_k.n_states, A = pi_k.n_actions;
  std::vector<double> logw(static_cast<std::size_t>(S) * A);
  const double ratio_exp = c / alpha;
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      logw[s * A + a] =
          ratio_exp * (flog(pi_k.at(s, a)) - flog(pi_adv.at(s, a))) + q[s * A + a] / alpha;
  return policy_from_logw(logw, S, A);
}

double kl_regularized_reduction_check(const TabularMdp& mdp, const TabularPolicy& pi_k,
                                      const TabularPolicy& pi_adv, double c, double alpha) {
  if (c != alpha) throw std::invalid_argument("reduction check requires c == alpha");
  const int S = mdp.n_states, A = mdp.n_actions;

  const auto v = evaluate_v(mdp, pi_k);
  const auto q = q_from_v(mdp, v);
  const auto direct = closed_form_update(pi_k, pi_adv, q, c, alpha);

  // KL-regularized improvement on the shifted reward: the greedy targets
  // are (r - c log pi_adv) + gamma P v, and pi' propto pi_k exp(targets/c).
  std::vector<double> logw(static_cast<std::size_t>(S) * A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      double target = mdp.r(s, a) - c * flog(pi_adv.at(s, a));
      for (int s2 = 0; s2 < S; ++s2) target += mdp.gamma * mdp.p(s, a, s2) * v[s2];
      logw[s * A + a] = flog(pi_k.at(s, a)) + target / c;
    }
  }
  const auto shifted = policy_from_logw(logw, S, A);

  double diff = 0.0;
  for (std::size_t i = 0; i < direct.p.size(); ++i)
    diff = std::max(diff, std::abs(direct.p[i] - shifted.p[i]));
  return diff;
}

std::vector<PiIterate> run_pi(const TabularMdp& mdp, double c, double alpha, AdversaryRule rule,
                              int iterations, const RunPiOptions& opt) {
  mdp.validate();
  const int S = mdp.n_states, A = mdp.n_actions;
  TabularPolicy pi = opt.init_pi ? *opt.init_pi : TabularPolicy::uniform(S, A);
  TabularPolicy adv = opt.init_adv ? *opt.init_adv : TabularPolicy::uniform(S, A);
  pi.floor_rows();
  adv.floor_rows();

  std::vector<PiIterate> trace;
  trace.reserve(iterations);
  for (int k = 0; k < iterations; ++k) {
    const auto q = q_eval(mdp, pi);
    const auto next = closed_form_update(pi, adv, q, c, alpha);

    PiIterate it;
    it.k = k;
    it.q = q;
    it.c = c;
    it.alpha = alpha;
    it.pi_adv = adv;
    it.j = pi_objective(next, pi, adv, q, c, alpha).direct;
    it.kl_step = 0.0;
    it.kl_adv = 0.0;
    for (int s = 0; s < S; ++s) {
      it.kl_step += row_kl(next.row(s), pi.row(s), A) / S;
      it.kl_adv += row_kl(next.row(s), adv.row(s), A) / S;
    }

    // exact return of the policy greedy in Q, uniform start distribution
    TabularPolicy greedy = TabularPolicy::uniform(S, A);
    for (int s = 0; s < S; ++s) {
      int best = 0;
      for (int a = 1; a < A; ++a)
        if (q[s * A + a] > q[s * A + best]) best = a;
      for (int a = 0; a < A; ++a) greedy.at(s, a) = a == best ? 1.0 : 0.0;
    }
    const auto vg = evaluate_v(mdp, greedy);
    double ret = 0.0;
    for (int s = 0; s < S; ++s) ret += vg[s] / S;
    it.greedy_return = ret;

    switch (rule) {
      case AdversaryRule::kEma:
        for (std::size_t i = 0; i < adv.p.size(); ++i)
          adv.p[i] = (1.0 - opt.tau) * adv.p[i] + opt.tau * next.p[i];
        break;
      case AdversaryRule::kPrevious:
        adv = pi;
        break;
      case AdversaryRule::kFixed:
        break;
    }
    pi = next;
    it.pi = pi;
    trace.push_back(std::move(it));
  }
  return trace;
}

}  // namespace agac::tabular
