#pragma once

#include <vector>

#include "tabular/mdp.hpp"

namespace agac::tabular {

// Exact policy evaluation: solves the linear Bellman system for V by
// Gaussian elimination, then Q(s, a) = R + gamma * P V. Requires gamma < 1.
std::vector<double> q_eval(const TabularMdp& mdp, const TabularPolicy& pi);

// E_s E_{a~pi}[Q + c(log pi_k - log pi_adv) - alpha log pi], uniform over
// states, computed two ways that must agree: directly, and as
// E[Q] - c KL(pi||pi_k) + c KL(pi||pi_adv) + alpha H(pi).
struct PiObjective {
  double direct = 0.0;
  double decomposed = 0.0;
};
PiObjective pi_objective(const TabularPolicy& pi, const TabularPolicy& pi_k,
                         const TabularPolicy& pi_adv, const std::vector<double>& q, double c,
                         double alpha);

// Per state: pi' propto (pi_k / pi_adv)^(c/alpha) * exp(Q / alpha),
// assembled in log space with max subtraction. alpha must be positive.
TabularPolicy closed_form_update(const TabularPolicy& pi_k, const TabularPolicy& pi_adv,
                                 const std::vector<double>& q, double c, double alpha);

// With c = alpha the update above coincides with a KL(pi||pi_k)-regularized
// improvement step on the shifted reward r - c log pi_adv. Both policies
// are computed through independent paths; returns the max elementwise
// discrepancy. Throws std::invalid_argument when c != alpha.
double kl_regularized_reduction_check(const TabularMdp& mdp, const TabularPolicy& pi_k,
                                      const TabularPolicy& pi_adv, double c, double alpha);

enum class AdversaryRule { kEma, kPrevious, kFixed };

struct PiIterate {
  int k = 0;
  TabularPolicy pi;       // policy after this iteration
  TabularPolicy pi_adv;   // adversary this iteration was computed against
  std::vector<double> q;  // Q of the pre-update policy
  double c = 0.0;
  double alpha = 0.0;
  double j = 0.0;        // J of the new policy (direct form)
  double kl_step = 0.0;  // KL(pi_{k+1} || pi_k)
  double kl_adv = 0.0;   // KL(pi_{k+1} || pi_adv)
  double greedy_return = 0.0;
};

struct RunPiOptions {
  double tau = 0.3;  // EMA mixing weight
  const TabularPolicy* init_pi = nullptr;
  const TabularPolicy* init_adv = nullptr;
};

std::vector<PiIterate> run_pi(const TabularMdp& mdp, double c, double alpha, AdversaryRule rule,
                              int iterations, const RunPiOptions& opt = {});

}  // namespace agac::tabular
