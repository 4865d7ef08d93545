#include "tabular/mdp.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace agac::tabular {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("tabular: " + what);
}

}  // namespace

void TabularMdp::validate() const {
  require(n_states >= 1 && n_actions >= 1, "empty state or action space");
  require(gamma >= 0.0 && gamma < 1.0, "gamma must be in [0, 1)");
  require(P.size() == static_cast<std::size_t>(n_states) * n_actions * n_states,
          "transition tensor size mismatch");
  require(R.size() == static_cast<std::size_t>(n_states) * n_actions, "reward table size mismatch");
  for (double x : R) require(std::isfinite(x), "rewards must be finite");
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      double sum = 0.0;
      for (int s2 = 0; s2 < n_states; ++s2) {
        const double q = p(s, a, s2);
        require(q >= 0.0, "negative transition probability");
        sum += q;
      }
      require(std::abs(sum - 1.0) <= 1e-12, "transition row does not sum to 1");
    }
  }
}

TabularMdp TabularMdp::random(int n_states, int n_actions, double gamma, std::uint64_t seed) {
  TabularMdp m;
  m.n_states = n_states;
  m.n_actions = n_actions;
  m.gamma = gamma;
  m.P.resize(static_cast<std::size_t>(n_states) * n_actions * n_states);
  m.R.resize(static_cast<std::size_t>(n_states) * n_actions);
  Rng rng(seed);
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      double* row = m.P.data() + (static_cast<std::size_t>(s) * n_actions + a) * n_states;
      double sum = 0.0;
      for (int s2 = 0; s2 < n_states; ++s2) {
        row[s2] = rng.uniform(0.05, 1.0);
        sum += row[s2];
      }
      for (int s2 = 0; s2 < n_states; ++s2) row[s2] /= sum;
      m.R[static_cast<std::size_t>(s) * n_actions + a] = rng.uniform(-1.0, 1.0);
    }
  }
  m.validate();
  return m;
}

TabularMdp TabularMdp::corridor(int n_states, double gamma) {
  TabularMdp m;
  m.n_states = n_states;
  m.n_actions = 2;
  m.gamma = gamma;
  m.P.assign(static_cast<std::size_t>(n_states) * 2 * n_states, 0.0);
  m.R.assign(static_cast<std::size_t>(n_states) * 2, 0.0);
  for (int s = 0; s < n_states; ++s) {
    const int left = s > 0 ? s - 1 : s;
    const int right = s < n_states - 1 ? s + 1 : s;
    m.P[(static_cast<std::size_t>(s) * 2 + 0) * n_states + left] = 1.0;
    m.P[(static_cast<std::size_t>(s) * 2 + 1) * n_states + right] = 1.0;
  }
  m.validate();
  return m;
}

void TabularMdp::save_text(std::ostream& os) const {
  os << "tabular-mdp-v1\n" << n_states << ' ' << n_actions << ' ';
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", gamma);
  os << buf << "\nR\n";
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", r(s, a));
      os << buf << (a + 1 == n_actions ? '\n' : ' ');
    }
  }
  os << "P\n";
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) {
      for (int s2 = 0; s2 < n_states; ++s2) {
        std::snprintf(buf, sizeof buf, "%.17g", p(s, a, s2));
        os << buf << (s2 + 1 == n_states ? '\n' : ' ');
      }
    }
  }
}

TabularMdp TabularMdp::load_text(std::istream& is) {
  std::string tag;
  is >> tag;
  if (tag != "tabular-mdp-v1") throw std::runtime_error("mdp load: bad header");
  TabularMdp m;
  is >> m.n_states >> m.n_actions >> m.gamma;
  if (!is || m.n_states < 1 || m.n_actions < 1) throw std::runtime_error("mdp load: bad sizes");
  is >> tag;
  if (tag != "R") throw std::runtime_error("mdp load: expected R block");
  m.R.resize(static_cast<std::size_t>(m.n_states) * m.n_actions);
  for (double& x : m.R) is >> x;
  is >> tag;
  if (tag != "P") throw std::runtime_error("mdp load: expected P block");
  m.P.resize(static_cast<std::size_t>(m.n_states) * m.n_actions * m.n_states);
  for (double& x : m.P) is >> x;
  if (!is) throw std::runtime_error("mdp load: truncated tables");
  m.validate();
  return m;
}

void TabularPolicy::validate() const {
  require(p.size() == static_cast<std::size_t>(n_states) * n_actions, "policy size mismatch");
  for (int s = 0; s < n_states; ++s) {
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      require(at(s, a) >= kPolicyFloor * (1.0 - 1e-9), "policy entry below floor");
      sum += at(s, a);
    }
    require(std::abs(sum - 1.0) <= 1e-12, "policy row does not sum to 1");
  }
}

void TabularPolicy::floor_rows() {
  for (int s = 0; s < n_states; ++s) {
    double* r = row(s);
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      if (r[a] < kPolicyFloor) r[a] = kPolicyFloor;
      sum += r[a];
    }
    for (int a = 0; a < n_actions; ++a) r[a] /= sum;
  }
}

TabularPolicy TabularPolicy::uniform(int n_states, int n_actions) {
  TabularPolicy pi;
  pi.n_states = n_states;
  pi.n_actions = n_actions;
  pi.p.assign(static_cast<std::size_t>(n_states) * n_actions, 1.0 / n_actions);
  return pi;
}

TabularPolicy TabularPolicy::random(int n_states, int n_actions, std::uint64_t seed) {
  TabularPolicy pi;
  pi.n_states = n_states;
  pi.n_actions = n_actions;
  pi.p.resize(static_cast<std::size_t>(n_states) * n_actions);
  Rng rng(seed);
  for (int s = 0; s < n_states; ++s) {
    double* r = pi.row(s);
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) {
      r[a] = rng.uniform(0.02, 1.0);
      sum += r[a];
    }
    for (int a = 0; a < n_actions; ++a) r[a] /= sum;
  }
  return pi;
}

}  // namespace agac::tabular
