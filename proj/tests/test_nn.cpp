#include <cmath>
#include <cstring>
#include <doctest.h>
#include <sstream>

#include "nn/adam.hpp"
#include "nn/dist.hpp"
#include "nn/network.hpp"
#include "test_util.hpp"

using namespace agac;
using namespace agac::nn;
using agac::testutil::random_params;

TEST_CASE("param layout and sizes") {
  ParamSet p(MlpSpec{{5, 3, 2}});
  CHECK(p.size() == 5 * 3 + 3 + 3 * 2 + 2);
  CHECK(p.w_off[0] == 0);
  CHECK(p.b_off[0] == 15);
  CHECK(p.w_off[1] == 18);
  CHECK(p.b_off[1] == 24);
  CHECK(p.spec.max_width() == 5);
  CHECK(p.spec.param_count() == p.size());
}

TEST_CASE("glorot init is seeded and bounded") {
  auto a = random_params({10, 8, 4}, 7);
  auto b = random_params({10, 8, 4}, 7);
  auto c = random_params({10, 8, 4}, 8);
  CHECK(std::memcmp(a.data.data(), b.data.data(), a.size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.data.data(), c.data.data(), a.size() * sizeof(double)) != 0);
  const double lim0 = std::sqrt(6.0 / (10 + 8));
  for (std::size_t k = 0; k < 80; ++k) CHECK(std::abs(a.w(0)[k]) <= lim0);
  for (int i = 0; i < 8; ++i) CHECK(a.b(0)[i] == 0.0);
  double mn = 1e9, mx = -1e9;
  for (std::size_t k = 0; k < 80; ++k) {
    mn = std::min(mn, a.w(0)[k]);
    mx = std::max(mx, a.w(0)[k]);
  }
  CHECK(mn < 0.0);
  CHECK(mx > 0.0);
}

TEST_CASE("binary and text serialization round-trip bitwise") {
  auto p = random_params({13, 9, 4}, 42);
  std::stringstream bin;
  p.save(bin);
  auto q = ParamSet::load(bin);
  REQUIRE(q.spec == p.spec);
  CHECK(std::memcmp(p.data.data(), q.data.data(), p.size() * sizeof(double)) == 0);

  std::stringstream txt;
  p.save_text(txt);
  auto r = ParamSet::load_text(txt);
  REQUIRE(r.spec == p.spec);
  CHECK(std::memcmp(p.data.data(), r.data.data(), p.size() * sizeof(double)) == 0);
}

TEST_CASE("categorical basics") {
  const double z4[4] = {0.7, 0.7, 0.7, 0.7};
  auto u = Categorical::from_logits({z4, 4});
  for (int k = 0; k < 4; ++k) CHECK(u.logp[k] == doctest::Approx(-std::log(4.0)).epsilon(1e-14));
  CHECK(u.entropy() == doctest::Approx(std::log(4.0)).epsilon(1e-14));

  const double z2[2] = {10.0, -10.0};
  auto d = Categorical::from_logits({z2, 2});
  CHECK(d.logp[0] == doctest::Approx(-std::log1p(std::exp(-20.0))).epsilon(1e-12));
  CHECK(d.logp[1] == doctest::Approx(-20.0 - std::log1p(std::exp(-20.0))).epsilon(1e-12));

  double psum = 0.0;
  Rng rng(3);
  double z7[7];
  for (int k = 0; k < 7; ++k) z7[k] = rng.uniform(-2.0, 2.0);
  auto g = Categorical::from_logits({z7, 7});
  for (int k = 0; k < 7; ++k) psum += g.prob(k);
  CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.entropy() > 0.0);
  CHECK(g.entropy() <= std::log(7.0) + 1e-12);
  CHECK(Categorical::kl(g, g) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("categorical kl matches a hand value") {
  const double zp[2] = {std::log(0.8), std::log(0.2)};
  const double zq[2] = {std::log(0.2), std::log(0.8)};
  auto p = Categorical::from_logits({zp, 2});
  auto q = Categorical::from_logits({zq, 2});
  CHECK(Categorical::kl(p, q) == doctest::Approx(0.6 * std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("logit clamp saturates at 30") {
  const double z[2] = {100.0, 0.0};
  auto d = Categorical::from_logits({z, 2});
  const double zc[2] = {30.0, 0.0};
  auto e = Categorical::from_logits({zc, 2});
  CHECK(d.logp[0] == e.logp[0]);
  CHECK(d.logp[1] == e.logp[1]);
  CHECK(clamp_mask(100.0) == 0.0);
  CHECK(clamp_mask(29.9) == 1.0);
  CHECK(clamp_mask(-30.0) == 0.0);
}

TEST_CASE("categorical sampling tracks probabilities") {
  const double z[3] = {std::log(0.5), std::log(0.3), std::log(0.2)};
  auto d = Categorical::from_logits({z, 3});
  Rng rng(99);
  int counts[3] = {0, 0, 0};
  const int n = 60000;
  for (int i = 0; i < n; ++i) counts[d.sample(rng)]++;
  CHECK(counts[0] / double(n) == doctest::Approx(0.5).epsilon(0.03));
  CHECK(counts[1] / double(n) == doctest::Approx(0.3).epsilon(0.05));
  CHECK(counts[2] / double(n) == doctest::Approx(0.2).epsilon(0.06));

  Rng r1(5), r2(5);
  for (int i = 0; i < 100; ++i) CHECK(d.sample(r1) == d.sample(r2));
}

TEST_CASE("dense and sparse forward agree bitwise") {
  auto p = random_params({20, 16, 12, 5}, 11);
  Rng rng(12);
  auto idx = testutil::random_active(20, 7, rng);
  std::vector<double> x(20, 0.0);
  for (auto j : idx) x[j] = 1.0;
  Tape td, ts;
  forward_dense(p, x, td);
  forward_sparse(p, SparseInput{idx}, ts);
  REQUIRE(td.out.size() == ts.out.size());
  for (std::size_t k = 0; k < td.out.size(); ++k) CHECK(td.out[k] == ts.out[k]);
  for (std::size_t l = 0; l < td.act.size(); ++l)
    for (std::size_t k = 0; k < td.act[l].size(); ++k) CHECK(td.act[l][k] == ts.act[l][k]);
}

TEST_CASE("backward matches central finite differences") {
  auto p = random_params({14, 10, 8, 6}, 21);
  Rng rng(22);
  auto idx = testutil::random_active(14, 5, rng);
  SparseInput x{idx};

  std::vector<double> c(6);
  for (auto& v : c) v = rng.uniform(-1.0, 1.0);
  auto loss = [&](const ParamSet& q) {
    Tape t;
    forward_sparse(q, x, t);
    double L = 0.0;
    for (int k = 0; k < 6; ++k) L += c[k] * t.out[k];
    return L;
  };

  Tape t;
  forward_sparse(p, x, t);
  std::vector<double> grad(p.size(), 0.0);
  backward_sparse(p, x, t, c, grad);

  const double h = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t k = rng.next_below(p.size());
    ParamSet q = p;
    q.data[k] += h;
    const double Lp = loss(q);
    q.data[k] = p.data[k] - h;
    const double Lm = loss(q);
    const double fd = (Lp - Lm) / (2 * h);
    const double an = grad[k];
    const double denom = std::max(1e-6, std::abs(fd) + std::abs(an));
    CHECK(std::abs(fd - an) / denom < 1e-4);
    ++checked;
  }
  CHECK(checked == 120);
}

TEST_CASE("backward accumulates across calls") {
  auto p = random_params({9, 7, 4}, 31);
  Rng rng(32);
  auto idx = testutil::random_active(9, 4, rng);
  SparseInput x{idx};
  Tape t;
  forward_sparse(p, x, t);
  std::vector<double> dout(4);
  for (auto& v : dout) v = rng.uniform(-1.0, 1.0);
  std::vector<double> g1(p.size(), 0.0), g2(p.size(), 0.0);
  backward_sparse(p, x, t, dout, g1);
  backward_sparse(p, x, t, dout, g2);
  backward_sparse(p, x, t, dout, g2);
  for (std::size_t k = 0; k < g1.size(); ++k) CHECK(g2[k] == doctest::Approx(2.0 * g1[k]));
}

TEST_CASE("adam single and second step match hand computation") {
  AdamConfig cfg;
  cfg.lr = 1e-3;
  AdamState st(2);
  std::vector<double> par = {1.0, -2.0};
  std::vector<double> g = {0.1, -0.2};
  adam_step(st, par, g, cfg);

  auto expect = [&](double g0, double m, double v, int t) {
    const double mh = m / (1.0 - std::pow(0.9, t));
    const double vh = v / (1.0 - std::pow(0.999, t));
    (void)g0;
    return cfg.lr * mh / (std::sqrt(vh) + 1e-8);
  };
  double m0 = 0.1 * 0.1, v0 = 0.001 * 0.01;
  CHECK(par[0] == doctest::Approx(1.0 - expect(0.1, m0, v0, 1)).epsilon(1e-12));
  double m1 = 0.1 * -0.2, v1 = 0.001 * 0.04;
  CHECK(par[1] == doctest::Approx(-2.0 - expect(-0.2, m1, v1, 1)).epsilon(1e-12));
  CHECK(st.t == 1);

  adam_step(st, par, g, cfg);
  m0 = 0.9 * m0 + 0.1 * 0.1;
  v0 = 0.999 * v0 + 0.001 * 0.01;
  CHECK(par[0] == doctest::Approx(1.0 - expect(0.1, 0.01, 1e-5, 1) - expect(0.1, m0, v0, 2))
                      .epsilon(1e-12));
  CHECK(st.t == 2);
}

TEST_CASE("grad norm clip") {
  std::vector<double> g = {3.0, 4.0};
  const double n = clip_grad_norm(g, 1.0);
  CHECK(n == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(g[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(0.8).epsilon(1e-15));

  std::vector<double> h = {0.3, 0.4};
  const double n2 = clip_grad_norm(h, 1.0);
  CHECK(n2 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(h[0] == 0.3);
  CHECK(h[1] == 0.4);
}

TEST_CASE("adam is deterministic across repeats") {
  auto p1 = random_params({30, 16, 8}, 77);
  auto p2 = random_params({30, 16, 8}, 77);
  AdamState s1(p1.size()), s2(p2.size());
  AdamConfig cfg;
  Rng rng(78);
  std::vector<double> g(p1.size());
  for (int it = 0; it < 5; ++it) {
    for (auto& v : g) v = rng.uniform(-1.0, 1.0);
    adam_step(s1, p1.data, g, cfg);
    adam_step(s2, p2.data, g, cfg);
  }
  CHECK(std::memcmp(p1.data.data(), p2.data.data(), p1.size() * sizeof(double)) == 0);
}
