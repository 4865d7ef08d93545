// Times the parallel batch kernels against the serial reference on
// training-shaped batches and checks that results agree bitwise.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "common/rng.hpp"
#include "nn/kernels.hpp"
#include "nn/reference.hpp"

using namespace agac;
using namespace agac::nn;

namespace {

struct Case {
  std::string name;
  std::vector<int> dims;
  int B;
  int nnz;
};

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 20;
  if (argc > 1) reps = std::atoi(argv[1]);
  if (reps <= 0) reps = 20;

  const std::vector<Case> cases = {
      {"policy-minibatch", {2744, 128, 128, 7}, 256, 180},
      {"critic-minibatch", {2744, 128, 128, 1}, 256, 180},
      {"rollout-step", {2744, 128, 128, 7}, 16, 180},
  };

#ifdef _OPENMP
  std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("openmp disabled, serial build\n");
#endif
  std::printf("%-18s %6s %8s | %10s %10s %8s | %10s %10s %8s | %s\n", "case", "B", "params",
              "fwd ref", "fwd par", "speedup", "bwd ref", "bwd par", "speedup", "bitwise");

  for (const auto& c : cases) {
    ParamSet p(MlpSpec{c.dims});
    Rng rng(2024);
    p.init_glorot(rng);

    std::vector<std::vector<std::int32_t>> storage(c.B);
    std::vector<SparseInput> xs;
    Rng irng(7);
    for (auto& s : storage) {
      for (int j = 0; j < c.dims[0]; ++j)
        if (irng.uniform() < double(c.nnz) / c.dims[0]) s.push_back(j);
      xs.push_back({std::span<const std::int32_t>(s)});
    }
    std::vector<double> dout(static_cast<std::size_t>(c.B) * p.spec.out_dim());
    for (auto& v : dout) v = irng.uniform(-1.0, 1.0);

    BatchBuffers ref_buf, par_buf;
    std::vector<double> g_ref(p.size()), g_par(p.size());

    ref::batch_forward(p, xs, ref_buf);
    batch_forward(p, xs, par_buf);
    ref::batch_backward(p, xs, ref_buf, dout.data(), g_ref);
    batch_backward(p, xs, par_buf, dout.data(), g_par);

    const bool same_out =
        std::memcmp(ref_buf.out.data(), par_buf.out.data(),
                    static_cast<std::size_t>(c.B) * p.spec.out_dim() * sizeof(double)) == 0;
    const bool same_grad =
        std::memcmp(g_ref.data(), g_par.data(), p.size() * sizeof(double)) == 0;

    double t0 = now_ms();
    for (int r = 0; r < reps; ++r) ref::batch_forward(p, xs, ref_buf);
    const double fwd_ref = (now_ms() - t0) / reps;

    t0 = now_ms();
    for (int r = 0; r < reps; ++r) batch_forward(p, xs, par_buf);
    const double fwd_par = (now_ms() - t0) / reps;

    t0 = now_ms();
    for (int r = 0; r < reps; ++r) ref::batch_backward(p, xs, ref_buf, dout.data(), g_ref);
    const double bwd_ref = (now_ms() - t0) / reps;

    t0 = now_ms();
    for (int r = 0; r < reps; ++r) batch_backward(p, xs, par_buf, dout.data(), g_par);
    const double bwd_par = (now_ms() - t0) / reps;

    std::printf("%-18s %6d %8zu | %8.3fms %8.3fms %7.2fx | %8.3fms %8.3fms %7.2fx | %s\n",
                c.name.c_str(), c.B, p.size(), fwd_ref, fwd_par, fwd_ref / fwd_par, bwd_ref,
                bwd_par, bwd_ref / bwd_par, (same_out && same_grad) ? "ok" : "MISMATCH");
    if (!(same_out && same_grad)) return 1;
  }
  return 0;
}
