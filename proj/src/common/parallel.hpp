#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace agac {

// All parallel loops in this codebase partition work into a fixed number of
// shards that does not depend on the thread count, and reduce shard results
// in shard order. Results are therefore bit-identical for any thread count,
// including the serial build.
inline constexpr int kGradShards = 8;

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Static-schedule parallel for over [0, n).
template <typename Fn>
inline void parallel_for(int64_t n, Fn&& fn) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < n; ++i) fn(i);
#else
  for (int64_t i = 0; i < n; ++i) fn(i);
#endif
}

}  // namespace agac
