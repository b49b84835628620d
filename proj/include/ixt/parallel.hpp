#pragma once

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ixt {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_max_threads(int k) {
#ifdef _OPENMP
  if (k >= 1) omp_set_num_threads(k);
#else
  (void)k;
#endif
}

// Index-parallel loop. f(i, tid) must write only to slots owned by index i, so
// results are identical for any thread count; tid selects per-thread scratch.
template <class F>
void parallel_for_index(std::uint64_t count, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    f(static_cast<std::uint64_t>(i), omp_get_thread_num());
  }
#else
  for (std::uint64_t i = 0; i < count; ++i) f(i, 0);
#endif
}

// Serial reference for the loop above; kept so tests and the benchmark can
// compare the two paths directly.
template <class F>
void serial_for_index(std::uint64_t count, F&& f) {
  for (std::uint64_t i = 0; i < count; ++i) f(i, 0);
}

}  // namespace ixt
