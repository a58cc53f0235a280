#pragma once
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mlsc::core {

// Loops parallelize over independent outputs only; anything that feeds a
// reported number is reduced serially in index order afterwards, so results
// do not depend on the thread count.

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class F>
void par_for(std::int64_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace mlsc::core
