#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mlrh {

// Execution policy for the data-parallel kernels. Every kernel keeps a plain
// serial path (the reference implementation the tests compare against); the
// parallel path must produce the same values up to summation-order rounding.
enum class Exec { serial, parallel };

namespace par {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Index-parallel loop: body(i) for i in [0, n). Each index writes only its
// own slot, so serial and parallel runs are bitwise identical.
template <typename Body>
void for_each_index(std::ptrdiff_t n, Exec exec, Body&& body) {
  if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
    return;
#endif
  }
  for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
}

}  // namespace par
}  // namespace mlrh
