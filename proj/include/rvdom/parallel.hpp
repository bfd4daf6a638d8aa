#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rvdom {

enum class Exec { serial, parallel };

// Per-cell kernels are pure, so the parallel path writes disjoint outputs
// and produces bit-identical results to the serial reference.
template <class F>
void parallel_for(Exec exec, std::size_t n, F&& body) {
#ifdef _OPENMP
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace rvdom
