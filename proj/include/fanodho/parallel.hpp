// parallel.hpp — OpenMP work distribution with a serial reference path.
// Every parallel kernel in the library takes an ExecPolicy so tests can pin
// the serial implementation and assert bit-identical results.

#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fanodho {

enum class ExecPolicy { Serial, Parallel };

// Index-parallel loop with independent per-index writes. Deterministic for
// any thread count because no cross-index state is shared.
template <class Body>
void parallel_for(std::size_t n, ExecPolicy policy, const Body& body) {
    if (policy == ExecPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            body(static_cast<std::size_t>(i));
        return;
#endif
    }
    for (std::size_t i = 0; i < n; ++i) body(i);
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace fanodho
