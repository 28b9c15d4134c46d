#ifndef ENTWIT_PARALLEL_HPP
#define ENTWIT_PARALLEL_HPP

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace entwit {

/// Execution policy for ensemble loops (independent seeded work items).
/// Serial is the reference path; OpenMP must produce identical results
/// because every index owns its rng substream and writes only its slot.
enum class ExecPolicy { Serial, OpenMP };

inline ExecPolicy default_policy() {
#ifdef _OPENMP
  return ExecPolicy::OpenMP;
#else
  return ExecPolicy::Serial;
#endif
}

/// Runs f(i) for i in [0, n). f must not touch shared mutable state other
/// than its own output slot.
template <class F>
void for_each_index(std::size_t n, ExecPolicy policy, F&& f) {
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    f(static_cast<std::size_t>(i));
#else
  for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

}  // namespace entwit

#endif
