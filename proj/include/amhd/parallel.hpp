#pragma once

#include <cstddef>
#include <vector>

namespace amhd {

/// Number of worker threads used by mode loops. Reads AMHD_THREADS once;
/// falls back to the OpenMP default.
int thread_count();
void set_thread_count(int n);

/// Runs body(i) for i in [0, n); iterations may run concurrently.
template <class Body>
void parallel_for(int n, Body&& body) {
#if defined(_OPENMP)
  const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
  for (int i = 0; i < n; ++i) body(i);
#else
  for (int i = 0; i < n; ++i) body(i);
#endif
}

/// Sum of body(i) over i in [0, n). Partials are computed independently and
/// combined in index order, so the result does not depend on thread count.
template <class Body>
double ordered_sum(int n, Body&& body) {
  std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
  parallel_for(n, [&](int i) { partial[static_cast<std::size_t>(i)] = body(i); });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

/// Maximum of body(i) over i in [0, n), or `init` if n == 0.
template <class Body>
double ordered_max(int n, double init, Body&& body) {
  std::vector<double> partial(static_cast<std::size_t>(n), init);
  parallel_for(n, [&](int i) { partial[static_cast<std::size_t>(i)] = body(i); });
  double m = init;
  for (double p : partial) m = p > m ? p : m;
  return m;
}

}  // namespace amhd
