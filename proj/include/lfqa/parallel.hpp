#pragma once

#include <exception>

namespace lfqa {

/// Caps OpenMP worker count. jobs <= 0 selects the hardware thread count.
/// Results never depend on the setting: parallel loops only fill
/// independent slots and every reduction runs serially in a fixed order.
void set_jobs(int jobs);

int max_jobs();

/// OpenMP loop over [0, n) whose body may throw: the first exception is
/// captured inside the region and rethrown afterwards (throwing across an
/// OpenMP boundary would terminate).
template <class Fn>
void parallel_indexed(int n, Fn&& fn) {
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace lfqa
