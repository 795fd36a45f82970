#include "lfqa/parallel.hpp"

#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lfqa {

void set_jobs(int jobs) {
  if (jobs <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    jobs = hw == 0 ? 1 : static_cast<int>(hw);
  }
#ifdef _OPENMP
  omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

int max_jobs() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace lfqa
