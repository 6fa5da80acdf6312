#include "rsd/threading.hpp"

#include <atomic>

#ifdef RSD_HAVE_OPENMP
#include <omp.h>
#endif

namespace rsd::threading {

namespace {
std::atomic<bool> g_enabled{
#ifdef RSD_HAVE_OPENMP
    true
#else
    false
#endif
};
}  // namespace

bool enabled() {
#ifdef RSD_HAVE_OPENMP
  return g_enabled.load(std::memory_order_relaxed);
#else
  return false;
#endif
}

void set_enabled(bool on) { g_enabled.store(on, std::memory_order_relaxed); }

int worker_count() {
#ifdef RSD_HAVE_OPENMP
  return enabled() ? omp_get_max_threads() : 1;
#else
  return 1;
#endif
}

void set_worker_count(int n) {
#ifdef RSD_HAVE_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace rsd::threading
