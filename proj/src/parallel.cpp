#include "lipmod/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lipmod {

void apply_thread_cap_from_env() {
#ifdef _OPENMP
  if (const char* env = std::getenv("LIPMOD_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) omp_set_num_threads(cap);
    } catch (...) {
      // ignore unparsable values
    }
  }
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace lipmod
