#include "ncalg/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace ncalg {

int configure_threads_from_env() {
  if (const char* env = std::getenv("NCALG_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) omp_set_num_threads(n);
    } catch (const std::exception&) {
      // ignored: fall back to the OpenMP default
    }
  }
  return omp_get_max_threads();
}

}  // namespace ncalg
