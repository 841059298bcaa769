#include "graphfactor/parallel.hpp"

#include <omp.h>

extern "C" void openblas_set_num_threads(int num_threads);

namespace graphfactor {

namespace {
int g_default_threads = omp_get_max_threads();
}

void set_thread_count(int n) {
  int t = n > 0 ? n : g_default_threads;
  omp_set_num_threads(t);
  openblas_set_num_threads(t);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace graphfactor
