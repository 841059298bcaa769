#pragma once

namespace graphfactor {

// Caps worker threads for OpenMP loops and the BLAS backend. n <= 0 restores
// the runtime default.
void set_thread_count(int n);
int thread_count();

}  // namespace graphfactor
