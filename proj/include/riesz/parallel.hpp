#pragma once

#include <cstdlib>
#include <functional>

namespace riesz {

/// Execution policy for the data-parallel kernels. Every kernel has a serial
/// path that computes bit-identical results; tests and the benchmark compare
/// the two.
enum class Exec { Serial, OpenMP };

/// Worker cap from RIESZLAB_THREADS (0 = library default).
int thread_cap();

/// Runs body(i) for i in [0,n). Results must be written to disjoint slots so
/// the parallel path stays deterministic.
void par_for(long n, const std::function<void(long)>& body, Exec exec = Exec::OpenMP);

} // namespace riesz
