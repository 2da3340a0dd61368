#include "riesz/parallel.hpp"

#include <omp.h>

#include <string>

namespace riesz {

int thread_cap() {
    if (const char* env = std::getenv("RIESZLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 0;
}

void par_for(long n, const std::function<void(long)>& body, Exec exec) {
    if (exec == Exec::Serial || n < 2) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    const int cap = thread_cap();
#pragma omp parallel for schedule(dynamic, 1) num_threads(cap > 0 ? cap : omp_get_max_threads())
    for (long i = 0; i < n; ++i) body(i);
}

} // namespace riesz
