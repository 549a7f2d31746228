#include "mmid/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmid {

void set_max_threads(int n) {
#ifdef _OPENMP
    if (n >= 1) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

void apply_thread_cap_from_env() {
    const char *env = std::getenv("MMID_THREADS");
    if (!env) return;
    try {
        set_max_threads(std::stoi(env));
    } catch (const std::exception &) {
        // ignore malformed values
    }
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace mmid
