#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ahr {

// Serial kernels are the reference; parallel ones must match them exactly.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

// AH_THREADS is the fallback when no explicit count is given.
inline int threads_from_env() {
    const char* s = std::getenv("AH_THREADS");
    if (!s || !*s) return 0;
    try {
        return std::max(0, std::stoi(s));
    } catch (...) {
        return 0;
    }
}

}  // namespace ahr
