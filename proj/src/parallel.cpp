#include "mwls/parallel.hpp"

#include <mutex>

#ifdef MWLS_HAVE_OPENMP
#include <omp.h>
#endif

namespace mwls {

namespace {
int g_max_threads = 0;
}

void set_max_threads(int n) { g_max_threads = n > 0 ? n : 0; }

int max_threads() {
#ifdef MWLS_HAVE_OPENMP
    return g_max_threads > 0 ? g_max_threads : omp_get_max_threads();
#else
    return 1;
#endif
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
    std::exception_ptr first;
    std::int64_t first_k = n;
    std::mutex mu;
#ifdef MWLS_HAVE_OPENMP
    const int threads = max_threads();
#pragma omp parallel for schedule(static) num_threads(threads) if (n > 1 && threads > 1)
#endif
    for (std::int64_t k = 0; k < n; ++k) {
        try {
            body(k);
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            // keep the lowest failing iteration so diagnostics are reproducible
            if (k < first_k) {
                first_k = k;
                first = std::current_exception();
            }
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace mwls
