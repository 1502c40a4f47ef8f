#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef FHT_HAVE_OPENMP
#include <omp.h>
#endif

namespace fht {

/// Execution policy for the data-parallel kernels. Every parallel code path
/// has a serial twin that produces identical results element by element.
enum class Exec { serial, openmp };

inline Exec default_exec() {
#ifdef FHT_HAVE_OPENMP
    return Exec::openmp;
#else
    return Exec::serial;
#endif
}

/// Exceptions thrown by worker iterations are captured and rethrown on the
/// calling thread (an exception escaping an omp region would terminate).
template <typename Fn>
void parallel_for(std::ptrdiff_t n, Exec exec, Fn&& fn) {
    if (exec == Exec::openmp) {
#ifdef FHT_HAVE_OPENMP
        std::exception_ptr err;
        std::mutex err_mtx;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
#endif
    }
    for (std::ptrdiff_t i = 0; i < n; ++i) fn(i);
}

} // namespace fht
