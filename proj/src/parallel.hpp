#pragma once

#include <cstdint>
#include <exception>
#include <mutex>

namespace gpimage::detail {

/// Static-schedule OpenMP loop over [0, n). The first exception thrown by `body`
/// is rethrown on the calling thread once the loop has drained.
template <class Body>
void parallel_for(std::int64_t n, Body&& body) {
    std::exception_ptr error;
    std::mutex error_mutex;
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

} // namespace gpimage::detail
