#include "metriclab/parallel.hpp"
#include "metriclab/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace metriclab {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::malformed_input: return "malformed input";
        case ErrorKind::domain: return "domain error";
        case ErrorKind::resolution: return "resolution error";
        case ErrorKind::schedule: return "schedule error";
        case ErrorKind::construction: return "construction error";
        case ErrorKind::alphabet: return "alphabet error";
        case ErrorKind::insufficient_depth: return "insufficient depth";
        case ErrorKind::degeneracy: return "degeneracy error";
        case ErrorKind::insufficient_data: return "insufficient data";
    }
    return "error";
}

std::size_t worker_count() {
    if (const char* env = std::getenv("METRIC_LAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = n * w / workers;
        std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace metriclab
