#include "wedge/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wedge {

int thread_count() {
    const char* env = std::getenv("WEDGE_THREADS");
    if (env == nullptr) { return 1; }
    const int n = std::atoi(env);
    return std::clamp(n, 1, 256);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) { body(i); }
        return;
    }
    std::exception_ptr failure;
    std::mutex guard;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    const std::lock_guard lock(guard);
                    if (!failure) { failure = std::current_exception(); }
                    return;
                }
            }
        });
    }
    for (auto& t : pool) { t.join(); }
    if (failure) { std::rethrow_exception(failure); }
}

}  // namespace wedge
